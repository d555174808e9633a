"""Deliberately naive exhaustive graph-property checkers.

These operate on :class:`Multigraph` values only and share no logic with the
cores; they are the ground truth of the test-suite.
"""

from __future__ import annotations

import itertools
import re
from collections import Counter
from typing import Callable

from .errors import BudgetExceeded
from .graphs import Multigraph

DEFAULT_MAX_VERTICES = 12


def _guard(g: Multigraph, limit: int) -> None:
    if g.n > limit:
        raise BudgetExceeded(f"oracle size guard: {g.n} vertices > {limit}")


def _components(vertices, pairs) -> int:
    vertices = list(vertices)
    adj = {v: set() for v in vertices}
    for a, b in pairs:
        if a in adj and b in adj:
            adj[a].add(b)
            adj[b].add(a)
    seen: set = set()
    count = 0
    for v in vertices:
        if v in seen:
            continue
        count += 1
        stack = [v]
        seen.add(v)
        while stack:
            x = stack.pop()
            for y in adj[x] - seen:
                seen.add(y)
                stack.append(y)
    return count


def _pairs(g: Multigraph) -> list[tuple[int, int]]:
    return [(a, b) for _, a, b in g.edge_ends]


def is_vertex_cover(g: Multigraph, cover) -> bool:
    return all(a in cover or b in cover for a, b in _pairs(g))


def min_vertex_cover(g: Multigraph, limit: int = DEFAULT_MAX_VERTICES) -> int:
    _guard(g, limit)
    for size in range(g.n + 1):
        for cover in itertools.combinations(g.vertices, size):
            if is_vertex_cover(g, set(cover)):
                return size
    raise AssertionError("the full vertex set is always a cover")


def min_vertex_cover_branching(g: Multigraph) -> int:
    """Independent branch-and-bound: pick an uncovered edge, branch on its endpoints."""
    best = [g.n]

    def go(edges, taken):
        if taken >= best[0]:
            return
        if not edges:
            best[0] = taken
            return
        a, b = edges[0]
        go([e for e in edges if a not in e], taken + 1)
        go([e for e in edges if b not in e], taken + 1)

    go(_pairs(g), 0)
    return best[0]


def vertex_cover_patterns(g: Multigraph, top_map, r: int | None, limit: int = DEFAULT_MAX_VERTICES) -> set[tuple[int, int]]:
    """All ``(R, s)``: ``R`` a mask of active labels, ``s`` the least size of a vertex cover
    meeting the active vertices exactly in those labelled by ``R``, with ``s <= r``."""
    _guard(g, limit)
    top = dict(top_map)
    best: dict[int, int] = {}
    for bits in range(1 << g.n):
        cover = {v for i, v in enumerate(g.vertices) if bits >> i & 1}
        if not is_vertex_cover(g, cover):
            continue
        R = 0
        for u, x in top.items():
            if x in cover:
                R |= 1 << (u - 1)
        s = len(cover)
        if R not in best or s < best[R]:
            best[R] = s
    return {(R, s) for R, s in best.items() if r is None or s <= r}


def is_simple(g: Multigraph) -> bool:
    pairs = _pairs(g)
    return len(set(pairs)) == len(pairs)


def degrees(g: Multigraph) -> dict[int, int]:
    deg = {v: 0 for v in g.vertices}
    for a, b in _pairs(g):
        deg[a] += 1
        deg[b] += 1
    return deg


def max_degree_ge(g: Multigraph, d: int) -> bool:
    return any(x >= d for x in degrees(g).values())


def min_degree_le(g: Multigraph, d: int) -> bool:
    return any(x <= d for x in degrees(g).values())


def colorable(g: Multigraph, c: int, limit: int = DEFAULT_MAX_VERTICES) -> bool:
    _guard(g, limit)
    index = {v: i for i, v in enumerate(g.vertices)}
    pairs = [(index[a], index[b]) for a, b in _pairs(g)]
    for col in itertools.product(range(c), repeat=g.n):
        if all(col[a] != col[b] for a, b in pairs):
            return True
    return False


def connected(g: Multigraph) -> bool:
    """The empty graph counts as connected."""
    return _components(g.vertices, _pairs(g)) <= 1


def vertex_connectivity_le(g: Multigraph, c: int, limit: int = DEFAULT_MAX_VERTICES) -> bool:
    """Some set of at most ``c`` vertices leaves at least two components when deleted."""
    _guard(g, limit)
    pairs = _pairs(g)
    for size in range(min(c, g.n) + 1):
        for gone in itertools.combinations(g.vertices, size):
            rest = [v for v in g.vertices if v not in gone]
            if _components(rest, [(a, b) for a, b in pairs if a in rest and b in rest]) >= 2:
                return True
    return False


def edge_connectivity_le(g: Multigraph, c: int, limit: int = DEFAULT_MAX_VERTICES) -> bool:
    """Some set of at most ``c`` edges leaves at least two components when deleted."""
    _guard(g, limit)
    pairs = _pairs(g)
    for size in range(min(c, len(pairs)) + 1):
        for gone in itertools.combinations(range(len(pairs)), size):
            kept = [p for i, p in enumerate(pairs) if i not in gone]
            if _components(g.vertices, kept) >= 2:
                return True
    return False


def hamiltonian(g: Multigraph, limit: int = DEFAULT_MAX_VERTICES) -> bool:
    """A cycle through every vertex; cycles need at least three vertices."""
    _guard(g, limit)
    if g.n < 3:
        return False
    adj = {(a, b) for a, b in _pairs(g)} | {(b, a) for a, b in _pairs(g)}
    first, *rest = g.vertices
    for perm in itertools.permutations(rest):
        cycle = (first, *perm, first)
        if all((cycle[i], cycle[i + 1]) in adj for i in range(g.n)):
            return True
    return False


def nowhere_zero_flow(g: Multigraph, m: int, limit: int = DEFAULT_MAX_VERTICES) -> bool:
    """Nowhere-zero Z_m-flow, trying every orientation and every nonzero value per edge."""
    _guard(g, limit)
    ends = _pairs(g)
    for orient in itertools.product((0, 1), repeat=len(ends)):
        arcs = [(a, b) if o == 0 else (b, a) for (a, b), o in zip(ends, orient)]
        for vals in itertools.product(range(1, m), repeat=len(ends)):
            bal = {v: 0 for v in g.vertices}
            for (a, b), f in zip(arcs, vals):
                bal[a] += f
                bal[b] -= f
            if all(x % m == 0 for x in bal.values()):
                return True
    return False


def nowhere_zero_flow_fixed_orientation(g: Multigraph, m: int, limit: int = DEFAULT_MAX_VERTICES) -> bool:
    """Same question with one orientation only: values are closed under negation."""
    _guard(g, limit)
    ends = _pairs(g)
    for vals in itertools.product(range(1, m), repeat=len(ends)):
        bal = {v: 0 for v in g.vertices}
        for (a, b), f in zip(ends, vals):
            bal[a] += f
            bal[b] -= f
        if all(x % m == 0 for x in bal.values()):
            return True
    return False


def has_minor(g: Multigraph, h: Multigraph, limit: int = DEFAULT_MAX_VERTICES) -> bool:
    """Branch-set enumeration: every vertex of ``g`` goes to one branch set or to none."""
    _guard(g, limit)
    if h.n == 0:
        return True
    hv = list(h.vertices)
    need = Counter((min(a, b), max(a, b)) for _, a, b in h.edge_ends)
    pairs = _pairs(g)
    for assign in itertools.product(range(len(hv) + 1), repeat=g.n):
        owner = {v: assign[i] for i, v in enumerate(g.vertices)}
        ok = True
        for j in range(1, len(hv) + 1):
            branch = [v for v in g.vertices if owner[v] == j]
            if not branch or _components(branch, [(a, b) for a, b in pairs if owner[a] == j and owner[b] == j]) != 1:
                ok = False
                break
        if not ok:
            continue
        have = Counter()
        for a, b in pairs:
            x, y = owner[a], owner[b]
            if x and y and x != y:
                have[(hv[min(x, y) - 1], hv[max(x, y) - 1])] += 1
        if all(have[(min(a, b), max(a, b))] >= n for (a, b), n in need.items()):
            return True
    return False


def treewidth(g: Multigraph, limit: int = 9) -> int:
    """Exact treewidth as the best elimination ordering (-1 for the empty graph)."""
    _guard(g, limit)
    if g.n == 0:
        return -1
    base = {v: set() for v in g.vertices}
    for a, b in _pairs(g):
        base[a].add(b)
        base[b].add(a)
    best = g.n - 1
    for order in itertools.permutations(g.vertices):
        adj = {v: set(s) for v, s in base.items()}
        width = 0
        for v in order:
            nb = adj.pop(v)
            width = max(width, len(nb))
            if width >= best:
                break
            for x in nb:
                adj[x] |= nb - {x}
                adj[x].discard(v)
        else:
            best = width
    return best


# ---------------------------------------------------------------- dispatch

_SPEC = re.compile(r"^\s*([A-Za-z]+)\s*(?:\(\s*([^)]*?)\s*\))?\s*$")


def oracle_for(spec: str, minor_graph: Multigraph | None = None, limit: int = DEFAULT_MAX_VERTICES) -> Callable[[Multigraph], bool | int]:
    """Oracle for a property written like a registry core name.

    ``MinVertexCover`` yields an integer; every other name yields a boolean. For
    ``Minor(...)`` pass the pattern graph as ``minor_graph``.
    """
    m = _SPEC.match(spec)
    if not m:
        raise ValueError(f"bad property spec {spec!r}")
    name, arg = m.group(1), m.group(2)
    n = int(arg) if arg and arg.lstrip("-").isdigit() else None
    table: dict[str, Callable[[Multigraph], bool | int]] = {
        "MinVertexCover": lambda g: min_vertex_cover(g, limit),
        "VertexCover": lambda g: min_vertex_cover(g, limit) <= n,
        "Simple": is_simple,
        "MaxDegGe": lambda g: max_degree_ge(g, n),
        "MinDegLe": lambda g: min_degree_le(g, n),
        "Colorable": lambda g: colorable(g, n, limit),
        "Conn": connected,
        "VConnLe": lambda g: vertex_connectivity_le(g, n, limit),
        "EConnLe": lambda g: edge_connectivity_le(g, n, limit),
        "Hamiltonian": lambda g: hamiltonian(g, limit),
        "NZFlow": lambda g: nowhere_zero_flow_fixed_orientation(g, n, limit),
        "Minor": lambda g: has_minor(g, minor_graph, limit),
    }
    if name not in table:
        raise ValueError(f"no oracle for {name!r}")
    if name == "Minor" and minor_graph is None:
        raise ValueError("Minor oracle needs the pattern graph")
    return table[name]


def oracle_check(spec: str, g: Multigraph, minor_graph: Multigraph | None = None, limit: int = DEFAULT_MAX_VERTICES) -> bool | int:
    return oracle_for(spec, minor_graph, limit)(g)
