"""Multigraphs with explicit edge ids, boundaried graphs, the boundary join, isomorphism."""

from __future__ import annotations

import itertools
import json
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import PreconditionError, ValidationError


@dataclass(frozen=True)
class Multigraph:
    """Graph ``(V, E, I)`` with positive integer ids.

    Stored as sorted vertex ids plus ``(edge id, u, v)`` triples with ``u < v``;
    the incidence relation is derived. Parallel edges are allowed, self-loops are not.
    """

    vertices: tuple[int, ...] = ()
    edge_ends: tuple[tuple[int, int, int], ...] = ()

    def __post_init__(self):
        vs = tuple(sorted(set(self.vertices)))
        if len(vs) != len(self.vertices):
            raise ValidationError("duplicate vertex id")
        ends = []
        seen = set()
        vset = set(vs)
        for e, a, b in self.edge_ends:
            if e in seen:
                raise ValidationError(f"duplicate edge id {e}")
            seen.add(e)
            if a == b:
                raise ValidationError(f"edge {e} is a self-loop")
            if a not in vset or b not in vset:
                raise ValidationError(f"edge {e} references a missing vertex")
            if any(x <= 0 for x in (e, a, b)):
                raise ValidationError("ids must be positive integers")
            ends.append((e, min(a, b), max(a, b)))
        if any(x <= 0 for x in vs):
            raise ValidationError("ids must be positive integers")
        object.__setattr__(self, "vertices", vs)
        object.__setattr__(self, "edge_ends", tuple(sorted(ends)))

    @classmethod
    def from_incidence(cls, vertices: Iterable[int], edges: Iterable[int], incidence: Iterable[tuple[int, int]]) -> Multigraph:
        inc: dict[int, set[int]] = {e: set() for e in edges}
        for e, v in incidence:
            if e not in inc:
                raise ValidationError(f"incidence pair references unknown edge {e}")
            inc[e].add(v)
        triples = []
        for e, vs in inc.items():
            if len(vs) != 2:
                raise ValidationError(f"edge {e} must have exactly two distinct endpoints")
            a, b = sorted(vs)
            triples.append((e, a, b))
        return cls(tuple(vertices), tuple(triples))

    @property
    def edges(self) -> tuple[int, ...]:
        return tuple(e for e, _, _ in self.edge_ends)

    @property
    def incidence(self) -> frozenset[tuple[int, int]]:
        return frozenset(p for e, a, b in self.edge_ends for p in ((e, a), (e, b)))

    def endpoints(self, e: int) -> tuple[int, int]:
        for f, a, b in self.edge_ends:
            if f == e:
                return (a, b)
        raise KeyError(e)

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def m(self) -> int:
        return len(self.edge_ends)

    def degree(self, v: int) -> int:
        return sum((a == v) + (b == v) for _, a, b in self.edge_ends)

    def neighbors(self) -> dict[int, list[int]]:
        adj: dict[int, list[int]] = {v: [] for v in self.vertices}
        for _, a, b in self.edge_ends:
            adj[a].append(b)
            adj[b].append(a)
        return adj

    def structure_key(self) -> tuple:
        """Hashable key identical for graphs equal up to edge renaming (same vertex ids)."""
        return (self.vertices, tuple(sorted((a, b) for _, a, b in self.edge_ends)))


@dataclass(frozen=True)
class BoundariedGraph:
    """A graph with an injective map from labels to vertices, stored as sorted ``(label, vertex)`` pairs."""

    graph: Multigraph
    boundary: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        b = tuple(sorted(self.boundary))
        labels = [u for u, _ in b]
        targets = [x for _, x in b]
        if len(set(labels)) != len(labels):
            raise ValidationError("boundary assigns a label twice")
        if len(set(targets)) != len(targets):
            raise ValidationError("boundary map is not injective")
        vset = set(self.graph.vertices)
        if any(x not in vset for x in targets):
            raise ValidationError("boundary maps into a missing vertex")
        object.__setattr__(self, "boundary", b)

    @property
    def domain(self) -> frozenset[int]:
        return frozenset(u for u, _ in self.boundary)

    def boundary_map(self) -> dict[int, int]:
        return dict(self.boundary)


def join(a: BoundariedGraph, b: BoundariedGraph) -> BoundariedGraph:
    """Glue ``b`` onto ``a`` along equal labels.

    Non-boundary vertices of ``b`` are shifted by ``max V(a)`` and all edges of
    ``b`` by ``max E(a)``; boundary vertices of ``b`` are identified with the
    vertex carrying the same label in ``a``. The result keeps ``a``'s boundary.
    """
    la, lb = a.boundary_map(), b.boundary_map()
    if la.keys() != lb.keys():
        raise PreconditionError("join requires equal boundary domains")
    g1, g2 = a.graph, b.graph
    voff = max(g1.vertices, default=0)
    eoff = max(g1.edges, default=0)
    back = {x: la[u] for u, x in lb.items()}  # vertex of b on the boundary -> vertex of a

    def rename(x: int) -> int:
        return back[x] if x in back else x + voff

    vertices = g1.vertices + tuple(x + voff for x in g2.vertices if x not in back)
    ends = g1.edge_ends + tuple((e + eoff, rename(x), rename(y)) for e, x, y in g2.edge_ends)
    return BoundariedGraph(Multigraph(vertices, ends), a.boundary)


# ---------------------------------------------------------------- isomorphism


def _multiplicity(g: Multigraph) -> Counter:
    c: Counter = Counter()
    for _, a, b in g.edge_ends:
        c[(a, b)] += 1
        c[(b, a)] += 1
    return c


def isomorphic(g: Multigraph, h: Multigraph) -> bool:
    """Exhaustive backtracking over vertex bijections preserving edge multiplicities.

    A vertex bijection preserving the number of parallel edges between every
    pair extends to an edge bijection, so edges need not be enumerated.
    """
    if g.n != h.n or g.m != h.m:
        return False
    dg = {v: g.degree(v) for v in g.vertices}
    dh = {v: h.degree(v) for v in h.vertices}
    if sorted(dg.values()) != sorted(dh.values()):
        return False
    mg, mh = _multiplicity(g), _multiplicity(h)
    order = sorted(g.vertices, key=lambda v: -dg[v])
    mapping: dict[int, int] = {}
    used: set[int] = set()

    def extend(i: int) -> bool:
        if i == len(order):
            return True
        v = order[i]
        for w in h.vertices:
            if w in used or dh[w] != dg[v]:
                continue
            if any(mg[(v, x)] != mh[(w, y)] for x, y in mapping.items()):
                continue
            mapping[v] = w
            used.add(w)
            if extend(i + 1):
                return True
            del mapping[v]
            used.discard(w)
        return False

    return extend(0)


EMPTY_GRAPH_FORM = b"G:empty"


def canonical_form(g: Multigraph) -> bytes:
    """Byte string equal for two graphs iff they are isomorphic.

    Vertices are grouped by degree (descending); within that constraint every
    ordering is tried and the lexicographically smallest multiplicity matrix wins.
    """
    if g.n == 0:
        return EMPTY_GRAPH_FORM
    mult = _multiplicity(g)
    deg = {v: g.degree(v) for v in g.vertices}
    groups: dict[int, list[int]] = {}
    for v in g.vertices:
        groups.setdefault(deg[v], []).append(v)
    degs = sorted(groups, reverse=True)
    best = None
    for parts in itertools.product(*(itertools.permutations(groups[d]) for d in degs)):
        order = [v for p in parts for v in p]
        row = tuple(mult[(order[i], order[j])] for i in range(len(order)) for j in range(i + 1, len(order)))
        if best is None or row < best:
            best = row
    header = [g.n, g.m] + [deg_v for d in degs for deg_v in [d] * len(groups[d])]
    return ("G:" + ",".join(map(str, header)) + "|" + ",".join(map(str, best))).encode()


# ---------------------------------------------------------------- serialization


def graph_to_json(g: Multigraph) -> dict:
    return {
        "vertices": list(g.vertices),
        "edges": [{"id": e, "endpoints": [a, b]} for e, a, b in g.edge_ends],
    }


def graph_from_json(data: Mapping | str) -> Multigraph:
    if isinstance(data, str):
        data = json.loads(data)
    try:
        vertices = [int(v) for v in data["vertices"]]
        edges = []
        for item in data["edges"]:
            a, b = item["endpoints"]
            edges.append((int(item["id"]), int(a), int(b)))
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"malformed graph JSON: {exc}") from exc
    return Multigraph(tuple(vertices), tuple(edges))


def graph_to_dot(g: Multigraph, name: str = "G") -> str:
    lines = [f"graph {name} {{"]
    lines += [f'  {v} [label="{v}"];' for v in g.vertices]
    lines += [f'  {a} -- {b} [label="e{e}"];' for e, a, b in g.edge_ends]
    lines.append("}")
    return "\n".join(lines) + "\n"
