"""Instructive tree decompositions: alphabet, validity automaton, graph extraction,
width, and conversion from nice edge-introducing tree decompositions."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .errors import StructuralError, ValidationError
from .graphs import BoundariedGraph, Multigraph, join
from .terms import (
    JOIN,
    LEAF,
    RankedSymbol,
    Term,
    TreeAutomaton,
    enumerate_terms,
    forget_vertex,
    intro_edge,
    intro_vertex,
)

# ---------------------------------------------------------------- alphabet


@lru_cache(maxsize=None)
def instructive_alphabet(k: int) -> tuple[RankedSymbol, ...]:
    """Symbols of the width-``k`` alphabet in canonical order.

    Leaf, IntroVertex 1..k+1, ForgetVertex 1..k+1, IntroEdge (u, v) for ordered
    pairs u != v in lexicographic order, Join.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    labels = range(1, k + 2)
    return (
        (LEAF,)
        + tuple(intro_vertex(u) for u in labels)
        + tuple(forget_vertex(u) for u in labels)
        + tuple(intro_edge(u, v) for u in labels for v in labels if u != v)
        + (JOIN,)
    )


@dataclass(frozen=True)
class InstructiveAlphabet:
    k: int
    symbols: tuple[RankedSymbol, ...] = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "symbols", instructive_alphabet(self.k))

    def __len__(self) -> int:
        return len(self.symbols)

    def __contains__(self, symbol: RankedSymbol) -> bool:
        return symbol in self.symbols

    def index(self, symbol: RankedSymbol) -> int:
        return _symbol_index(self.k)[symbol]


@lru_cache(maxsize=None)
def _symbol_index(k: int) -> dict[RankedSymbol, int]:
    return {s: i for i, s in enumerate(instructive_alphabet(k))}


def labels_of(mask: int) -> frozenset[int]:
    """Label set encoded by a state bitmask (bit ``u-1`` for label ``u``)."""
    return frozenset(i + 1 for i in range(mask.bit_length()) if mask >> i & 1)


def mask_of(labels: Iterable[int]) -> int:
    m = 0
    for u in labels:
        m |= 1 << (u - 1)
    return m


# ---------------------------------------------------------------- automaton


def active_set_step(symbol: RankedSymbol, states: tuple[int, ...]) -> int | None:
    """Transition of the active-label automaton on bitmask states; ``None`` when undefined."""
    name = symbol.name
    if name == "Leaf":
        return 0
    if name == "Join":
        a, b = states
        return a if a == b else None
    (b,) = states
    if name == "IntroVertex":
        bit = 1 << (symbol.params[0] - 1)
        return None if b & bit else b | bit
    if name == "ForgetVertex":
        bit = 1 << (symbol.params[0] - 1)
        return b & ~bit if b & bit else None
    if name == "IntroEdge":
        u, v = symbol.params
        need = (1 << (u - 1)) | (1 << (v - 1))
        return b if u != v and b & need == need else None
    raise StructuralError(f"unknown instruction {symbol}")


class ActiveSetAutomaton(TreeAutomaton):
    """The validity automaton for width ``k``: states are active-label bitmasks, all final."""

    def __init__(self, k: int):
        self.k = k
        super().__init__(instructive_alphabet(k), active_set_step, lambda q: True)

    @property
    def all_states(self) -> range:
        return range(1 << (self.k + 1))


@lru_cache(maxsize=None)
def active_set_automaton(k: int) -> ActiveSetAutomaton:
    return ActiveSetAutomaton(k)


def run_states(k: int, t: Term) -> dict[Term, int]:
    """Map every subterm of a valid term to its automaton state; raises with the failing node path."""
    automaton = active_set_automaton(k)
    memo: dict[Term, int] = {}
    stack = [((), t, False)]
    while stack:
        path, node, expanded = stack.pop()
        if node in memo:
            continue
        if not expanded:
            stack.append((path, node, True))
            for i, c in enumerate(node.children):
                if c not in memo:
                    stack.append((path + (i,), c, False))
            continue
        try:
            q = automaton.transition(node.symbol, tuple(memo[c] for c in node.children))
        except StructuralError as exc:
            raise ValidationError(str(exc), path) from exc
        if q is None:
            raise ValidationError(f"no transition for {node.symbol} from the active labels below", path)
        memo[node] = q
    return memo


def validate(k: int, t: Term) -> bool:
    try:
        run_states(k, t)
    except ValidationError:
        return False
    return True


def enumerate_valid_terms(k: int, max_size: int):
    return enumerate_terms(instructive_alphabet(k), active_set_automaton(k), max_size)


def labels_used(t: Term) -> frozenset[int]:
    return frozenset(p for _, s in t.nodes() for p in s.symbol.params)


def width(t: Term) -> int:
    """Smallest ``k`` with ``t`` valid at width ``k``. Validity is monotone in ``k``."""
    used = labels_used(t)
    if any(u < 1 for u in used):
        raise ValidationError("labels must be positive")
    k = max(max(used, default=1) - 1, 0)
    run_states(k, t)  # raises if invalid at every width
    return k


def is_path_decomposition(t: Term) -> bool:
    return not t.contains("Join")


# ---------------------------------------------------------------- extraction


@dataclass(frozen=True)
class ExtractionResult:
    graph: Multigraph
    top_map: tuple[tuple[int, int], ...]

    @property
    def boundaried(self) -> BoundariedGraph:
        return BoundariedGraph(self.graph, self.top_map)

    @property
    def active_labels(self) -> frozenset[int]:
        return frozenset(u for u, _ in self.top_map)


_EMPTY = BoundariedGraph(Multigraph(), ())


def _extract_step(symbol: RankedSymbol, kids: Sequence[BoundariedGraph]) -> BoundariedGraph:
    name = symbol.name
    if name == "Leaf":
        return _EMPTY
    if name == "Join":
        return join(kids[0], kids[1])
    (c,) = kids
    g = c.graph
    top = c.boundary_map()
    if name == "IntroVertex":
        # max+1 equals |V|+1 while ids are dense and never collides after a join
        x = max(g.vertices, default=0) + 1
        top[symbol.params[0]] = x
        return BoundariedGraph(Multigraph(g.vertices + (x,), g.edge_ends), tuple(top.items()))
    if name == "ForgetVertex":
        del top[symbol.params[0]]
        return BoundariedGraph(g, tuple(top.items()))
    if name == "IntroEdge":
        u, v = symbol.params
        e = max(g.edges, default=0) + 1
        return BoundariedGraph(Multigraph(g.vertices, g.edge_ends + ((e, top[u], top[v]),)), c.boundary)
    raise StructuralError(f"unknown instruction {symbol}")


def extract(k: int, t: Term, memo: dict | None = None) -> ExtractionResult:
    """The graph built by ``t`` and its map from active labels to vertices.

    ``memo`` may be shared across calls to reuse results on common subterms.
    """
    run_states(k, t)
    if memo is None:
        memo = {}
    stack = [(t, False)]
    while stack:
        node, expanded = stack.pop()
        if node in memo:
            continue
        if not expanded:
            stack.append((node, True))
            stack.extend((c, False) for c in node.children if c not in memo)
            continue
        memo[node] = _extract_step(node.symbol, [memo[c] for c in node.children])
    bg = memo[t]
    return ExtractionResult(bg.graph, bg.boundary)


# ---------------------------------------------------------------- nice decompositions

NODE_TYPES = ("Leaf", "IntroVertex", "ForgetVertex", "IntroEdge", "Join")


@dataclass(frozen=True)
class NiceNode:
    id: int
    type: str
    bag: frozenset[int]
    children: tuple[int, ...] = ()
    vertex: int | None = None
    edge: int | None = None


@dataclass(frozen=True)
class NiceTreeDecomposition:
    """Rooted tree of typed nodes with bags over a host graph's vertices.

    Every edge of the host graph is introduced by exactly one IntroEdge node.
    """

    nodes: Mapping[int, NiceNode]
    root: int

    @property
    def width(self) -> int:
        return max((len(n.bag) for n in self.nodes.values()), default=0) - 1

    def preorder(self) -> list[int]:
        out, stack = [], [self.root]
        while stack:
            i = stack.pop()
            out.append(i)
            stack.extend(reversed(self.nodes[i].children))
        return out

    def to_json(self) -> dict:
        items = []
        for i in self.preorder():
            n = self.nodes[i]
            d = {"id": n.id, "type": n.type, "bag": sorted(n.bag), "children": list(n.children)}
            if n.vertex is not None:
                d["vertex"] = n.vertex
            if n.edge is not None:
                d["edge"] = n.edge
            items.append(d)
        return {"root": self.root, "nodes": items}


def nice_decomposition_from_json(data: Mapping | str) -> NiceTreeDecomposition:
    """Parse the node-list JSON form. Structural checks only; see :func:`validate_nice_decomposition`."""
    if isinstance(data, str):
        data = json.loads(data)
    nodes: dict[int, NiceNode] = {}
    try:
        for item in data["nodes"]:
            n = NiceNode(
                id=int(item["id"]),
                type=str(item["type"]),
                bag=frozenset(int(x) for x in item.get("bag", [])),
                children=tuple(int(c) for c in item.get("children", [])),
                vertex=None if item.get("vertex") is None else int(item["vertex"]),
                edge=None if item.get("edge") is None else int(item["edge"]),
            )
            if n.id in nodes:
                raise ValidationError(f"duplicate node id {n.id}")
            nodes[n.id] = n
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ValidationError):
            raise
        raise ValidationError(f"malformed decomposition JSON: {exc}") from exc
    child_ids = {c for n in nodes.values() for c in n.children}
    if "root" in data:
        root = int(data["root"])
    else:
        roots = [i for i in nodes if i not in child_ids]
        if len(roots) != 1:
            raise ValidationError(f"expected exactly one root, found {len(roots)}")
        root = roots[0]
    d = NiceTreeDecomposition(nodes, root)
    _check_tree_shape(d)
    return d


def _check_tree_shape(d: NiceTreeDecomposition) -> None:
    if d.root not in d.nodes:
        raise ValidationError(f"root {d.root} is not a node")
    seen: set[int] = set()
    stack = [d.root]
    while stack:
        i = stack.pop()
        if i in seen:
            raise ValidationError(f"node {i} reached twice; not a tree")
        seen.add(i)
        for c in d.nodes[i].children:
            if c not in d.nodes:
                raise ValidationError(f"node {i} has unknown child {c}")
            stack.append(c)
    if seen != set(d.nodes):
        raise ValidationError("some nodes are not reachable from the root")


def validate_nice_decomposition(g: Multigraph, d: NiceTreeDecomposition, k: int | None = None) -> None:
    """Raise :class:`ValidationError` unless ``d`` is a nice edge-introducing decomposition of ``g``."""
    _check_tree_shape(d)
    vset = set(g.vertices)
    ends = {e: (a, b) for e, a, b in g.edge_ends}
    arity = {"Leaf": 0, "IntroVertex": 1, "ForgetVertex": 1, "IntroEdge": 1, "Join": 2}
    introduced: dict[int, int] = {}
    for n in d.nodes.values():
        if n.type not in arity:
            raise ValidationError(f"node {n.id}: unknown type {n.type!r}")
        if len(n.children) != arity[n.type]:
            raise ValidationError(f"node {n.id}: {n.type} needs {arity[n.type]} children")
        if not n.bag <= vset:
            raise ValidationError(f"node {n.id}: bag mentions vertices outside the graph")
        kids = [d.nodes[c] for c in n.children]
        if n.type == "Leaf" and n.bag:
            raise ValidationError(f"node {n.id}: leaf bag must be empty")
        if n.type == "IntroVertex":
            if n.vertex is None or n.vertex in kids[0].bag or n.bag != kids[0].bag | {n.vertex}:
                raise ValidationError(f"node {n.id}: bad IntroVertex bag")
        if n.type == "ForgetVertex":
            if n.vertex is None or n.vertex not in kids[0].bag or n.bag != kids[0].bag - {n.vertex}:
                raise ValidationError(f"node {n.id}: bad ForgetVertex bag")
        if n.type == "IntroEdge":
            if n.edge not in ends:
                raise ValidationError(f"node {n.id}: unknown edge {n.edge}")
            if n.bag != kids[0].bag or not set(ends[n.edge]) <= n.bag:
                raise ValidationError(f"node {n.id}: edge endpoints must lie in an unchanged bag")
            if n.edge in introduced:
                raise ValidationError(f"edge {n.edge} introduced twice")
            introduced[n.edge] = n.id
        if n.type == "Join" and any(c.bag != n.bag for c in kids):
            raise ValidationError(f"node {n.id}: join children must share its bag")
    missing = set(ends) - set(introduced)
    if missing:
        raise ValidationError(f"edges never introduced: {sorted(missing)}")
    # each vertex must occupy a nonempty connected subtree
    parent = {c: n.id for n in d.nodes.values() for c in n.children}
    for x in vset:
        holders = [i for i, n in d.nodes.items() if x in n.bag]
        if not holders:
            raise ValidationError(f"vertex {x} is in no bag")
        tops = [i for i in holders if i == d.root or x not in d.nodes[parent[i]].bag]
        if len(tops) != 1:
            raise ValidationError(f"bags containing vertex {x} are not connected")
    if k is not None and d.width > k:
        raise ValidationError(f"decomposition width {d.width} exceeds {k}")


def bag_injective_coloring(d: NiceTreeDecomposition, k: int, label_order: Sequence[int] | None = None) -> dict[int, int]:
    """Root-to-leaf greedy coloring with ``k+1`` labels, injective on every bag.

    A vertex gets its label at the topmost node containing it: the first label
    in ``label_order`` (default 1..k+1) unused by the bag's already colored vertices.
    """
    order = list(label_order) if label_order is not None else list(range(1, k + 2))
    if sorted(order) != list(range(1, k + 2)):
        raise ValueError("label_order must be a permutation of 1..k+1")
    color: dict[int, int] = {}
    for i in d.preorder():
        bag = d.nodes[i].bag
        taken = {color[x] for x in bag if x in color}
        for x in sorted(bag):
            if x in color:
                continue
            free = next((c for c in order if c not in taken), None)
            if free is None:
                raise ValidationError(f"bag of node {i} is larger than k+1")
            color[x] = free
            taken.add(free)
    return color


def from_nice_decomposition(
    g: Multigraph,
    d: NiceTreeDecomposition,
    k: int | None = None,
    label_order: Sequence[int] | None = None,
) -> Term:
    """Instructive term whose extracted graph is isomorphic to ``g``."""
    if k is None:
        k = max(d.width, 0)
    validate_nice_decomposition(g, d, k)
    color = bag_injective_coloring(d, k, label_order)
    ends = {e: (a, b) for e, a, b in g.edge_ends}
    built: dict[int, Term] = {}
    for i in reversed(d.preorder()):
        n = d.nodes[i]
        kids = [built.pop(c) for c in n.children]
        if n.type == "Leaf":
            sym = LEAF
        elif n.type == "IntroVertex":
            sym = intro_vertex(color[n.vertex])
        elif n.type == "ForgetVertex":
            sym = forget_vertex(color[n.vertex])
        elif n.type == "IntroEdge":
            a, b = ends[n.edge]
            sym = intro_edge(color[a], color[b])
        else:
            sym = JOIN
        built[i] = Term(sym, kids)
    return built[d.root]


def nice_decomposition_of_term(k: int, t: Term) -> tuple[Multigraph, NiceTreeDecomposition]:
    """The nice decomposition of ``extract(k, t).graph`` that mirrors ``t`` node by node."""
    memo: dict = {}
    root_res = extract(k, t, memo)
    nodes: dict[int, NiceNode] = {}
    counter = 0
    # frames: (term, vertex map local->global, edge map local->global, node id)
    stack = [(t, None, None, counter)]
    counter += 1
    while stack:
        node, vmap, emap, nid = stack.pop()
        bg: BoundariedGraph = memo[node]
        vm = (lambda x: x) if vmap is None else vmap
        em = (lambda e: e) if emap is None else emap
        top = bg.boundary_map()
        bag = frozenset(vm(x) for x in top.values())
        name = node.symbol.name
        vertex = edge = None
        child_frames = []
        if name in ("IntroVertex", "ForgetVertex"):
            u = node.symbol.params[0]
            vertex = vm((top if name == "IntroVertex" else memo[node.children[0]].boundary_map())[u])
        if name == "IntroEdge":
            edge = em(max(bg.graph.edges))
        if name == "Join":
            left, right = memo[node.children[0]], memo[node.children[1]]
            voff = max(left.graph.vertices, default=0)
            eoff = max(left.graph.edges, default=0)
            lmap, rmap = left.boundary_map(), right.boundary_map()
            back = {x: lmap[u] for u, x in rmap.items()}
            rv = (lambda vm_, back_, off: lambda x: vm_(back_[x] if x in back_ else x + off))(vm, back, voff)
            re_ = (lambda em_, off: lambda e: em_(e + off))(em, eoff)
            child_frames = [(node.children[0], vmap, emap), (node.children[1], rv, re_)]
        else:
            child_frames = [(c, vmap, emap) for c in node.children]
        ids = []
        for c, cv, ce in child_frames:
            ids.append(counter)
            stack.append((c, cv, ce, counter))
            counter += 1
        nodes[nid] = NiceNode(nid, name, bag, tuple(ids), vertex, edge)
    return root_res.graph, NiceTreeDecomposition(nodes, 0)
