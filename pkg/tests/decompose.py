"""Test helpers: random bounded-treewidth multigraphs and decompositions built from elimination orderings."""

from __future__ import annotations

import random
from itertools import combinations

from widthproof.graphs import Multigraph
from widthproof.itd import NiceNode, NiceTreeDecomposition


def random_partial_ktree(rng: random.Random, n: int, k: int, keep: float = 0.7, parallel: float = 0.1):
    """A spanning subgraph of a random k-tree on ``n`` vertices, plus its construction order."""
    base = list(range(1, min(n, k + 1) + 1))
    pairs = list(combinations(base, 2))
    cliques = [tuple(base)] if len(base) == k + 1 else []
    for v in range(len(base) + 1, n + 1):
        if cliques:
            clique = rng.choice(cliques)
            attach = rng.sample(clique, k)
        else:
            attach = []
        pairs.extend((a, v) for a in attach)
        for drop in range(len(attach)):
            cliques.append(tuple(sorted(attach[:drop] + attach[drop + 1:] + [v])))
    edges = []
    for a, b in pairs:
        if rng.random() < keep:
            edges.append((a, b))
            if rng.random() < parallel:
                edges.append((a, b))
    g = Multigraph(tuple(range(1, n + 1)), tuple((i + 1, a, b) for i, (a, b) in enumerate(edges)))
    return g, list(range(n, 0, -1))


def min_degree_order(g: Multigraph, rng: random.Random) -> list[int]:
    adj = {v: set() for v in g.vertices}
    for _, a, b in g.edge_ends:
        adj[a].add(b)
        adj[b].add(a)
    order = []
    while adj:
        low = min(len(s) for s in adj.values())
        v = rng.choice(sorted(u for u, s in adj.items() if len(s) == low))
        nbrs = adj.pop(v)
        for a in nbrs:
            adj[a] |= nbrs - {a}
            adj[a].discard(v)
        order.append(v)
    return order


class _Builder:
    def __init__(self):
        self.nodes: dict[int, NiceNode] = {}

    def add(self, type_, bag, children=(), vertex=None, edge=None) -> int:
        i = len(self.nodes) + 1
        self.nodes[i] = NiceNode(i, type_, frozenset(bag), tuple(children), vertex, edge)
        return i

    def morph(self, top: int, target: frozenset) -> int:
        """Forget and then introduce vertices until the top bag equals ``target``."""
        bag = set(self.nodes[top].bag)
        for x in sorted(bag - target):
            bag.discard(x)
            top = self.add("ForgetVertex", bag, (top,), vertex=x)
        for x in sorted(target - bag):
            bag.add(x)
            top = self.add("IntroVertex", bag, (top,), vertex=x)
        return top

    def join_all(self, tops: list[int], bag: frozenset) -> int:
        top = tops[0]
        for other in tops[1:]:
            top = self.add("Join", bag, (top, other))
        return top


def elimination_decomposition(g: Multigraph, order: list[int]) -> NiceTreeDecomposition:
    """Nice edge-introducing decomposition from an elimination ordering of ``g``."""
    pos = {v: i for i, v in enumerate(order)}
    adj = {v: set() for v in g.vertices}
    for _, a, b in g.edge_ends:
        adj[a].add(b)
        adj[b].add(a)
    bags, parent = {}, {}
    for v in order:
        later = {u for u in adj[v] if pos[u] > pos[v]}
        bags[v] = frozenset(later | {v})
        for a in later:
            adj[a] |= later - {a}
        parent[v] = min(later, key=pos.get) if later else None
    children = {v: [] for v in order}
    for v, p in parent.items():
        if p is not None:
            children[p].append(v)
    # each edge goes to the bag of its earlier-eliminated endpoint
    edges_at = {v: [] for v in order}
    for e, a, b in g.edge_ends:
        edges_at[min(a, b, key=pos.get)].append(e)

    b = _Builder()
    built: dict[int, int] = {}
    for v in order:  # children are eliminated before their parent
        bag = bags[v]
        if children[v]:
            top = b.join_all([b.morph(built.pop(c), bag) for c in children[v]], bag)
        else:
            top = b.morph(b.add("Leaf", ()), bag)
        for e in edges_at[v]:
            top = b.add("IntroEdge", bag, (top,), edge=e)
        built[v] = top
    roots = [built[v] for v in order if parent[v] is None]
    if not roots:
        return NiceTreeDecomposition(b.nodes, b.add("Leaf", ()))
    root = b.join_all([b.morph(r, frozenset()) for r in roots], frozenset())
    return NiceTreeDecomposition(b.nodes, root)
