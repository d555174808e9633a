"""Hamiltonian cycle (on at least three vertices) via vertex-disjoint path covers.

Witness ``(deg, mate, closed, count)``:

* ``deg[u-1]``: 0 if label ``u`` is inactive, else 1 + number of chosen edges at its vertex (<= 2);
* ``mate[u-1]``: for an active path end of degree 1, the label at the other end of its path;
* ``closed``: the cycle has been closed (no further vertex may appear);
* ``count``: number of vertices of the graph, saturated at 3.

Forgotten vertices must have degree 2. A path is closed into a cycle only when
this uses every vertex, so a closed witness describes a Hamiltonian cycle.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..dpcore import BitWriter, DPCore, bits_for


def _set(t, i, x):
    return t[:i] + (x,) + t[i + 1 :]


@dataclass(frozen=True, repr=False)
class HamiltonianCore(DPCore):
    name = "Hamiltonian"

    def leaf(self, k):
        z = (0,) * (k + 1)
        return [(z, z, 0, 0)]

    def intro_vertex(self, k, u, w):
        deg, mate, closed, count = w
        if closed:
            return []
        return [(_set(deg, u - 1, 1), mate, 0, min(3, count + 1))]

    def forget_vertex(self, k, u, w):
        deg, mate, closed, count = w
        if deg[u - 1] != 3:
            return []
        return [(_set(deg, u - 1, 0), mate, closed, count)]

    def intro_edge(self, k, u, v, w):
        deg, mate, closed, count = w
        out = [w]  # edge left unused
        du, dv = deg[u - 1] - 1, deg[v - 1] - 1
        if closed or du == 2 or dv == 2:
            return out
        if du == 1 and dv == 1 and mate[u - 1] == v:
            nd = _set(_set(deg, u - 1, 3), v - 1, 3)
            if count >= 3 and all(d in (0, 3) for d in nd):
                out.append((nd, (0,) * len(deg), 1, count))
            return out
        a = mate[u - 1] if du == 1 else u
        b = mate[v - 1] if dv == 1 else v
        nd = _set(_set(deg, u - 1, du + 2), v - 1, dv + 2)
        nm = _set(_set(mate, u - 1, 0), v - 1, 0)
        nm = _set(_set(nm, a - 1, b), b - 1, a)
        out.append((nd, nm, 0, count))
        return out

    def join(self, k, w1, w2):
        d1, m1, c1, n1 = w1
        d2, m2, c2, n2 = w2
        if [x > 0 for x in d1] != [x > 0 for x in d2]:
            return []
        active = sum(x > 0 for x in d1)
        count = 3 if 3 in (n1, n2) else min(3, n1 + n2 - active)
        deg = tuple(a + b - 1 if a else 0 for a, b in zip(d1, d2))
        if any(x > 3 for x in deg):
            return []
        if c1 and c2:
            return []
        if c1 or c2:
            other = d2 if c1 else d1
            if any(x > 1 for x in other):
                return []
            return [(deg, (0,) * len(deg), 1, count)]
        # union of the two path systems, seen as a graph on labels
        adj: dict[int, list[int]] = {}
        for m in (m1, m2):
            for i, x in enumerate(m):
                if x:
                    adj.setdefault(i + 1, []).append(x)
        mate = [0] * len(deg)
        seen: set[int] = set()
        cycles = 0
        for start in sorted(adj):
            if start in seen:
                continue
            # walk the component
            comp, stack = [], [start]
            seen.add(start)
            while stack:
                x = stack.pop()
                comp.append(x)
                for y in adj[x]:
                    if y not in seen:
                        seen.add(y)
                        stack.append(y)
            ends = [x for x in comp if len(adj[x]) == 1]
            if not ends:
                cycles += 1
                continue
            a, b = ends
            mate[a - 1], mate[b - 1] = b, a
        if cycles:
            if cycles == 1 and count >= 3 and all(x in (0, 3) for x in deg):
                return [(deg, (0,) * len(deg), 1, count)]
            return []
        return [(deg, tuple(mate), 0, count)]

    def final(self, k, w):
        return bool(w[2])

    def encode(self, k, w):
        deg, mate, closed, count = w
        if len(deg) != k + 1 or len(mate) != k + 1:
            raise ValueError("wrong vector length")
        bw = BitWriter()
        mw = bits_for(k + 2)
        for d, m in zip(deg, mate):
            bw.put(d, 2).put(m, mw)
        return bw.put(closed, 1).put(count, 2).bits()


def hamiltonian_core() -> HamiltonianCore:
    return HamiltonianCore()
