"""Containment of a fixed graph ``H`` as a minor.

A witness guesses, for the active labels, which branch set ``X_x`` (one per
vertex ``x`` of ``H``) their vertex belongs to, if any. Per branch set it keeps a
connectivity status ``q_x`` (0 empty, 1 open, 2 complete and closed) with the
partition ``P_x`` of its active labels into components; per edge of ``H`` a bit
records whether some edge of the graph between the two branch sets has been
assigned to it. A branch set whose component loses its last active label while
other components remain can never become connected, so such witnesses die.

Witness: ``(parts, q, b)`` with ``parts[i]`` the partition of branch set ``i``
and ``b`` a bitmask over the edges of ``H``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from ..dpcore import BitWriter, DPCore, bits_for
from ..graphs import Multigraph
from ._util import add_singleton, bit, check_labels, coarsest_common, labels, merge, remove_label, support


@dataclass(frozen=True, repr=False)
class MinorCore(DPCore):
    h: Multigraph
    label: str = field(default="", compare=False)

    @property
    def name(self) -> str:
        if self.label:
            return f"Minor({self.label})"
        edges = ",".join(f"{a}-{b}" for _, a, b in self.h.edge_ends)
        return f"Minor(V={list(self.h.vertices)};E={edges})"

    @cached_property
    def _hv(self) -> dict[int, int]:
        return {x: i for i, x in enumerate(self.h.vertices)}

    @cached_property
    def _edges_between(self) -> dict[tuple[int, int], list[int]]:
        """(i, j) with i < j -> indices of H-edges between branch sets i and j."""
        out: dict[tuple[int, int], list[int]] = {}
        for n, (_, a, b) in enumerate(self.h.edge_ends):
            i, j = sorted((self._hv[a], self._hv[b]))
            out.setdefault((i, j), []).append(n)
        return out

    @property
    def p(self) -> int:
        return self.h.n

    def leaf(self, k):
        return [(((),) * self.p, (0,) * self.p, 0)]

    @staticmethod
    def _owner(parts, u):
        b = bit(u)
        for i, P in enumerate(parts):
            if support(P) & b:
                return i
        return None

    def intro_vertex(self, k, u, w):
        parts, q, b = w
        out = [w]
        for i in range(self.p):
            if q[i] == 2:
                continue
            out.append((
                parts[:i] + (add_singleton(parts[i], u),) + parts[i + 1 :],
                q[:i] + (1,) + q[i + 1 :],
                b,
            ))
        return out

    def forget_vertex(self, k, u, w):
        parts, q, b = w
        i = self._owner(parts, u)
        if i is None:
            return [w]
        P, emptied = remove_label(parts[i], u)
        if emptied and P:
            return []
        qi = 2 if emptied else q[i]
        return [(parts[:i] + (P,) + parts[i + 1 :], q[:i] + (qi,) + q[i + 1 :], b)]

    def intro_edge(self, k, u, v, w):
        parts, q, b = w
        i, j = self._owner(parts, u), self._owner(parts, v)
        if i is None or j is None:
            return [w]
        if i == j:
            return [(parts[:i] + (merge(parts[i], u, v),) + parts[i + 1 :], q, b)]
        out = [w]
        for e in self._edges_between.get((min(i, j), max(i, j)), ()):
            if not b >> e & 1:
                out.append((parts, q, b | 1 << e))
                break
        return out

    def join(self, k, w1, w2):
        (p1, q1, b1), (p2, q2, b2) = w1, w2
        if any(support(a) != support(c) for a, c in zip(p1, p2)):
            return []
        parts, qs = [], []
        for a, c, x, y in zip(p1, p2, q1, q2):
            if x == 1 and y == 1:
                parts.append(coarsest_common(a, c))
                qs.append(1)
            elif x == 2 and y == 2:
                return []
            else:
                parts.append(())
                qs.append(max(x, y))
        return [(tuple(parts), tuple(qs), b1 | b2)]

    def final(self, k, w):
        parts, q, b = w
        full = (1 << self.h.m) - 1
        return b == full and all(x in (1, 2) and len(P) <= 1 for P, x in zip(parts, q))

    def encode(self, k, w):
        """Packed form: per branch set ``q`` then cells (label tokens ``0<label>`` ended by ``10``), block end ``11``; then the edge bits."""
        parts, q, b = w
        if len(parts) != self.p or len(q) != self.p:
            raise ValueError("wrong number of branch sets")
        lw = bits_for(k + 1)
        bw = BitWriter()
        for P, x in zip(parts, q):
            check_labels(k, support(P))
            bw.put(x, 2)
            for cell in P:
                for u in labels(cell):
                    bw.put(0, 1).put(u - 1, lw)
                bw.put(0b10, 2)
            bw.put(0b11, 2)
        return bw.put(b, self.h.m).bits()

    def describe(self, w):
        parts, q, b = w
        sets = "; ".join(
            f"{x}:q={qq}:" + "|".join(",".join(map(str, labels(c))) for c in P)
            for x, P, qq in zip(self.h.vertices, parts, q)
        )
        return f"[{sets}] edges={b:0{self.h.m}b}"


def minor_core(h: Multigraph, label: str = "") -> MinorCore:
    return MinorCore(h, label)
