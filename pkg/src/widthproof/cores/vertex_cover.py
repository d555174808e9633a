"""Vertex cover of size at most ``r`` and the unbounded minimum-vertex-cover core.

A witness ``(R, s)`` states: the cheapest vertex cover whose restriction to the
active vertices is exactly the vertices labelled by ``R`` has size ``s``.
IntroVertex branches eagerly on whether the new vertex joins the cover, which
keeps the dynamized set equal to that predicate after clean.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..dpcore import INV_UNDEFINED, BitWriter, DPCore, bits_for, encode_int
from ._util import bit, check_labels, labels, popcount


@dataclass(frozen=True, repr=False)
class VertexCoverCore(DPCore):
    r: int | None = None  # None = unbounded

    def __post_init__(self):
        if self.r is not None and self.r < 0:
            raise ValueError("budget must be non-negative")

    @property
    def name(self) -> str:
        return "MinVertexCover" if self.r is None else f"VertexCover({self.r})"

    @property
    def finite(self) -> bool:
        return self.r is not None

    integer_inv = True

    def _ok(self, s: int) -> bool:
        return self.r is None or s <= self.r

    def leaf(self, k):
        return [(0, 0)]

    def intro_vertex(self, k, u, w):
        R, s = w
        out = [w]
        if self._ok(s + 1):
            out.append((R | bit(u), s + 1))
        return out

    def forget_vertex(self, k, u, w):
        R, s = w
        return [(R & ~bit(u), s)]

    def intro_edge(self, k, u, v, w):
        R, s = w
        if R & (bit(u) | bit(v)):
            return [w]
        if not self._ok(s + 1):
            return []
        return [(R | bit(u), s + 1), (R | bit(v), s + 1)]

    def join(self, k, w1, w2):
        (R1, s1), (R2, s2) = w1, w2
        s = s1 + s2 - popcount(R1 & R2)
        return [(R1 | R2, s)] if self._ok(s) else []

    def final(self, k, w):
        return True

    def clean(self, k, ws):
        best: dict[int, int] = {}
        for R, s in ws:
            if R not in best or s < best[R]:
                best[R] = s
        return {(R, s) for R, s in best.items()}

    def inv(self, k, ws):
        if not ws:
            return INV_UNDEFINED
        return encode_int(min(s for _, s in ws))

    def encode(self, k, w):
        R, s = w
        check_labels(k, R)
        if s < 0 or not self._ok(s):
            raise ValueError("size out of range")
        bw = BitWriter().put(R, k + 1)
        if self.r is None:
            bw.gamma(s + 1)
        else:
            bw.put(s, bits_for(self.r + 1))
        return bw.bits()

    def describe(self, w):
        R, s = w
        return f"({{{','.join(map(str, labels(R)))}}}, {s})"


def vertex_cover_core(r: int) -> VertexCoverCore:
    return VertexCoverCore(r)


def min_vertex_cover_core() -> VertexCoverCore:
    return VertexCoverCore(None)
