"""Proper ``c``-colorability. Witness: color per label, 0 for inactive labels.

When ``c >= k+1`` every width-``k`` graph is ``c``-colorable and the core
degenerates to a single always-final witness.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..dpcore import BitWriter, DPCore, bits_for

TRIVIAL = ()


@dataclass(frozen=True, repr=False)
class ColorableCore(DPCore):
    c: int

    def __post_init__(self):
        if self.c < 0:
            raise ValueError("number of colors must be non-negative")

    @property
    def name(self) -> str:
        return f"Colorable({self.c})"

    def trivial(self, k: int) -> bool:
        return self.c >= k + 1

    def leaf(self, k):
        return [TRIVIAL] if self.trivial(k) else [(0,) * (k + 1)]

    def intro_vertex(self, k, u, w):
        if self.trivial(k):
            return [w]
        return [w[: u - 1] + (col,) + w[u:] for col in range(1, self.c + 1)]

    def forget_vertex(self, k, u, w):
        if self.trivial(k):
            return [w]
        return [w[: u - 1] + (0,) + w[u:]]

    def intro_edge(self, k, u, v, w):
        if self.trivial(k):
            return [w]
        return [] if w[u - 1] == w[v - 1] else [w]

    def join(self, k, w1, w2):
        return [w1] if w1 == w2 else []

    def final(self, k, w):
        return True

    def encode(self, k, w):
        if self.trivial(k):
            if w != TRIVIAL:
                raise ValueError("trivial core has a single witness")
            return (0, 0)
        if len(w) != k + 1:
            raise ValueError("wrong vector length")
        bw = BitWriter()
        width = bits_for(self.c + 1)
        for col in w:
            bw.put(col, width)
        return bw.bits()


def colorable_core(c: int) -> ColorableCore:
    return ColorableCore(c)
