"""Nowhere-zero Z_m flows. The witness is the vector of flow imbalances at the active labels.

An edge receives a nonzero value f, added at one endpoint and subtracted at the
other; since the value set is closed under negation this also covers the other
orientation. A vertex can be forgotten only once its imbalance is 0.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..dpcore import BitWriter, DPCore, bits_for


@dataclass(frozen=True, repr=False)
class NZFlowCore(DPCore):
    m: int

    def __post_init__(self):
        if self.m < 2:
            raise ValueError("the group order must be at least 2")

    @property
    def name(self) -> str:
        return f"NZFlow({self.m})"

    def leaf(self, k):
        return [(0,) * (k + 1)]

    def intro_vertex(self, k, u, w):
        return [w]

    def forget_vertex(self, k, u, w):
        return [w] if w[u - 1] == 0 else []

    def intro_edge(self, k, u, v, w):
        m = self.m
        out = []
        for f in range(1, m):
            x = list(w)
            x[u - 1] = (x[u - 1] + f) % m
            x[v - 1] = (x[v - 1] - f) % m
            out.append(tuple(x))
        return out

    def join(self, k, w1, w2):
        return [tuple((a + b) % self.m for a, b in zip(w1, w2))]

    def final(self, k, w):
        return not any(w)

    def encode(self, k, w):
        if len(w) != k + 1:
            raise ValueError("wrong vector length")
        bw = BitWriter()
        width = bits_for(self.m)
        for a in w:
            bw.put(a, width)
        return bw.bits()


def nzflow_core(m: int) -> NZFlowCore:
    return NZFlowCore(m)
