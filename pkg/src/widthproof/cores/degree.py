"""Maximum degree at least ``d`` and minimum degree at most ``d``.

Witness ``(x, y)``: ``y[u-1]`` is 0 for an inactive label, otherwise one plus the
degree of the active vertex, saturated so that ``d+1`` stands for "at least d+1".
``x`` records whether some forgotten vertex already satisfies the condition.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..dpcore import BitWriter, DPCore, bits_for


@dataclass(frozen=True, repr=False)
class DegreeCore(DPCore):
    d: int
    at_least: bool  # True: max degree >= d, False: min degree <= d

    def __post_init__(self):
        if self.d < 0:
            raise ValueError("degree bound must be non-negative")

    @property
    def name(self) -> str:
        return f"MaxDegGe({self.d})" if self.at_least else f"MinDegLe({self.d})"

    def _hit(self, deg: int) -> bool:
        return deg >= self.d if self.at_least else deg <= self.d

    def _cap(self, deg: int) -> int:
        return min(deg, self.d + 1) + 1

    def leaf(self, k):
        return [(0, (0,) * (k + 1))]

    def intro_vertex(self, k, u, w):
        x, y = w
        return [(x, y[: u - 1] + (1,) + y[u:])]

    def forget_vertex(self, k, u, w):
        x, y = w
        hit = self._hit(y[u - 1] - 1)
        return [(x | hit, y[: u - 1] + (0,) + y[u:])]

    def intro_edge(self, k, u, v, w):
        x, y = w
        y = list(y)
        y[u - 1] = self._cap(y[u - 1])
        y[v - 1] = self._cap(y[v - 1])
        return [(x, tuple(y))]

    def join(self, k, w1, w2):
        (x1, y1), (x2, y2) = w1, w2
        y = tuple(self._cap(a + b - 2) if a else 0 for a, b in zip(y1, y2))
        return [(x1 | x2, y)]

    def final(self, k, w):
        x, y = w
        return bool(x) or any(a and self._hit(a - 1) for a in y)

    def encode(self, k, w):
        x, y = w
        if len(y) != k + 1:
            raise ValueError("wrong vector length")
        bw = BitWriter().put(x, 1)
        width = bits_for(self.d + 3)
        for a in y:
            bw.put(a, width)
        return bw.bits()


def max_deg_core(d: int) -> DegreeCore:
    return DegreeCore(d, True)


def min_deg_core(d: int) -> DegreeCore:
    return DegreeCore(d, False)
