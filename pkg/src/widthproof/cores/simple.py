"""Simple graphs: the witness records which pairs of active labels are already joined by an edge."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

from ..dpcore import BitWriter, DPCore


@lru_cache(maxsize=None)
def pair_bits(k: int) -> dict[tuple[int, int], int]:
    return {p: 1 << i for i, p in enumerate(combinations(range(1, k + 2), 2))}


@lru_cache(maxsize=None)
def _touching(k: int, u: int) -> int:
    return sum(b for p, b in pair_bits(k).items() if u in p)


@dataclass(frozen=True, repr=False)
class SimpleCore(DPCore):
    name = "Simple"

    def leaf(self, k):
        return [0]

    def intro_vertex(self, k, u, w):
        return [w]

    def forget_vertex(self, k, u, w):
        return [w & ~_touching(k, u)]

    def intro_edge(self, k, u, v, w):
        b = pair_bits(k)[(min(u, v), max(u, v))]
        return [] if w & b else [w | b]

    def join(self, k, w1, w2):
        return [] if w1 & w2 else [w1 | w2]

    def final(self, k, w):
        return True

    def encode(self, k, w):
        n = len(pair_bits(k))
        return BitWriter().put(w, n).bits()

    def describe(self, w):
        return bin(w)


def simple_core() -> SimpleCore:
    return SimpleCore()
