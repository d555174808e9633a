"""Label-set and partition helpers shared by the cores.

Label sets are bitmasks (bit ``u-1`` for label ``u``). A partition is a tuple of
disjoint nonzero masks sorted by their lowest label.
"""

from __future__ import annotations

from ..dpcore import BitWriter, bits_for


def bit(u: int) -> int:
    return 1 << (u - 1)


def popcount(m: int) -> int:
    return bin(m).count("1")


def labels(mask: int) -> list[int]:
    return [i + 1 for i in range(mask.bit_length()) if mask >> i & 1]


def normalize(cells) -> tuple[int, ...]:
    return tuple(sorted((c for c in cells if c), key=lambda c: c & -c))


def support(partition: tuple[int, ...]) -> int:
    m = 0
    for c in partition:
        m |= c
    return m


def cell_of(partition: tuple[int, ...], u: int) -> int | None:
    b = bit(u)
    for i, c in enumerate(partition):
        if c & b:
            return i
    return None


def add_singleton(partition, u: int) -> tuple[int, ...]:
    return normalize(partition + (bit(u),))


def merge(partition, u: int, v: int) -> tuple[int, ...]:
    i, j = cell_of(partition, u), cell_of(partition, v)
    if i == j:
        return partition
    rest = [c for n, c in enumerate(partition) if n not in (i, j)]
    return normalize(rest + [partition[i] | partition[j]])


def remove_label(partition, u: int) -> tuple[tuple[int, ...], bool]:
    """Drop ``u``; the flag tells whether its cell became empty."""
    b = bit(u)
    out, emptied = [], False
    for c in partition:
        if c & b:
            c &= ~b
            emptied = c == 0
        if c:
            out.append(c)
    return normalize(out), emptied


def coarsest_common(p1, p2) -> tuple[int, ...]:
    """Finest partition coarser than both (connected components of the union)."""
    cells = list(p1) + list(p2)
    merged = True
    while merged:
        merged = False
        out: list[int] = []
        for c in cells:
            for i, d in enumerate(out):
                if c & d:
                    out[i] = c | d
                    merged = True
                    break
            else:
                out.append(c)
        cells = out
    return normalize(cells)


def write_partition(w: BitWriter, k: int, partition) -> None:
    """Per label, the 1-based index of its cell (0 when absent)."""
    width = bits_for(k + 2)
    idx = {}
    for n, c in enumerate(partition, start=1):
        for u in labels(c):
            idx[u] = n
    for u in range(1, k + 2):
        w.put(idx.get(u, 0), width)


def check_labels(k: int, mask: int) -> None:
    if mask < 0 or mask >> (k + 1):
        raise ValueError("label outside 1..k+1")
