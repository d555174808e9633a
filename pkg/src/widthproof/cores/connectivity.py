"""Connectivity, and vertex/edge connectivity at most ``c``.

The connectivity witness is ``(q, P)``: ``P`` partitions the active labels by
connected component and ``q`` is the status

* 0: the graph is empty,
* 1: ``P`` is nonempty and every vertex reaches an active vertex,
* 2: no active labels, the graph is connected and nonempty,
* 3: some component can no longer be reached (absorbing).

The deletion variants carry a counter ``r`` of deleted vertices/edges and, for
vertices, the mask ``D`` of active labels whose vertex was deleted. Status-3
witnesses of the deletion variants are final and absorbing, so they are
collapsed to a single representative.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..dpcore import BitWriter, DPCore, bits_for
from ._util import (
    add_singleton,
    bit,
    check_labels,
    coarsest_common,
    labels,
    merge,
    popcount,
    remove_label,
    support,
    write_partition,
)

DEAD = (3, ())


def conn_intro_vertex(q, P, u):
    if q == 3 or q == 2:
        return DEAD
    return (1, add_singleton(P, u))


def conn_forget_vertex(q, P, u):
    if q == 3:
        return DEAD
    P2, emptied = remove_label(P, u)
    if not emptied:
        return (q, P2)
    return (2, ()) if not P2 else DEAD


def conn_intro_edge(q, P, u, v):
    if q == 3:
        return DEAD
    return (q, merge(P, u, v))


def conn_join(a, b):
    (q1, P1), (q2, P2) = a, b
    if q1 == 3 or q2 == 3:
        return DEAD
    if q1 == 1 and q2 == 1:
        return (1, coarsest_common(P1, P2))
    if {q1, q2} <= {0, 2}:
        if q1 == 2 and q2 == 2:
            return DEAD
        return (max(q1, q2), ())
    return DEAD  # unreachable on consistent inputs


def conn_final(q, P):
    return q != 3 and len(P) <= 1


def _describe_partition(P):
    return "{" + ", ".join("{" + ",".join(map(str, labels(c))) + "}" for c in P) + "}"


@dataclass(frozen=True, repr=False)
class ConnCore(DPCore):
    name = "Conn"

    def leaf(self, k):
        return [(0, ())]

    def intro_vertex(self, k, u, w):
        return [conn_intro_vertex(*w, u)]

    def forget_vertex(self, k, u, w):
        return [conn_forget_vertex(*w, u)]

    def intro_edge(self, k, u, v, w):
        return [conn_intro_edge(*w, u, v)]

    def join(self, k, w1, w2):
        return [conn_join(w1, w2)]

    def final(self, k, w):
        return conn_final(*w)

    def encode(self, k, w):
        q, P = w
        check_labels(k, support(P))
        bw = BitWriter().put(q, 2)
        write_partition(bw, k, P)
        return bw.bits()

    def describe(self, w):
        return f"(q={w[0]}, P={_describe_partition(w[1])})"


VDEAD = (0, 3, (), 0)


@dataclass(frozen=True, repr=False)
class VertexConnCore(DPCore):
    """Some set of at most ``c`` vertices disconnects the graph.

    Complete graphs (and graphs with fewer than two vertices) never satisfy this,
    whatever ``c`` is.
    """

    c: int

    @property
    def name(self) -> str:
        return f"VConnLe({self.c})"

    def leaf(self, k):
        return [(0, 0, (), 0)]

    @staticmethod
    def _wrap(r, qp, D):
        q, P = qp
        return VDEAD if q == 3 else (r, q, P, D)

    def intro_vertex(self, k, u, w):
        r, q, P, D = w
        if q == 3:
            return [VDEAD]
        out = [self._wrap(r, conn_intro_vertex(q, P, u), D)]
        if r < self.c:
            out.append((r + 1, q, P, D | bit(u)))
        return out

    def forget_vertex(self, k, u, w):
        r, q, P, D = w
        if q == 3:
            return [VDEAD]
        if D & bit(u):
            return [(r, q, P, D & ~bit(u))]
        return [self._wrap(r, conn_forget_vertex(q, P, u), D)]

    def intro_edge(self, k, u, v, w):
        r, q, P, D = w
        if q == 3 or D & (bit(u) | bit(v)):
            return [w]
        return [self._wrap(r, conn_intro_edge(q, P, u, v), D)]

    def join(self, k, w1, w2):
        r1, q1, P1, D1 = w1
        r2, q2, P2, D2 = w2
        if q1 == 3 or q2 == 3:
            return [VDEAD]
        if D1 != D2:
            return []
        r = r1 + r2 - popcount(D1)
        if r > self.c:
            return []
        return [self._wrap(r, conn_join((q1, P1), (q2, P2)), D1)]

    def final(self, k, w):
        r, q, P, D = w
        return q == 3 or len(P) > 1

    def encode(self, k, w):
        r, q, P, D = w
        check_labels(k, D | support(P))
        if not 0 <= r <= self.c:
            raise ValueError("deletion count out of range")
        bw = BitWriter().put(r, bits_for(self.c + 1)).put(q, 2).put(D, k + 1)
        write_partition(bw, k, P)
        return bw.bits()

    def describe(self, w):
        r, q, P, D = w
        return f"(r={r}, q={q}, P={_describe_partition(P)}, deleted={labels(D)})"


EDEAD = (0, 3, ())


@dataclass(frozen=True, repr=False)
class EdgeConnCore(DPCore):
    """Some set of at most ``c`` edges disconnects the graph."""

    c: int

    @property
    def name(self) -> str:
        return f"EConnLe({self.c})"

    def leaf(self, k):
        return [(0, 0, ())]

    @staticmethod
    def _wrap(r, qp):
        q, P = qp
        return EDEAD if q == 3 else (r, q, P)

    def intro_vertex(self, k, u, w):
        r, q, P = w
        return [self._wrap(r, conn_intro_vertex(q, P, u))]

    def forget_vertex(self, k, u, w):
        r, q, P = w
        return [self._wrap(r, conn_forget_vertex(q, P, u))]

    def intro_edge(self, k, u, v, w):
        r, q, P = w
        if q == 3:
            return [EDEAD]
        out = [self._wrap(r, conn_intro_edge(q, P, u, v))]
        if r < self.c:
            out.append((r + 1, q, P))
        return out

    def join(self, k, w1, w2):
        r1, q1, P1 = w1
        r2, q2, P2 = w2
        if q1 == 3 or q2 == 3:
            return [EDEAD]
        if r1 + r2 > self.c:
            return []
        return [self._wrap(r1 + r2, conn_join((q1, P1), (q2, P2)))]

    def final(self, k, w):
        r, q, P = w
        return q == 3 or len(P) > 1

    def encode(self, k, w):
        r, q, P = w
        check_labels(k, support(P))
        if not 0 <= r <= self.c:
            raise ValueError("deletion count out of range")
        bw = BitWriter().put(r, bits_for(self.c + 1)).put(q, 2)
        write_partition(bw, k, P)
        return bw.bits()

    def describe(self, w):
        r, q, P = w
        return f"(r={r}, q={q}, P={_describe_partition(P)})"


def conn_core() -> ConnCore:
    return ConnCore()


def vconn_core(c: int) -> VertexConnCore:
    return VertexConnCore(c)


def econn_core(c: int) -> EdgeConnCore:
    return EdgeConnCore(c)
