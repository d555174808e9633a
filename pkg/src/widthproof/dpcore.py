"""Dynamic-programming cores, witness sets, dynamization, model checking, complexity measures."""

from __future__ import annotations

import itertools
import struct
from dataclasses import dataclass
from typing import Hashable, Iterable, Iterator, Sequence

from .errors import BudgetExceeded, StructuralError
from .itd import _symbol_index, active_set_step, instructive_alphabet, run_states
from .terms import RankedSymbol, Term

Witness = Hashable

#: invariant value of an empty witness set
INV_UNDEFINED = b"undefined"


def encode_int(n: int) -> bytes:
    """Big-endian, at least one byte. Used for integer invariants."""
    return n.to_bytes(max(1, (n.bit_length() + 7) // 8), "big")


def decode_int(b: bytes) -> int | None:
    if b == INV_UNDEFINED:
        return None
    return int.from_bytes(b, "big")


class BitWriter:
    """Accumulates a bit string; witness encodings are built with it."""

    __slots__ = ("value", "nbits")

    def __init__(self):
        self.value = 0
        self.nbits = 0

    def put(self, x: int, width: int) -> BitWriter:
        if width == 0:
            return self
        if x < 0 or x >= 1 << width:
            raise ValueError(f"{x} does not fit in {width} bits")
        self.value = (self.value << width) | x
        self.nbits += width
        return self

    def gamma(self, n: int) -> BitWriter:
        """Elias gamma code of ``n >= 1`` (prefix-free, 2*floor(log2 n)+1 bits)."""
        if n < 1:
            raise ValueError("gamma code needs n >= 1")
        L = n.bit_length()
        self.put(0, L - 1)
        return self.put(n, L)

    def bits(self) -> tuple[int, int]:
        return self.nbits, self.value


def bits_for(count: int) -> int:
    """Width of a fixed-size field able to hold ``count`` distinct values."""
    return max(count - 1, 0).bit_length()


def pack_bits(nbits: int, value: int) -> bytes:
    return struct.pack(">H", nbits) + value.to_bytes((nbits + 7) // 8, "big")


class DPCore:
    """Base class for DP-cores.

    A core describes, for every width ``k``, local witnesses with a prefix-free
    bit encoding (:meth:`encode`), a finality test, the leaf witnesses, the four
    unary/binary transitions, a clean function and an invariant. All methods
    are pure. Subclasses override the hooks below.
    """

    #: registry text of the core, e.g. ``"VertexCover(2)"``
    name: str = "core"
    #: whether the witness domain is finite for each ``k`` (needed by the unbounded inclusion test)
    finite: bool = True
    #: whether ``inv`` yields a big-endian integer (as opposed to opaque bytes)
    integer_inv: bool = False

    # -- hooks --------------------------------------------------------------
    def leaf(self, k: int) -> Iterable[Witness]:
        raise NotImplementedError

    def intro_vertex(self, k: int, u: int, w: Witness) -> Iterable[Witness]:
        raise NotImplementedError

    def forget_vertex(self, k: int, u: int, w: Witness) -> Iterable[Witness]:
        raise NotImplementedError

    def intro_edge(self, k: int, u: int, v: int, w: Witness) -> Iterable[Witness]:
        raise NotImplementedError

    def join(self, k: int, w1: Witness, w2: Witness) -> Iterable[Witness]:
        raise NotImplementedError

    def final(self, k: int, w: Witness) -> bool:
        raise NotImplementedError

    def clean(self, k: int, ws: set) -> set:
        return ws

    def inv(self, k: int, ws: WitnessSet) -> bytes:
        # decision-only cores carry no invariant; a constant keeps inv coherent
        return b""

    def encode(self, k: int, w: Witness) -> tuple[int, int]:
        """Prefix-free bit encoding ``(nbits, value)``."""
        raise NotImplementedError

    def is_witness(self, k: int, w: Witness) -> bool:
        try:
            self.encode(k, w)
        except (ValueError, TypeError, KeyError, IndexError):
            return False
        return True

    # -- derived ------------------------------------------------------------
    def transition(self, k: int, symbol: RankedSymbol, ws: Sequence[Witness]) -> Iterable[Witness]:
        name = symbol.name
        if name == "Leaf":
            return self.leaf(k)
        if name == "IntroVertex":
            return self.intro_vertex(k, symbol.params[0], ws[0])
        if name == "ForgetVertex":
            return self.forget_vertex(k, symbol.params[0], ws[0])
        if name == "IntroEdge":
            return self.intro_edge(k, symbol.params[0], symbol.params[1], ws[0])
        if name == "Join":
            return self.join(k, ws[0], ws[1])
        raise StructuralError(f"unknown instruction {symbol}")

    def witness_bytes(self, k: int, w: Witness) -> bytes:
        cache = self.__dict__.setdefault("_wbytes", {})
        key = (k, w)
        b = cache.get(key)
        if b is None:
            b = pack_bits(*self.encode(k, w))
            if len(cache) < 1_000_000:
                cache[key] = b
        return b

    def witness_bitlength(self, k: int, w: Witness) -> int:
        return self.encode(k, w)[0]

    def describe(self, w: Witness) -> str:
        return repr(w)

    def __repr__(self) -> str:
        return self.name


class WitnessSet:
    """Immutable set of witnesses kept sorted by canonical byte encoding.

    Two sets are equal iff their canonical byte keys are equal.
    """

    __slots__ = ("items", "key", "_hash")

    def __init__(self, items: tuple, key: bytes):
        self.items = items
        self.key = key
        self._hash = hash(key)

    @classmethod
    def build(cls, core: DPCore, k: int, witnesses: Iterable[Witness]) -> WitnessSet:
        enc = [(core.witness_bytes(k, w), w) for w in set(witnesses)]
        enc.sort(key=lambda p: p[0])
        key = b"".join(struct.pack(">H", len(b)) + b for b, _ in enc)
        return cls(tuple(w for _, w in enc), key)

    def __iter__(self) -> Iterator[Witness]:
        return iter(self.items)

    def __len__(self) -> int:
        return len(self.items)

    def __bool__(self) -> bool:
        return bool(self.items)

    def __contains__(self, w) -> bool:
        return w in self.items

    def __eq__(self, other) -> bool:
        return isinstance(other, WitnessSet) and self.key == other.key

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"WitnessSet({list(self.items)!r})"

    def as_set(self) -> frozenset:
        return frozenset(self.items)


def serialize_witness_set(core: DPCore, k: int, ws: WitnessSet) -> bytes:
    """Length-prefixed canonical stream: core id, k, count, sorted encodings."""
    name = core.name.encode()
    out = [struct.pack(">H", len(name)), name, struct.pack(">II", k, len(ws))]
    for w in ws:
        b = core.witness_bytes(k, w)
        out.append(struct.pack(">I", len(b)))
        out.append(b)
    return b"".join(out)


def parse_witness_set_bytes(data: bytes) -> tuple[str, int, list[bytes]]:
    """Inverse framing of :func:`serialize_witness_set`; returns (core id, k, encodings)."""
    (n,) = struct.unpack_from(">H", data, 0)
    pos = 2
    name = data[pos : pos + n].decode()
    pos += n
    k, count = struct.unpack_from(">II", data, pos)
    pos += 8
    encs = []
    for _ in range(count):
        (ln,) = struct.unpack_from(">I", data, pos)
        pos += 4
        encs.append(data[pos : pos + ln])
        pos += ln
    if pos != len(data):
        raise ValueError("trailing bytes in witness set stream")
    return name, k, encs


# ---------------------------------------------------------------- engine


def _check_symbol(k: int, symbol: RankedSymbol) -> None:
    if symbol not in _symbol_index(k):
        raise StructuralError(f"symbol {symbol} is not in the width-{k} alphabet")


def raw_step(core: DPCore, k: int, symbol: RankedSymbol, child_sets: Sequence[Iterable[Witness]]) -> set:
    """Union of transitions over the Cartesian product of the child sets (no clean)."""
    if len(child_sets) != symbol.arity:
        raise StructuralError(f"{symbol} needs {symbol.arity} child sets, got {len(child_sets)}")
    out: set = set()
    if symbol.arity == 0:
        out.update(core.leaf(k))
        return out
    for ws in itertools.product(*child_sets):
        out.update(core.transition(k, symbol, ws))
    return out


def step(core: DPCore, k: int, symbol: RankedSymbol, child_sets: Sequence[WitnessSet], clean: bool = True) -> WitnessSet:
    _check_symbol(k, symbol)
    out = raw_step(core, k, symbol, child_sets)
    if clean:
        out = core.clean(k, out)
    return WitnessSet.build(core, k, out)


def dynamize(core: DPCore, k: int, t: Term, memo: dict | None = None, clean: bool = True) -> WitnessSet:
    """Bottom-up fold of :func:`step` over ``t``; ``memo`` (term -> set) may be shared across calls."""
    run_states(k, t)
    if memo is None:
        memo = {}
    stack = [(t, False)]
    while stack:
        node, expanded = stack.pop()
        if node in memo:
            continue
        if not expanded:
            stack.append((node, True))
            stack.extend((c, False) for c in node.children if c not in memo)
            continue
        memo[node] = step(core, k, node.symbol, [memo[c] for c in node.children], clean)
    return memo[t]


def dynamize_unshared(core: DPCore, k: int, t: Term) -> WitnessSet:
    """Recursive dynamization without any subterm sharing (reference implementation)."""
    return step(core, k, t.symbol, [dynamize_unshared(core, k, c) for c in t.children])


def has_final(core: DPCore, k: int, ws: Iterable[Witness]) -> bool:
    return any(core.final(k, w) for w in ws)


def accepts(core: DPCore, k: int, t: Term, memo: dict | None = None) -> bool:
    return has_final(core, k, dynamize(core, k, t, memo))


def model_check(core: DPCore, k: int, t: Term, memo: dict | None = None) -> tuple[bool, bytes]:
    ws = dynamize(core, k, t, memo)
    return has_final(core, k, ws), core.inv(k, ws)


# ---------------------------------------------------------------- measures


@dataclass(frozen=True)
class ComplexityReport:
    beta: int
    mu: int
    nu: int
    delta: int
    n: int
    k: int

    def relations_hold(self) -> bool:
        """``mu <= nu <= 2**beta`` and ``delta <= min(2*nu**mu, 2**nu)``."""
        return (
            self.mu <= self.nu <= 2**self.beta
            and self.delta <= min(2 * self.nu**self.mu, 2**self.nu)
        )


def reachable_sets_by_size(core: DPCore, k: int, n: int, max_pairs: int | None = None) -> list[set]:
    """``L[s]`` = set of ``(state, WitnessSet)`` produced by valid terms of size exactly ``s``.

    Computed level by level; equivalent to dynamizing every valid term of size
    at most ``n`` but proportional to the number of distinct pairs.
    """
    alphabet = instructive_alphabet(k)
    unary = [s for s in alphabet if s.arity == 1]
    levels: list[set] = [set() for _ in range(n + 1)]
    total = 0
    cache: dict = {}

    def go(sym, q, sets):
        key = (sym, tuple(s.key for s in sets))
        r = cache.get(key)
        if r is None:
            r = step(core, k, sym, sets)
            cache[key] = r
        return r

    for size in range(1, n + 1):
        cur = levels[size]
        if size == 1:
            cur.add((0, step(core, k, alphabet[0], [])))
        else:
            for q, S in levels[size - 1]:
                for sym in unary:
                    q2 = active_set_step(sym, (q,))
                    if q2 is not None:
                        cur.add((q2, go(sym, q2, [S])))
            for a in range(1, size - 1):
                b = size - 1 - a
                by_state: dict[int, list] = {}
                for q, S in levels[b]:
                    by_state.setdefault(q, []).append(S)
                for q, S1 in levels[a]:
                    for S2 in by_state.get(q, ()):
                        cur.add((q, go(alphabet[-1], q, [S1, S2])))
        total += len(cur)
        if max_pairs is not None and total > max_pairs:
            raise BudgetExceeded(f"more than {max_pairs} (state, set) pairs up to size {size}")
    return levels


def report_from_sets(core: DPCore, k: int, n: int, sets: Iterable[WitnessSet]) -> ComplexityReport:
    distinct = {S.key: S for S in sets}
    witnesses = set()
    mu = 0
    for S in distinct.values():
        mu = max(mu, len(S))
        witnesses.update(S)
    beta = max((core.witness_bitlength(k, w) for w in witnesses), default=0)
    return ComplexityReport(beta=beta, mu=mu, nu=len(witnesses), delta=len(distinct), n=n, k=k)


def measure_complexity(core: DPCore, k: int, n: int, max_pairs: int | None = 2_000_000, method: str = "closure") -> ComplexityReport:
    """Empirical bitlength, multiplicity, state complexity and deterministic state complexity.

    ``method="closure"`` uses :func:`reachable_sets_by_size`; ``method="enumerate"``
    dynamizes every valid term of size at most ``n`` (slow, used to cross-check).
    """
    if method == "closure":
        levels = reachable_sets_by_size(core, k, n, max_pairs)
        sets = [S for lvl in levels for _, S in lvl]
    elif method == "enumerate":
        from .itd import enumerate_valid_terms

        memo: dict = {}
        sets = [dynamize(core, k, t, memo) for t in enumerate_valid_terms(k, n)]
    else:
        raise ValueError(f"unknown method {method!r}")
    return report_from_sets(core, k, n, sets)
