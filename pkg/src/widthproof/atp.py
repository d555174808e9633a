"""Width-based inclusion test: breadth-first search over (automaton state, witness set) pairs.

A run either exhausts the reachable pairs (the property holds for every graph
of treewidth at most ``k``), or dequeues a pair whose set has no final
witness. The derivation of that pair is a refutation, and replaying it yields
a counterexample term.
"""

from __future__ import annotations

import base64
import enum
import json
import os
import time
from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

from .dpcore import DPCore, WitnessSet, has_final, serialize_witness_set, step
from .errors import PreconditionError, ValidationError
from .graphs import Multigraph
from .itd import _symbol_index, active_set_step, extract, instructive_alphabet
from .terms import RankedSymbol, Term, format_term, parse_term

BUDGET_ENV = "WIDTHPROOF_BUDGET_BYTES"
DEFAULT_BUDGET_BYTES = 2 << 30
#: rough per-pair bookkeeping cost added to the set key length when charging the byte budget
PAIR_OVERHEAD_BYTES = 96


class Verdict(str, enum.Enum):
    HOLDS = "HOLDS"
    REFUTED = "REFUTED"
    EXHAUSTED = "RESOURCE_EXHAUSTED"


@dataclass(frozen=True)
class RefutationEntry:
    state: int
    set: WitnessSet
    symbol: RankedSymbol
    children: tuple[int, ...]


@dataclass(frozen=True)
class Refutation:
    core_name: str
    k: int
    entries: tuple[RefutationEntry, ...]

    def __len__(self) -> int:
        return len(self.entries)


@dataclass
class SearchStats:
    pairs_visited: int = 0
    pairs_discovered: int = 0
    frontier_peak: int = 0
    distinct_sets: int = 0
    bytes_charged: int = 0
    wall_time: float = 0.0


@dataclass
class ProofOutcome:
    verdict: Verdict
    core_name: str
    k: int
    #: size bound of the bounded variant, ``None`` for the unbounded test
    max_size: int | None = None
    refutation: Refutation | None = None
    counterexample: Term | None = None
    graph: Multigraph | None = None
    stats: SearchStats = field(default_factory=SearchStats)
    reason: str = ""

    @property
    def holds(self) -> bool:
        return self.verdict is Verdict.HOLDS

    def to_json(self, core: DPCore | None = None, include_time: bool = False) -> dict:
        from .graphs import graph_to_json

        out: dict = {
            "verdict": self.verdict.value,
            "core": self.core_name,
            "k": self.k,
            "max_size": self.max_size,
            "stats": {
                "pairs_visited": self.stats.pairs_visited,
                "pairs_discovered": self.stats.pairs_discovered,
                "frontier_peak": self.stats.frontier_peak,
                "distinct_sets": self.stats.distinct_sets,
            },
        }
        if include_time:
            out["stats"]["wall_time"] = self.stats.wall_time
        if self.reason:
            out["reason"] = self.reason
        if self.counterexample is not None:
            out["counterexample"] = format_term(self.counterexample)
            out["counterexample_size"] = self.counterexample.size
            out["graph"] = graph_to_json(self.graph)
        if self.refutation is not None and core is not None:
            out["refutation"] = refutation_to_json(core, self.refutation)
        return out


def default_budget_bytes() -> int:
    raw = os.environ.get(BUDGET_ENV)
    if raw:
        try:
            return int(raw)
        except ValueError as exc:
            raise PreconditionError(f"{BUDGET_ENV} must be an integer, got {raw!r}") from exc
    return DEFAULT_BUDGET_BYTES


# ---------------------------------------------------------------- search


class _Search:
    """Shared FIFO exploration. Nodes are ``(state, set)`` or ``(state, set, size)``."""

    def __init__(self, core: DPCore, k: int, max_size: int | None, max_pairs: int | None, max_bytes: int | None):
        self.core, self.k, self.max_size = core, k, max_size
        self.max_pairs = max_pairs
        self.max_bytes = default_budget_bytes() if max_bytes is None else max_bytes
        self.alphabet = instructive_alphabet(k)
        self.unary = [s for s in self.alphabet if s.arity == 1]
        self.join = self.alphabet[-1]
        # arena entries: (state, set, size, symbol, children)
        self.arena: list[tuple] = []
        self.by_state: dict[int, list[int]] = {}
        self.seen: set = set()
        self.queue: deque = deque()
        self.stats = SearchStats()
        self.sets: set[bytes] = set()
        self.step_cache: dict = {}

    def key(self, state, S, size):
        return (state, S.key) if self.max_size is None else (state, S.key, size)

    def _step(self, symbol, sets):
        ck = (symbol, tuple(s.key for s in sets))
        r = self.step_cache.get(ck)
        if r is None:
            r = step(self.core, self.k, symbol, sets)
            self.step_cache[ck] = r
        return r

    def offer(self, state, S, size, symbol, children) -> str | None:
        key = self.key(state, S, size)
        if key in self.seen:
            return None
        self.seen.add(key)
        self.sets.add(S.key)
        self.queue.append((state, S, size, symbol, children))
        self.stats.pairs_discovered += 1
        self.stats.bytes_charged += len(S.key) + PAIR_OVERHEAD_BYTES
        self.stats.frontier_peak = max(self.stats.frontier_peak, len(self.queue))
        if self.max_pairs is not None and self.stats.pairs_discovered > self.max_pairs:
            return f"pair budget of {self.max_pairs} exceeded"
        if self.stats.bytes_charged > self.max_bytes:
            return f"memory budget of {self.max_bytes} bytes exceeded"
        return None

    def run(self) -> ProofOutcome:
        t0 = time.perf_counter()
        outcome = self._run()
        self.stats.pairs_visited = len(self.arena)
        self.stats.distinct_sets = len(self.sets)
        self.stats.wall_time = time.perf_counter() - t0
        outcome.stats = self.stats
        return outcome

    def _outcome(self, verdict, **kw) -> ProofOutcome:
        return ProofOutcome(verdict, self.core.name, self.k, self.max_size, **kw)

    def _run(self) -> ProofOutcome:
        core, k, n = self.core, self.k, self.max_size
        if n is not None and n < 1:
            raise PreconditionError("size bound must be at least 1")
        leaf = self.alphabet[0]
        msg = self.offer(0, self._step(leaf, []), 1, leaf, ())
        while self.queue:
            if msg:
                return self._outcome(Verdict.EXHAUSTED, reason=msg)
            state, S, size, symbol, children = self.queue.popleft()
            idx = len(self.arena)
            self.arena.append((state, S, size, symbol, children))
            if not has_final(core, k, S):
                ref = self._refutation(idx)
                term = reconstruct_counterexample(ref)
                return self._outcome(Verdict.REFUTED, refutation=ref, counterexample=term, graph=extract(k, term).graph)
            partners = self.by_state.setdefault(state, [])
            partners.append(idx)
            if n is None or size + 1 <= n:
                for sym in self.unary:
                    q2 = active_set_step(sym, (state,))
                    if q2 is None:
                        continue
                    msg = msg or self.offer(q2, self._step(sym, [S]), size + 1, sym, (idx,))
            # every ordered pair over processed entries of this state that involves idx
            tuples = sorted({(j, idx) for j in partners} | {(idx, j) for j in partners})
            for a, b in tuples:
                sa, sb = self.arena[a], self.arena[b]
                total = sa[2] + sb[2] + 1
                if n is not None and total > n:
                    continue
                msg = msg or self.offer(state, self._step(self.join, [sa[1], sb[1]]), total, self.join, (a, b))
            if msg:
                return self._outcome(Verdict.EXHAUSTED, reason=msg)
        return self._outcome(Verdict.HOLDS)

    def _refutation(self, last: int) -> Refutation:
        need = set()
        stack = [last]
        while stack:
            i = stack.pop()
            if i in need:
                continue
            need.add(i)
            stack.extend(self.arena[i][4])
        order = sorted(need)
        renumber = {old: new for new, old in enumerate(order)}
        entries = tuple(
            RefutationEntry(self.arena[i][0], self.arena[i][1], self.arena[i][3], tuple(renumber[c] for c in self.arena[i][4]))
            for i in order
        )
        return Refutation(self.core.name, self.k, entries)


def inclusion_test(core: DPCore, k: int, max_pairs: int | None = None, max_bytes: int | None = None) -> ProofOutcome:
    """Decide whether every graph of treewidth at most ``k`` has the property of ``core``.

    The core must be coherent; for cores with an infinite witness domain the
    search terminates only through a refutation or a budget.
    """
    if k < 0:
        raise PreconditionError("width must be non-negative")
    return _Search(core, k, None, max_pairs, max_bytes).run()


def bounded_inclusion_test(core: DPCore, k: int, n: int, max_pairs: int | None = None, max_bytes: int | None = None) -> ProofOutcome:
    """Same question restricted to terms of size at most ``n``; search nodes carry the term size.

    ``HOLDS`` here means holds for every valid term of size at most ``n``.
    """
    if k < 0:
        raise PreconditionError("width must be non-negative")
    return _Search(core, k, n, max_pairs, max_bytes).run()


# ---------------------------------------------------------------- certificates


def _check_shape(ref: Refutation) -> None:
    if not ref.entries:
        raise ValidationError("empty refutation")
    for i, e in enumerate(ref.entries):
        if len(e.children) != e.symbol.arity:
            raise ValidationError(f"entry {i}: {e.symbol} needs {e.symbol.arity} children")
        for c in e.children:
            if not 0 <= c < i:
                raise ValidationError(f"entry {i}: derivation index {c} does not point to an earlier entry")


def reconstruct_counterexample(ref: Refutation) -> Term:
    """Replay the derivations; the last entry's term is the counterexample."""
    _check_shape(ref)
    terms: list[Term] = []
    for e in ref.entries:
        terms.append(Term(e.symbol, tuple(terms[c] for c in e.children)))
    return terms[-1]


def verify_refutation(core: DPCore, k: int, ref: Refutation) -> bool:
    """Re-derive every entry from its cited predecessors and check the final inconsistency."""
    try:
        _check_shape(ref)
    except ValidationError:
        return False
    index = _symbol_index(k)
    for e in ref.entries:
        if e.symbol not in index:
            return False
        kids = [ref.entries[c] for c in e.children]
        q = active_set_step(e.symbol, tuple(c.state for c in kids))
        if q is None or q != e.state:
            return False
        if step(core, k, e.symbol, [c.set for c in kids]) != e.set:
            return False
    return not has_final(core, k, ref.entries[-1].set)


def refutation_to_json(core: DPCore, ref: Refutation) -> list[dict]:
    return [
        {
            "index": i,
            "state": e.state,
            "witness_set": base64.b64encode(serialize_witness_set(core, ref.k, e.set)).decode("ascii"),
            "derivation": {"symbol": str(e.symbol), "child_indices": list(e.children)},
        }
        for i, e in enumerate(ref.entries)
    ]


def dump_refutation(core: DPCore, ref: Refutation) -> str:
    return json.dumps(refutation_to_json(core, ref), indent=1, sort_keys=True) + "\n"


def _symbol_from_text(text: str) -> RankedSymbol:
    head, *params = text.split()
    probe = f"({head} {' '.join(params)} {'(Leaf) ' * (2 if head == 'Join' else 0 if head == 'Leaf' else 1)})"
    return parse_term(probe).symbol


def verify_refutation_json(core: DPCore, k: int, data: Sequence[dict] | str) -> bool:
    """Check a refutation dump without decoding witnesses.

    Every entry is recomputed from its symbol and predecessors and its canonical
    bytes are compared with the stored ``witness_set``.
    """
    if isinstance(data, str):
        data = json.loads(data)
    sets: list[WitnessSet] = []
    states: list[int] = []
    try:
        for i, item in enumerate(data):
            if item["index"] != i:
                return False
            sym = _symbol_from_text(item["derivation"]["symbol"])
            kids = list(item["derivation"]["child_indices"])
            if sym not in _symbol_index(k) or len(kids) != sym.arity or any(not 0 <= c < i for c in kids):
                return False
            q = active_set_step(sym, tuple(states[c] for c in kids))
            if q is None or q != item["state"]:
                return False
            S = step(core, k, sym, [sets[c] for c in kids])
            if serialize_witness_set(core, k, S) != base64.b64decode(item["witness_set"]):
                return False
            sets.append(S)
            states.append(q)
    except (KeyError, TypeError, ValueError):
        return False
    return bool(sets) and not has_final(core, k, sets[-1])


def refutation_term_from_json(data: Sequence[dict] | str) -> Term:
    if isinstance(data, str):
        data = json.loads(data)
    entries = []
    for item in data:
        entries.append(
            RefutationEntry(item["state"], WitnessSet((), b""), _symbol_from_text(item["derivation"]["symbol"]), tuple(item["derivation"]["child_indices"]))
        )
    return reconstruct_counterexample(Refutation("", 0, tuple(entries)))
