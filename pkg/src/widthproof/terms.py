"""Ranked symbols, terms, partial deterministic bottom-up tree automata, term enumeration.

Also home of the s-expression term syntax::

    (IntroEdge 1 2 (IntroVertex 2 (IntroVertex 1 (Leaf))))
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Callable, Hashable, Iterable, Iterator, Mapping, Sequence

from .errors import StructuralError, TermSyntaxError


@dataclass(frozen=True)
class RankedSymbol:
    """A symbol of a ranked alphabet.

    ``params`` carries the integer arguments written after the head in the text
    syntax (labels for the instructive alphabet); two symbols with the same name
    but different params are different symbols.
    """

    name: str
    arity: int
    params: tuple[int, ...] = ()

    def __post_init__(self):
        if self.arity < 0:
            raise StructuralError(f"negative arity for {self.name}")

    def __str__(self) -> str:
        return " ".join([self.name, *map(str, self.params)])


# the five instruction kinds
LEAF = RankedSymbol("Leaf", 0)
JOIN = RankedSymbol("Join", 2)


def intro_vertex(u: int) -> RankedSymbol:
    return RankedSymbol("IntroVertex", 1, (u,))


def forget_vertex(u: int) -> RankedSymbol:
    return RankedSymbol("ForgetVertex", 1, (u,))


def intro_edge(u: int, v: int) -> RankedSymbol:
    return RankedSymbol("IntroEdge", 1, (u, v))


# head -> (number of integer params, arity)
INSTRUCTIVE_SIGNATURE: Mapping[str, tuple[int, int]] = {
    "Leaf": (0, 0),
    "IntroVertex": (1, 1),
    "ForgetVertex": (1, 1),
    "IntroEdge": (2, 1),
    "Join": (0, 2),
}


class Term:
    """Immutable ranked term. Hash, size and height are computed once at construction."""

    __slots__ = ("symbol", "children", "size", "height", "_hash")

    def __init__(self, symbol: RankedSymbol, children: Iterable[Term] = ()):
        children = tuple(children)
        if len(children) != symbol.arity:
            raise StructuralError(
                f"{symbol} has arity {symbol.arity} but got {len(children)} children"
            )
        object.__setattr__(self, "symbol", symbol)
        object.__setattr__(self, "children", children)
        object.__setattr__(self, "size", 1 + sum(c.size for c in children))
        object.__setattr__(
            self, "height", 1 + max(c.height for c in children) if children else 0
        )
        object.__setattr__(self, "_hash", hash((symbol, children)))

    def __setattr__(self, name, value):
        raise AttributeError("Term is immutable")

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, Term) or self._hash != other._hash:
            return False
        return self.symbol == other.symbol and self.children == other.children

    def __repr__(self) -> str:
        return f"Term({format_term(self)!r})"

    def __str__(self) -> str:
        return format_term(self)

    def nodes(self) -> Iterator[tuple[tuple[int, ...], Term]]:
        """Preorder traversal yielding (path, subterm); the path lists child indices from the root."""
        stack = [((), self)]
        while stack:
            path, t = stack.pop()
            yield path, t
            for i in range(len(t.children) - 1, -1, -1):
                stack.append((path + (i,), t.children[i]))

    def preorder_symbols(self) -> list[RankedSymbol]:
        return [t.symbol for _, t in self.nodes()]

    def contains(self, name: str) -> bool:
        return any(t.symbol.name == name for _, t in self.nodes())


def make(symbol: RankedSymbol, *children: Term) -> Term:
    return Term(symbol, children)


# ---------------------------------------------------------------- text syntax

_TOKEN = re.compile(r"\s*(?:(\()|(\))|(-?\d+)|([A-Za-z_][A-Za-z0-9_]*))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m:
            raise TermSyntaxError(f"unexpected character {text[pos]!r}", pos)
        start = m.start(m.lastindex)
        kind = ("(", ")", "int", "name")[m.lastindex - 1]
        tokens.append((kind, m.group(m.lastindex), start))
        pos = m.end()
    return tokens


def parse_term(text: str, signature: Mapping[str, tuple[int, int]] = INSTRUCTIVE_SIGNATURE) -> Term:
    """Parse one s-expression term. Arity and parameter counts are checked against ``signature``."""
    tokens = _tokenize(text)
    if not tokens:
        raise TermSyntaxError("empty input", 0)
    # iterative parser: each frame is [symbol, children, open_pos]
    stack: list[list] = []
    result = None
    i = 0
    while i < len(tokens):
        kind, val, pos = tokens[i]
        if result is not None:
            raise TermSyntaxError("trailing input after term", pos)
        if kind == "(":
            if i + 1 >= len(tokens) or tokens[i + 1][0] != "name":
                raise TermSyntaxError("expected a symbol name after '('", pos)
            _, head, hpos = tokens[i + 1]
            if head not in signature:
                raise TermSyntaxError(f"unknown symbol {head!r}", hpos)
            nparams, arity = signature[head]
            params = []
            j = i + 2
            while j < len(tokens) and tokens[j][0] == "int":
                params.append(int(tokens[j][1]))
                j += 1
            if len(params) != nparams:
                raise TermSyntaxError(
                    f"{head} expects {nparams} integer argument(s), got {len(params)}", hpos
                )
            stack.append([RankedSymbol(head, arity, tuple(params)), [], pos])
            i = j
            continue
        if kind == ")":
            if not stack:
                raise TermSyntaxError("unbalanced ')'", pos)
            symbol, children, opos = stack.pop()
            if len(children) != symbol.arity:
                raise TermSyntaxError(
                    f"{symbol.name} expects {symbol.arity} child term(s), got {len(children)}", opos
                )
            t = Term(symbol, children)
            if stack:
                stack[-1][1].append(t)
            else:
                result = t
            i += 1
            continue
        raise TermSyntaxError(f"unexpected token {val!r}", pos)
    if stack:
        raise TermSyntaxError("unclosed '('", stack[-1][2])
    return result


def format_term(t: Term) -> str:
    out: list[str] = []
    # explicit stack of either terms to open or closing markers
    stack: list = [t]
    while stack:
        item = stack.pop()
        if item is None:
            out.append(")")
            continue
        if out and out[-1] != "(":
            out.append(" ")
        out.append("(")
        out.append(str(item.symbol))
        stack.append(None)
        stack.extend(reversed(item.children))
    return "".join(out)


# ---------------------------------------------------------------- automata

State = Hashable


class TreeAutomaton:
    """Partial deterministic bottom-up tree automaton.

    ``delta(symbol, child_states)`` returns the unique target state or ``None``
    when the transition is undefined. Transitions may be computed on demand, so
    the state set need not be materialized.
    """

    def __init__(
        self,
        alphabet: Sequence[RankedSymbol],
        delta: Callable[[RankedSymbol, tuple], State | None],
        is_final: Callable[[State], bool],
        states: Iterable[State] | None = None,
    ):
        self.alphabet = tuple(alphabet)
        self._symbols = frozenset(self.alphabet)
        self._delta = delta
        self._is_final = is_final
        self.states = None if states is None else frozenset(states)

    @classmethod
    def from_table(
        cls,
        alphabet: Sequence[RankedSymbol],
        states: Iterable[State],
        final_states: Iterable[State],
        table: Mapping[tuple[RankedSymbol, tuple], State],
    ) -> TreeAutomaton:
        states = frozenset(states)
        finals = frozenset(final_states)
        if not finals <= states:
            raise StructuralError("final states must be a subset of the states")
        for (sym, tup), target in table.items():
            if len(tup) != sym.arity:
                raise StructuralError(f"transition tuple length {len(tup)} != arity of {sym}")
            if target not in states or any(q not in states for q in tup):
                raise StructuralError(f"transition for {sym} mentions an unknown state")
        table = dict(table)
        return cls(alphabet, lambda s, qs: table.get((s, qs)), finals.__contains__, states)

    def transition(self, symbol: RankedSymbol, child_states: tuple) -> State | None:
        if symbol not in self._symbols:
            raise StructuralError(f"symbol {symbol} is not in the alphabet")
        if len(child_states) != symbol.arity:
            raise StructuralError(f"{symbol} applied to {len(child_states)} states")
        return self._delta(symbol, child_states)

    def is_final(self, state: State) -> bool:
        return self._is_final(state)

    def run(self, t: Term) -> State | None:
        return run(self, t)

    def accepts(self, t: Term) -> bool:
        return accepts(self, t)


_UNDEFINED = object()


def run(automaton: TreeAutomaton, t: Term) -> State | None:
    """State reached bottom-up on ``t``; ``None`` if some transition is undefined."""
    memo: dict[Term, object] = {}
    stack = [(t, False)]
    while stack:
        node, expanded = stack.pop()
        if node in memo:
            continue
        if not expanded:
            stack.append((node, True))
            stack.extend((c, False) for c in node.children if c not in memo)
            continue
        qs = tuple(memo[c] for c in node.children)
        if node.symbol not in automaton._symbols:
            raise StructuralError(f"symbol {node.symbol} is not in the alphabet")
        if any(q is _UNDEFINED for q in qs):
            memo[node] = _UNDEFINED
            continue
        q = automaton.transition(node.symbol, qs)
        memo[node] = _UNDEFINED if q is None else q
    q = memo[t]
    return None if q is _UNDEFINED else q


def accepts(automaton: TreeAutomaton, t: Term) -> bool:
    q = run(automaton, t)
    return q is not None and automaton.is_final(q)


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """Ordered tuples of ``parts`` positive integers summing to ``total``."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    for cut in itertools.combinations(range(1, total), parts - 1):
        bounds = (0, *cut, total)
        yield tuple(bounds[i + 1] - bounds[i] for i in range(parts))


def terms_by_size_and_state(
    alphabet: Sequence[RankedSymbol], automaton: TreeAutomaton, max_size: int
) -> list[dict[State, list[Term]]]:
    """Table ``T[s][q]`` of all terms of size exactly ``s`` reaching state ``q`` (index 0 unused)."""
    table: list[dict[State, list[Term]]] = [dict() for _ in range(max_size + 1)]
    for size in range(1, max_size + 1):
        cur = table[size]
        for sym in alphabet:
            for comp in _compositions(size - 1, sym.arity):
                pools = [table[s] for s in comp]
                for qs in itertools.product(*(list(p.keys()) for p in pools)):
                    target = automaton.transition(sym, qs)
                    if target is None:
                        continue
                    bucket = cur.setdefault(target, [])
                    for kids in itertools.product(*(p[q] for p, q in zip(pools, qs))):
                        bucket.append(Term(sym, kids))
    return table


def enumerate_terms(
    alphabet: Sequence[RankedSymbol], automaton: TreeAutomaton, max_size: int
) -> Iterator[Term]:
    """Every accepted term of size at most ``max_size``, each once.

    Order: by size, then lexicographically by the preorder sequence of symbol
    positions in ``alphabet``.
    """
    if max_size < 1:
        raise ValueError("max_size must be at least 1")
    index = {s: i for i, s in enumerate(alphabet)}
    table = terms_by_size_and_state(alphabet, automaton, max_size)
    for size in range(1, max_size + 1):
        batch = [
            t
            for q, ts in table[size].items()
            if automaton.is_final(q)
            for t in ts
        ]
        batch.sort(key=lambda t: [index[s] for s in t.preorder_symbols()])
        yield from batch
