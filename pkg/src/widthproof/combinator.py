"""Boolean/invariant combinations of cores, the product core, and the conjecture language.

Grammar (loosest binding first; ``->`` associates to the right)::

    expr  := or ("->" expr)?
    or    := and ("|" and)*
    and   := unary ("&" unary)*
    unary := "!" unary | atom
    atom  := Name "(" args ")" | Name | "inv:" Name ["(" args ")"] cmp INT | "(" expr ")"
    cmp   := "==" | "<=" | ">="
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Sequence

from .cores import resolve_core
from .dpcore import (
    INV_UNDEFINED,
    BitWriter,
    DPCore,
    WitnessSet,
    decode_int,
    has_final,
    step,
)
from .errors import ConjectureSyntaxError, PreconditionError
from .terms import LEAF


@dataclass(frozen=True)
class Combinator:
    """``fn(flags, invs) -> bool`` over ``arity`` cores."""

    arity: int
    fn: Callable[[Sequence[bool], Sequence[bytes]], bool]
    text: str = "phi"

    def __call__(self, flags: Sequence[bool], invs: Sequence[bytes]) -> bool:
        if len(flags) != self.arity or len(invs) != self.arity:
            raise PreconditionError(f"combinator expects {self.arity} arguments")
        return bool(self.fn(flags, invs))


def AND(arity: int) -> Combinator:
    return Combinator(arity, lambda f, i: all(f), " & ".join(f"x{n}" for n in range(arity)))


def IMPLIES() -> Combinator:
    return Combinator(2, lambda f, i: (not f[0]) or f[1], "x0 -> x1")


def compare_inv(inv: bytes, op: str, value: int) -> bool:
    n = decode_int(inv)
    if n is None:
        return False
    return {"==": n == value, "<=": n <= value, ">=": n >= value}[op]


def pack_invs(invs: Sequence[bytes]) -> bytes:
    return b"".join(len(b).to_bytes(4, "big") + b for b in invs)


class ProductCore(DPCore):
    """Product of cores evaluated through a combinator.

    A product witness is the tuple of the constituent witness sets, so every
    product witness set is a singleton. Each component is stepped and cleaned
    by its own core; nothing is pruned across components.
    """

    def __init__(self, phi: Combinator, cores: Sequence[DPCore], name: str | None = None):
        if len(cores) != phi.arity:
            raise PreconditionError(f"combinator of arity {phi.arity} given {len(cores)} cores")
        self.phi = phi
        self.cores = tuple(cores)
        self.name = name or f"[{phi.text}]({', '.join(c.name for c in cores)})"
        self.finite = all(c.finite for c in cores)

    def __eq__(self, other):
        return isinstance(other, ProductCore) and self.name == other.name and self.cores == other.cores

    def __hash__(self):
        return hash((self.name, self.cores))

    def leaf(self, k):
        return [tuple(step(c, k, LEAF, []) for c in self.cores)]

    def transition(self, k, symbol, ws):
        return [tuple(step(c, k, symbol, [w[i] for w in ws]) for i, c in enumerate(self.cores))]

    def final(self, k, w):
        flags = [has_final(c, k, S) for c, S in zip(self.cores, w)]
        invs = [c.inv(k, S) for c, S in zip(self.cores, w)]
        return self.phi(flags, invs)

    def inv(self, k, ws: WitnessSet) -> bytes:
        if not ws:
            return INV_UNDEFINED
        (w,) = ws.items
        return pack_invs([c.inv(k, S) for c, S in zip(self.cores, w)])

    def component_invs(self, k, ws: WitnessSet) -> list[bytes]:
        if not ws:
            return [INV_UNDEFINED] * len(self.cores)
        (w,) = ws.items
        return [c.inv(k, S) for c, S in zip(self.cores, w)]

    def encode(self, k, w):
        """Per component: Elias-gamma count + 1, then the component witness codes."""
        bw = BitWriter()
        for c, S in zip(self.cores, w):
            bw.gamma(len(S) + 1)
            for x in S:
                n, v = c.encode(k, x)
                bw.put(v, n)
        return bw.bits()

    def describe(self, w):
        return " x ".join("{" + ", ".join(c.describe(x) for x in S) + "}" for c, S in zip(self.cores, w))


def encoding_overhead(mus: Sequence[int]) -> int:
    """Bits spent on the per-component counts when component ``i`` holds at most ``mus[i]`` witnesses."""
    return sum(2 * (m + 1).bit_length() - 1 for m in mus)


def combine(phi: Combinator, cores: Sequence[DPCore], name: str | None = None) -> ProductCore:
    return ProductCore(phi, cores, name)


# ---------------------------------------------------------------- conjecture language


_TOKENS = re.compile(
    r"\s*(?:(?P<arrow>->)|(?P<cmp>==|<=|>=)|(?P<op>[|&!()])|(?P<inv>inv:)"
    r"|(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*))"
)
_ARGS = re.compile(r"\s*\(([^()]*)\)")


def _tokenize(text: str):
    """Tokens are ``(kind, value, offset)``. A parenthesis right after a name opens a raw argument list."""
    pos, out = 0, []
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKENS.match(text, pos)
        if not m or m.end() == pos:
            raise ConjectureSyntaxError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        out.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
        if kind == "name":
            a = _ARGS.match(text, pos)
            if a:
                out.append(("args", a.group(1), a.start(1)))
                pos = a.end()
            elif text[pos:].lstrip().startswith("("):
                raise ConjectureSyntaxError("unclosed argument list", text.index("(", pos))
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str, base_dir):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.base_dir = base_dir
        self.cores: list[DPCore] = []
        self.plain_atom = True

    def peek(self):
        return self.toks[self.i]

    def take(self, kind=None, value=None):
        tok = self.toks[self.i]
        if (kind and tok[0] != kind) or (value is not None and tok[1] != value):
            want = value or kind
            raise ConjectureSyntaxError(f"expected {want!r}, found {tok[1] or 'end of input'!r}", tok[2])
        self.i += 1
        return tok

    def core_index(self, core: DPCore) -> int:
        for n, c in enumerate(self.cores):
            if c == core:
                return n
        self.cores.append(core)
        return len(self.cores) - 1

    def parse(self):
        node = self.expr()
        if self.peek()[0] != "end":
            tok = self.peek()
            raise ConjectureSyntaxError(f"unexpected {tok[1]!r}", tok[2])
        return node

    def expr(self):
        left = self.disj()
        if self.peek()[0] == "arrow":
            self.take()
            self.plain_atom = False
            right = self.expr()
            return ("->", left, right)
        return left

    def disj(self):
        node = self.conj()
        while self.peek()[1] == "|" and self.peek()[0] == "op":
            self.take()
            self.plain_atom = False
            node = ("|", node, self.conj())
        return node

    def conj(self):
        node = self.unary()
        while self.peek()[1] == "&" and self.peek()[0] == "op":
            self.take()
            self.plain_atom = False
            node = ("&", node, self.unary())
        return node

    def unary(self):
        if self.peek()[0] == "op" and self.peek()[1] == "!":
            self.take()
            self.plain_atom = False
            return ("!", self.unary())
        return self.atom()

    def core_ref(self):
        _, name, pos = self.take("name")
        args: list[str] = []
        if self.peek()[0] == "args":
            raw = self.take()[1].strip()
            args = [a.strip() for a in raw.split(",")] if raw else []
        return self.core_index(resolve_core(name, args, pos, self.base_dir))

    def atom(self):
        kind, val, pos = self.peek()
        if kind == "op" and val == "(":
            self.take()
            node = self.expr()
            self.take("op", ")")
            return node
        if kind == "inv":
            self.take()
            self.plain_atom = False
            idx = self.core_ref()
            _, op, _ = self.take("cmp")
            _, num, _ = self.take("int")
            return ("inv", idx, op, int(num))
        if kind == "name":
            return ("atom", self.core_ref())
        raise ConjectureSyntaxError(f"expected a core, '(' , '!' or 'inv:', found {val or 'end of input'!r}", pos)


def _evaluate(node, flags, invs) -> bool:
    tag = node[0]
    if tag == "atom":
        return flags[node[1]]
    if tag == "inv":
        return compare_inv(invs[node[1]], node[2], node[3])
    if tag == "!":
        return not _evaluate(node[1], flags, invs)
    if tag == "&":
        return _evaluate(node[1], flags, invs) and _evaluate(node[2], flags, invs)
    if tag == "|":
        return _evaluate(node[1], flags, invs) or _evaluate(node[2], flags, invs)
    if tag == "->":
        return (not _evaluate(node[1], flags, invs)) or _evaluate(node[2], flags, invs)
    raise AssertionError(tag)


@dataclass(frozen=True)
class Conjecture:
    text: str
    combinator: Combinator
    cores: tuple[DPCore, ...]
    #: the whole expression is one bare core name, so no product is needed
    plain: bool

    def core(self) -> DPCore:
        if self.plain:
            return self.cores[0]
        return combine(self.combinator, self.cores, name=self.text.strip())


def parse_conjecture(text: str, base_dir=None) -> tuple[Combinator, list[DPCore]]:
    conj = conjecture(text, base_dir)
    return conj.combinator, list(conj.cores)


def conjecture(text: str, base_dir=None) -> Conjecture:
    p = _Parser(text, base_dir)
    tree = p.parse()
    phi = Combinator(len(p.cores), lambda f, i, t=tree: _evaluate(t, f, i), text.strip())
    return Conjecture(text, phi, tuple(p.cores), p.plain_atom)


def conjecture_core(text: str, base_dir=None) -> DPCore:
    return conjecture(text, base_dir).core()
