from __future__ import annotations

import re
from functools import lru_cache

import pytest

from widthproof import oracle
from widthproof.cores import named_graph, resolve_core
from widthproof.itd import enumerate_valid_terms, extract
from widthproof.terms import parse_term

# Running example: a triangle on labels {1,2,3} joined with a
# labelled triangle-free branch, then a pendant vertex attached through label 2.
TRI_PENDANT = (
    "(ForgetVertex 2 (IntroEdge 2 3 (IntroVertex 2 (ForgetVertex 1 (ForgetVertex 2 (Join "
    "(IntroEdge 1 3 (IntroEdge 1 2 (IntroVertex 3 (IntroVertex 2 (IntroVertex 1 (Leaf)))))) "
    "(IntroEdge 2 3 (IntroVertex 3 (IntroVertex 2 (IntroVertex 1 (Leaf)))))))))))"
)

TERMS = {
    "leaf": "(Leaf)",
    "single": "(IntroVertex 1 (Leaf))",
    "two_isolated": "(IntroVertex 2 (IntroVertex 1 (Leaf)))",
    "K2": "(IntroEdge 1 2 (IntroVertex 2 (IntroVertex 1 (Leaf))))",
    "double_edge": "(IntroEdge 2 1 (IntroEdge 1 2 (IntroVertex 2 (IntroVertex 1 (Leaf)))))",
    "K3": "(IntroEdge 1 3 (IntroEdge 2 3 (IntroEdge 1 2 (IntroVertex 3 (IntroVertex 2 (IntroVertex 1 (Leaf)))))))",
    # path 1-2-3 at width 1: vertex a (label 1), b (label 2), forget a, c (label 1)
    "P3": "(IntroEdge 1 2 (IntroVertex 1 (ForgetVertex 1 (IntroEdge 1 2 (IntroVertex 2 (IntroVertex 1 (Leaf)))))))",
    # 4-cycle at width 2: a=1, b=2, c=3 path a-b-c, forget b, d=2 joined to a and c
    "C4": "(IntroEdge 2 3 (IntroEdge 1 2 (IntroVertex 2 (ForgetVertex 2 (IntroEdge 2 3 (IntroEdge 1 2 "
    "(IntroVertex 3 (IntroVertex 2 (IntroVertex 1 (Leaf))))))))))",
    # star K_{1,3} at width 1: centre label 1, leaves cycle through label 2
    "star3": "(IntroEdge 1 2 (IntroVertex 2 (ForgetVertex 2 (IntroEdge 1 2 (IntroVertex 2 (ForgetVertex 2 "
    "(IntroEdge 1 2 (IntroVertex 2 (IntroVertex 1 (Leaf))))))))))",
    "tri_pendant": TRI_PENDANT,
}


@pytest.fixture(scope="session")
def terms():
    return {name: parse_term(text) for name, text in TERMS.items()}


def core_from_spec(spec: str):
    m = re.fullmatch(r"(\w+)(?:\((.*)\))?", spec)
    args = [a.strip() for a in m.group(2).split(",")] if m.group(2) else []
    return resolve_core(m.group(1), args)


def oracle_from_spec(spec: str):
    m = re.fullmatch(r"(\w+)(?:\((.*)\))?", spec)
    h = named_graph(m.group(2)) if m.group(1) == "Minor" else None
    return oracle.oracle_for(spec, h)


#: one representative per library core (the twelve registry entries)
LIBRARY_SPECS = [
    "VertexCover(1)", "MinVertexCover", "Simple", "MaxDegGe(2)", "MinDegLe(1)", "Colorable(2)",
    "Conn", "VConnLe(1)", "EConnLe(1)", "Hamiltonian", "NZFlow(3)", "Minor(K3)",
]


@lru_cache(maxsize=None)
def corpus(k: int, n: int):
    """All valid width-k terms of size at most n together with their extracted graphs."""
    ts = list(enumerate_valid_terms(k, n))
    memo: dict = {}
    return [(t, extract(k, t, memo).graph) for t in ts]


class OracleCache:
    """Memoises an oracle by graph structure (vertex ids plus endpoint multiset)."""

    def __init__(self, fn):
        self.fn = fn
        self.cache: dict = {}

    def __call__(self, g):
        key = g.structure_key()
        if key not in self.cache:
            self.cache[key] = self.fn(g)
        return self.cache[key]


#: (criterion id, passed, detail) lines collected by the acceptance suite
CRITERIA: list[tuple[str, bool, str]] = []


@pytest.fixture
def criterion():
    """Record a PASS/FAIL line for an acceptance criterion, then assert it."""

    def record(name: str, ok: bool, detail: str = "") -> None:
        CRITERIA.append((name, bool(ok), detail))
        assert ok, f"{name}: {detail}"

    return record


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in CRITERIA:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
