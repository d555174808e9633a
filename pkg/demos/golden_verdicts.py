"""Run the small-width inclusion tests and print verdicts with their certificates."""

from widthproof.atp import dump_refutation, inclusion_test, verify_refutation
from widthproof.combinator import conjecture_core
from widthproof.terms import format_term

CASES = [
    (0, "Simple"),
    (1, "Colorable(2)"),
    (1, "Conn"),
    (1, "Simple -> Colorable(2)"),
    (1, "inv:MinVertexCover <= 1"),
    (2, "Simple -> Colorable(3)"),
]

for k, text in CASES:
    core = conjecture_core(text)
    out = inclusion_test(core, k)
    print(f"k={k}  {text:28s} {out.verdict.value:8s} pairs={out.stats.pairs_visited}")
    if out.refutation is not None:
        assert verify_refutation(core, k, out.refutation)
        print(f"    counterexample {format_term(out.counterexample)}")
        print(f"    graph edges {[(a, b) for _, a, b in out.graph.edge_ends]} on {out.graph.n} vertices")
        print(f"    refutation: {len(out.refutation)} entries, {len(dump_refutation(core, out.refutation))} bytes of JSON")
