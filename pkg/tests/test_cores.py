import json
from math import comb, gcd

import pytest

from widthproof.cores import (
    CORE_NAMES,
    colorable_core,
    conn_core,
    econn_core,
    hamiltonian_core,
    max_deg_core,
    min_deg_core,
    minor_core,
    named_graph,
    nzflow_core,
    resolve_core,
    simple_core,
    vconn_core,
    vertex_cover_core,
    witness_bitlength,
)
from widthproof.dpcore import accepts, dynamize, measure_complexity, step
from widthproof.errors import ConjectureSyntaxError
from widthproof.graphs import graph_to_json
from widthproof.itd import instructive_alphabet
from widthproof.terms import parse_term

from conftest import LIBRARY_SPECS, OracleCache, core_from_spec, corpus, oracle_from_spec


def test_registry_has_twelve_cores():
    assert len(CORE_NAMES) == 12


@pytest.mark.parametrize(
    "core,k,term,expected",
    [
        (vertex_cover_core(1), 2, "K3", False),
        (vertex_cover_core(2), 2, "K3", True),
        (simple_core(), 0, "leaf", True),
        (simple_core(), 1, "double_edge", False),
        (simple_core(), 2, "tri_pendant", True),
        (min_deg_core(0), 0, "single", True),
        (max_deg_core(3), 1, "star3", True),
        (max_deg_core(4), 1, "star3", False),
        (colorable_core(2), 2, "K3", False),
        (colorable_core(3), 2, "K3", True),
        (conn_core(), 1, "two_isolated", False),
        (conn_core(), 1, "K2", True),
        (econn_core(1), 1, "P3", True),
        (vconn_core(1), 1, "P3", True),
        (vconn_core(5), 2, "K3", False),
        (hamiltonian_core(), 2, "K3", True),
        (hamiltonian_core(), 1, "P3", False),
        (hamiltonian_core(), 0, "single", False),
        (hamiltonian_core(), 2, "C4", True),
        (nzflow_core(2), 1, "K2", False),
        (nzflow_core(5), 1, "K2", False),
        # every degree of K3 is even, so the all-ones assignment is a Z_2 flow
        (nzflow_core(2), 2, "K3", True),
        (nzflow_core(2), 1, "P3", False),
        (nzflow_core(3), 2, "K3", True),
        (nzflow_core(2), 0, "leaf", True),
        (nzflow_core(2), 1, "double_edge", True),
        (minor_core(named_graph("K2")), 1, "K2", True),
        (minor_core(named_graph("K3")), 1, "P3", False),
        (minor_core(named_graph("K3")), 2, "C4", True),
        (minor_core(named_graph("K3")), 2, "tri_pendant", True),
        (minor_core(named_graph("C4")), 2, "K3", False),
    ],
    ids=lambda x: getattr(x, "name", str(x)),
)
def test_examples(core, k, term, expected, terms):
    assert accepts(core, k, terms[term]) is expected


def test_leaf_sets():
    assert set(step(simple_core(), 1, instructive_alphabet(1)[0], [])) == {0}
    assert set(step(colorable_core(1), 1, instructive_alphabet(1)[0], [])) == {(0, 0)}


def test_colorable_trivial_when_enough_colors():
    core = colorable_core(3)
    assert core.trivial(2) and not core.trivial(3)
    S = dynamize(core, 2, parse_term("(IntroEdge 1 2 (IntroVertex 2 (IntroVertex 1 (Leaf))))"))
    assert len(S) == 1 and witness_bitlength(core, 2, next(iter(S))) == 0


def test_degree_saturates(terms):
    core = max_deg_core(1)
    S = dynamize(core, 1, terms["star3"])
    # centre (label 1) has degree 3; stored capped at d+1 = 2, shifted by one for "active"
    assert all(w[1][0] == 1 + 2 for w in S)


@pytest.mark.parametrize("m", [3, 4, 5, 6])
def test_nzflow_unit_symmetry(m):
    """Scaling every imbalance by a unit of Z_m commutes with all transitions."""
    core = nzflow_core(m)
    k = 2
    units = [a for a in range(1, m) if gcd(a, m) == 1]
    vectors = [(a, b, c) for a in range(m) for b in range(m) for c in range(m)]
    scale = lambda a, w: tuple(a * x % m for x in w)
    for a in units:
        for w in vectors[:: max(1, len(vectors) // 40)]:
            for sym in instructive_alphabet(k)[1:-1]:
                out = set(core.transition(k, sym, [w]))
                assert {scale(a, x) for x in out} == set(core.transition(k, sym, [scale(a, w)]))
                assert core.final(k, w) == core.final(k, scale(a, w))
            for w2 in vectors[:: max(1, len(vectors) // 7)]:
                assert {scale(a, x) for x in core.join(k, w, w2)} == set(core.join(k, scale(a, w), scale(a, w2)))


class TestBitlength:
    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_simple(self, k):
        rep = measure_complexity(simple_core(), k, 7)
        assert rep.beta <= comb(k + 1, 2)

    def test_colorable(self):
        assert measure_complexity(colorable_core(3), 2, 7).beta <= 3 * 2
        # c = 2 at k = 2 is a real core: ceil(log2 3) bits per label
        assert measure_complexity(colorable_core(2), 2, 7).beta <= 2 * 3

    def test_minor_packed(self):
        h = named_graph("K3")
        core = minor_core(h)
        for k in (1, 2):
            beta = measure_complexity(core, k, 7).beta
            # measured constant for O(k log k + |V_H| + |E_H|)
            assert beta <= 4 * ((k + 1) * max(1, (k + 1).bit_length()) + h.n + h.m)


@pytest.mark.parametrize("spec", LIBRARY_SPECS + ["NZFlow(2)", "Minor(P3)", "MaxDegGe(0)", "MinDegLe(0)", "EConnLe(2)", "VConnLe(2)"])
@pytest.mark.parametrize("k,n", [(0, 8), (1, 8)])
def test_oracle_equivalence_small(spec, k, n):
    core = core_from_spec(spec)
    orc = OracleCache(oracle_from_spec(spec))
    memo = {}
    for t, g in corpus(k, n):
        S = dynamize(core, k, t, memo)
        if spec == "MinVertexCover":
            assert int.from_bytes(core.inv(k, S), "big") == orc(g)
        else:
            assert accepts(core, k, t, memo) == orc(g), t


@pytest.mark.parametrize("spec", ["Simple", "MaxDegGe(2)", "MinDegLe(1)", "Conn"])
def test_multiplicity_one(spec):
    core = core_from_spec(spec)
    for k in (0, 1, 2):
        assert measure_complexity(core, k, 8 if k < 2 else 7).mu == 1


class TestRegistry:
    def test_names(self):
        assert resolve_core("VertexCover", ["2"]).name == "VertexCover(2)"
        assert resolve_core("Minor", ["K3"]).name == "Minor(K3)"

    @pytest.mark.parametrize("name,args", [("Nope", []), ("VertexCover", []), ("Colorable", ["x"]), ("NZFlow", ["1"]), ("Minor", ["Q9"]), ("Simple", ["1"])])
    def test_errors(self, name, args):
        with pytest.raises(ConjectureSyntaxError):
            resolve_core(name, args)

    def test_minor_from_file(self, tmp_path, terms):
        (tmp_path / "k3.json").write_text(json.dumps(graph_to_json(named_graph("K3"))))
        core = resolve_core("Minor", ["@k3.json"], base_dir=tmp_path)
        assert accepts(core, 2, terms["C4"]) and not accepts(core, 1, terms["P3"])

    def test_named_graphs(self):
        assert named_graph("K4").m == 6 and named_graph("C5").m == 5 and named_graph("P4").m == 3
        with pytest.raises(ValueError):
            named_graph("C2")


def test_minor_bit_monotone(terms):
    core = minor_core(named_graph("K3"))
    memo = {}
    for t, _ in corpus(2, 6):
        for child in t.children:
            below = {w[2] for w in dynamize(core, 2, child, memo)}
            if t.symbol.arity == 1:
                for w in dynamize(core, 2, t, memo):
                    assert any(b & w[2] == b for b in below)
