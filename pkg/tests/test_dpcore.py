import pytest

from widthproof.cores import colorable_core, conn_core, min_vertex_cover_core, simple_core, vertex_cover_core
from widthproof.dpcore import (
    INV_UNDEFINED,
    BitWriter,
    ComplexityReport,
    WitnessSet,
    accepts,
    decode_int,
    dynamize,
    dynamize_unshared,
    encode_int,
    has_final,
    measure_complexity,
    model_check,
    parse_witness_set_bytes,
    serialize_witness_set,
    step,
)
from widthproof.errors import StructuralError
from widthproof.terms import JOIN, LEAF, forget_vertex, intro_edge, intro_vertex, parse_term

from conftest import LIBRARY_SPECS, core_from_spec, corpus


def ws(core, k, items):
    return WitnessSet.build(core, k, items)


class TestStep:
    def test_vertex_cover_examples(self):
        vc2 = vertex_cover_core(2)
        assert set(step(vc2, 1, LEAF, [])) == {(0, 0)}
        assert set(step(vc2, 1, intro_edge(1, 2), [ws(vc2, 1, [(0b01, 1)])])) == {(0b01, 1)}
        assert set(step(vc2, 1, intro_edge(1, 2), [ws(vc2, 1, [(0, 2)])])) == set()

    def test_symbol_outside_alphabet(self):
        vc = vertex_cover_core(1)
        with pytest.raises(StructuralError):
            step(vc, 0, intro_vertex(2), [ws(vc, 0, [(0, 0)])])

    def test_arity_checked(self):
        vc = vertex_cover_core(1)
        with pytest.raises(StructuralError):
            step(vc, 1, JOIN, [ws(vc, 1, [(0, 0)])])

    def test_forget_and_join_formulas(self):
        vc3 = vertex_cover_core(3)
        assert list(vc3.forget_vertex(1, 1, (0b01, 1))) == [(0, 1)]
        assert list(vc3.join(1, (0b11, 2), (0b10, 1))) == [(0b11, 2)]


class TestDynamize:
    def test_examples(self, terms):
        vc1 = vertex_cover_core(1)
        assert set(dynamize(vc1, 1, terms["K2"])) == {(0b01, 1), (0b10, 1)}
        assert set(dynamize(conn_core(), 0, terms["leaf"])) == {(0, ())}
        col = colorable_core(2)
        assert not has_final(col, 2, dynamize(col, 2, terms["K3"]))

    def test_accepts_examples(self, terms):
        assert accepts(vertex_cover_core(0), 0, terms["leaf"])
        assert not accepts(vertex_cover_core(1), 2, terms["K3"])
        assert accepts(vertex_cover_core(2), 2, terms["K3"])
        assert not accepts(conn_core(), 1, terms["two_isolated"])

    def test_model_check_min_vertex_cover(self, terms):
        mvc = min_vertex_cover_core()
        assert model_check(mvc, 2, terms["K3"]) == (True, encode_int(2))
        assert model_check(mvc, 0, terms["leaf"]) == (True, encode_int(0))
        assert model_check(mvc, 2, terms["C4"]) == (True, encode_int(2))
        assert decode_int(model_check(mvc, 2, terms["tri_pendant"])[1]) == 2

    @pytest.mark.parametrize("spec", LIBRARY_SPECS)
    def test_memoization_is_transparent(self, spec):
        core = core_from_spec(spec)
        memo = {}
        for t, _ in corpus(2, 6):
            assert dynamize(core, 2, t, memo) == dynamize_unshared(core, 2, t)


def _clean_matters(spec, k, n):
    core = core_from_spec(spec)
    on, off = {}, {}
    for t, _ in corpus(k, n):
        a, b = dynamize(core, k, t, on), dynamize(core, k, t, off, clean=False)
        if has_final(core, k, a) != has_final(core, k, b) or core.inv(k, a) != core.inv(k, b):
            return t
    return None


@pytest.mark.parametrize("spec", LIBRARY_SPECS + ["VertexCover(0)", "VertexCover(3)"])
def test_clean_soundness(spec):
    for k, n in [(0, 8), (1, 8), (2, 8)]:
        assert _clean_matters(spec, k, n) is None


@pytest.mark.parametrize("spec", LIBRARY_SPECS)
def test_clean_idempotent(spec):
    core = core_from_spec(spec)
    for t, _ in corpus(2, 6):
        S = dynamize(core, 2, t)
        assert core.clean(2, set(S)) == set(S)


class TestWitnessSet:
    def test_canonical_order_and_equality(self):
        vc = vertex_cover_core(3)
        a = ws(vc, 2, [(0b11, 2), (0, 0), (0b01, 1)])
        b = ws(vc, 2, [(0b01, 1), (0b11, 2), (0, 0), (0, 0)])
        assert a == b and hash(a) == hash(b) and a.key == b.key
        assert list(a) == list(b)
        assert len(a) == 3

    def test_serialization(self):
        vc = vertex_cover_core(3)
        s = ws(vc, 2, [(0b11, 2), (0, 0)])
        name, k, encs = parse_witness_set_bytes(serialize_witness_set(vc, 2, s))
        assert (name, k) == ("VertexCover(3)", 2)
        assert encs == [vc.witness_bytes(2, w) for w in s]
        with pytest.raises(ValueError):
            parse_witness_set_bytes(serialize_witness_set(vc, 2, s) + b"x")

    def test_undefined_inv(self):
        assert min_vertex_cover_core().inv(1, ws(min_vertex_cover_core(), 1, [])) == INV_UNDEFINED


def test_bitwriter_gamma():
    assert BitWriter().gamma(1).bits() == (1, 1)
    assert BitWriter().gamma(5).bits() == (5, 0b00101)
    with pytest.raises(ValueError):
        BitWriter().put(4, 2)


def _prefix_free(codes):
    strings = sorted(format(v, f"0{n}b") if n else "" for n, v in codes)
    return all(not b.startswith(a) for a, b in zip(strings, strings[1:]))


@pytest.mark.parametrize("spec", LIBRARY_SPECS + ["NZFlow(2)", "Colorable(1)", "VConnLe(2)"])
@pytest.mark.parametrize("k", [1, 2])
def test_encodings_prefix_free_and_injective(spec, k):
    core = core_from_spec(spec)
    seen = set()
    memo = {}
    for t, _ in corpus(k, 7 if k == 2 else 8):
        seen.update(dynamize(core, k, t, memo))
    codes = {w: core.encode(k, w) for w in seen}
    assert len(set(codes.values())) == len(codes)
    assert _prefix_free(set(codes.values()))
    assert all(core.is_witness(k, w) for w in seen)


class TestMeasure:
    def test_vertex_cover_k0_n1(self):
        rep = measure_complexity(vertex_cover_core(2), 0, 1)
        assert rep.mu == 1 and rep.nu == 1 and rep.delta == 1

    @pytest.mark.parametrize("spec", ["VertexCover(2)", "Simple", "Conn", "Hamiltonian", "Minor(K3)", "EConnLe(1)"])
    def test_closure_matches_enumeration(self, spec):
        core = core_from_spec(spec)
        for k, n in [(1, 7), (2, 6)]:
            assert measure_complexity(core, k, n) == measure_complexity(core, k, n, method="enumerate")

    def test_simple_k2(self):
        rep = measure_complexity(simple_core(), 2, 8)
        assert rep.beta <= 3 and rep.mu == 1
        assert rep.relations_hold()

    def test_relations(self):
        assert ComplexityReport(beta=2, mu=2, nu=3, delta=4, n=1, k=0).relations_hold()
        assert not ComplexityReport(beta=1, mu=1, nu=3, delta=1, n=1, k=0).relations_hold()

    def test_unknown_method(self):
        with pytest.raises(ValueError):
            measure_complexity(simple_core(), 0, 2, method="guess")
