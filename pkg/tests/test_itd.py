import json
import random

import pytest

from widthproof import oracle
from widthproof.errors import ValidationError
from widthproof.graphs import Multigraph, isomorphic
from widthproof.itd import (
    InstructiveAlphabet,
    bag_injective_coloring,
    extract,
    from_nice_decomposition,
    instructive_alphabet,
    is_path_decomposition,
    nice_decomposition_from_json,
    nice_decomposition_of_term,
    run_states,
    validate,
    validate_nice_decomposition,
    width,
)
from widthproof.terms import format_term, parse_term

from conftest import TRI_PENDANT, corpus

K2_DECOMP = {
    "root": 4,
    "nodes": [
        {"id": 4, "type": "IntroEdge", "bag": [1, 2], "children": [3], "edge": 1},
        {"id": 3, "type": "IntroVertex", "bag": [1, 2], "children": [2], "vertex": 2},
        {"id": 2, "type": "IntroVertex", "bag": [1], "children": [1], "vertex": 1},
        {"id": 1, "type": "Leaf", "bag": [], "children": []},
    ],
}
K2 = Multigraph((1, 2), ((1, 1, 2),))


class TestAlphabet:
    @pytest.mark.parametrize("k", range(5))
    def test_size_and_nesting(self, k):
        a = instructive_alphabet(k)
        assert len(a) == 1 + (k + 1) + (k + 1) + (k + 1) * k + 1
        assert set(a) <= set(instructive_alphabet(k + 1))
        assert len(InstructiveAlphabet(k)) == len(a)

    def test_canonical_order_k1(self):
        assert [str(s) for s in instructive_alphabet(1)] == [
            "Leaf", "IntroVertex 1", "IntroVertex 2", "ForgetVertex 1", "ForgetVertex 2", "IntroEdge 1 2", "IntroEdge 2 1", "Join",
        ]


class TestValidate:
    def test_examples(self):
        assert validate(0, parse_term("(Leaf)"))
        assert not validate(0, parse_term("(ForgetVertex 1 (Leaf))"))
        assert validate(2, parse_term(TRI_PENDANT))
        assert not validate(1, parse_term(TRI_PENDANT))

    def test_error_carries_node_path(self):
        t = parse_term("(IntroEdge 1 2 (Join (IntroVertex 1 (Leaf)) (ForgetVertex 1 (Leaf))))")
        with pytest.raises(ValidationError) as exc:
            run_states(1, t)
        assert exc.value.path == (0, 1)


class TestExtract:
    def test_leaf_and_single_vertex(self):
        r = extract(0, parse_term("(Leaf)"))
        assert r.graph == Multigraph() and r.top_map == ()
        r = extract(0, parse_term("(IntroVertex 1 (Leaf))"))
        assert r.graph.vertices == (1,) and r.top_map == ((1, 1),)

    def test_triangle_with_pendant(self):
        r = extract(2, parse_term(TRI_PENDANT))
        g = r.graph
        assert g.n == 4 and g.m == 4
        assert [(a, b) for _, a, b in g.edge_ends] == [(1, 2), (1, 3), (2, 3), (3, 4)]
        assert r.top_map == ((3, 3),)
        triangle_plus_pendant = Multigraph((1, 2, 3, 4), ((1, 1, 2), (2, 2, 3), (3, 1, 3), (4, 3, 4)))
        assert isomorphic(g, triangle_plus_pendant)

    def test_fresh_ids_after_join(self):
        # after the join V = {1, 2, 4}, so |V|+1 = 4 would collide with an existing vertex
        t = parse_term(
            "(IntroVertex 2 (Join (ForgetVertex 2 (IntroEdge 1 2 (IntroVertex 2 (IntroVertex 1 (Leaf))))) "
            "(ForgetVertex 2 (IntroEdge 1 2 (IntroVertex 2 (IntroVertex 1 (Leaf)))))))"
        )
        g = extract(1, t).graph
        assert g.vertices == (1, 2, 4, 5)
        assert g.m == 2

    def test_invalid_term_raises(self):
        with pytest.raises(ValidationError):
            extract(1, parse_term("(ForgetVertex 1 (Leaf))"))

    @pytest.mark.parametrize("k,n", [(1, 8), (2, 7)])
    def test_boundary_soundness(self, k, n):
        memo = {}
        for t, _ in corpus(k, n):
            r = extract(k, t, memo)
            states = run_states(k, t)
            top = dict(r.top_map)
            assert sum(1 << (u - 1) for u in top) == states[t]
            assert len(set(top.values())) == len(top)
            assert set(top.values()) <= set(r.graph.vertices)

    def test_width_monotone(self):
        for t, g in corpus(1, 7):
            assert validate(2, t)
            assert extract(2, t).graph == g

    def test_extracted_treewidth(self):
        seen = {}
        for k, n in [(0, 6), (1, 8), (2, 7)]:
            for _, g in corpus(k, n):
                if g.n <= 7:
                    tw = seen.setdefault(g.structure_key(), oracle.treewidth(g))
                    assert tw <= k


class TestWidth:
    def test_examples(self):
        assert width(parse_term("(Leaf)")) == 0
        assert width(parse_term("(IntroEdge 1 2 (IntroVertex 2 (IntroVertex 1 (Leaf))))")) == 1
        assert width(parse_term(TRI_PENDANT)) == 2

    def test_path_decomposition(self):
        assert is_path_decomposition(parse_term("(Leaf)"))
        assert not is_path_decomposition(parse_term("(Join (Leaf) (Leaf))"))
        assert not is_path_decomposition(parse_term(TRI_PENDANT))


class TestConversion:
    def test_single_vertex(self):
        d = nice_decomposition_from_json({"nodes": [
            {"id": 2, "type": "IntroVertex", "bag": [7], "children": [1], "vertex": 7},
            {"id": 1, "type": "Leaf", "bag": [], "children": []},
        ]})
        assert format_term(from_nice_decomposition(Multigraph((7,)), d, 0)) == "(IntroVertex 1 (Leaf))"

    def test_k2(self):
        d = nice_decomposition_from_json(json.dumps(K2_DECOMP))
        assert format_term(from_nice_decomposition(K2, d, 1)) == "(IntroEdge 1 2 (IntroVertex 2 (IntroVertex 1 (Leaf))))"
        assert format_term(from_nice_decomposition(K2, d, 1, [2, 1])) == "(IntroEdge 2 1 (IntroVertex 1 (IntroVertex 2 (Leaf))))"

    def test_rejects_bad_decompositions(self):
        bad = json.loads(json.dumps(K2_DECOMP))
        bad["nodes"][0]["type"] = "ForgetVertex"
        with pytest.raises(ValidationError):
            validate_nice_decomposition(K2, nice_decomposition_from_json(bad))
        missing_edge = {"root": 3, "nodes": K2_DECOMP["nodes"][1:]}
        with pytest.raises(ValidationError):
            validate_nice_decomposition(K2, nice_decomposition_from_json(missing_edge))
        with pytest.raises(ValidationError):
            from_nice_decomposition(K2, nice_decomposition_from_json(K2_DECOMP), 0)

    def test_coloring_is_bag_injective(self):
        for t, _ in corpus(2, 7)[::7]:
            g, d = nice_decomposition_of_term(2, t)
            col = bag_injective_coloring(d, 2)
            for node in d.nodes.values():
                assert len({col[x] for x in node.bag}) == len(node.bag)

    @pytest.mark.parametrize("k,n", [(1, 8), (2, 7)])
    def test_round_trip(self, k, n):
        rng = random.Random(k * 100 + n)
        for t, g in corpus(k, n):
            g2, d = nice_decomposition_of_term(k, t)
            assert g2 == g
            validate_nice_decomposition(g, d, k)
            order = list(range(1, k + 2))
            rng.shuffle(order)
            t2 = from_nice_decomposition(g, d, k, order)
            assert validate(k, t2)
            assert isomorphic(extract(k, t2).graph, g)

    def test_json_round_trip(self):
        _, d = nice_decomposition_of_term(2, parse_term(TRI_PENDANT))
        d2 = nice_decomposition_from_json(json.dumps(d.to_json()))
        assert d2.to_json() == d.to_json()
        assert d.width == 2
