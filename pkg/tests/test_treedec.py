import pytest

from flyterm.engine import accepts
from flyterm.graphs import Digraph
from flyterm.oracles import oracle_correct, oracle_irredundant
from flyterm.properties import make_ct, make_dirham, make_irredundancy_checker
from flyterm.terms import labels_of, term_size
from flyterm.treedec import (
    LINEAR_CONSTANT,
    TDValidationError,
    TreeDecomposition,
    cycle_digraph,
    fan_decomposition,
    format_td,
    gen_partial_ktree,
    parse_td,
    path_digraph,
    reconstruction_matches,
    td_to_term,
    wait_label,
)

TRIANGLE = Digraph(3, ((1, 2), (2, 3), (3, 1)))
P4 = Digraph(4, ((1, 2), (2, 3), (3, 4)))
P4_TD = "s td 3 2 4\nb 1 1 2\nb 2 2 3\nb 3 3 4\n1 2\n2 3\n"


class TestParse:
    def test_single_bag(self):
        td = parse_td("s td 1 3 3\nb 1 1 2 3\n", TRIANGLE)
        assert td.width == 2 and td.bags == {1: frozenset({1, 2, 3})}

    def test_path_decomposition(self):
        td = parse_td(P4_TD, P4)
        assert td.width == 1
        assert parse_td(format_td(td), P4) == td

    def test_comments(self):
        assert parse_td("c hello\n" + P4_TD, P4).width == 1

    @pytest.mark.parametrize(
        "text,invariant",
        [
            ("b 1 1 2\n", "syntax"),
            ("s td 1 2 2\nb 1 1 x\n", "syntax"),
            ("s td 2 2 2\nb 1 1 2\n", "syntax"),
            ("s td 1 2 2\nb 1 1 2\nb 1 1 2\n", "syntax"),
            ("s td 1 3 3\nb 1 1 2\n", "width"),
            ("s td 1 2 3\nb 1 1 2\n", "coverage"),
            ("s td 2 2 3\nb 1 1 2\nb 2 2 3\n", "tree"),
            ("s td 3 2 3\nb 1 1 2\nb 2 2 3\nb 3 3 1\n1 2\n2 3\n", "connectivity"),
        ],
    )
    def test_broken_invariants(self, text, invariant):
        with pytest.raises(TDValidationError) as info:
            parse_td(text)
        assert info.value.invariant == invariant

    def test_missing_edge_cover(self):
        with pytest.raises(TDValidationError) as info:
            parse_td("s td 2 2 3\nb 1 1 2\nb 2 2 3\n1 2\n", TRIANGLE)
        assert info.value.invariant == "edge-cover"


def compile_and_check(g, td):
    c = td_to_term(g, td)
    assert oracle_correct(c.term) and oracle_irredundant(c.term)
    assert accepts(make_ct(), c.term) and accepts(make_irredundancy_checker(), c.term)
    assert reconstruction_matches(g, c)
    return c


class TestCompile:
    def test_single_vertex(self):
        c = compile_and_check(Digraph(1), TreeDecomposition({1: frozenset({1})}, (), 0, 1))
        assert c.leaf_origin == [("v", 1)]

    def test_loop(self):
        compile_and_check(Digraph(1, ((1, 1), (1, 1))), TreeDecomposition({1: frozenset({1})}, (), 0, 1))

    def test_single_edge(self):
        g = Digraph(2, ((2, 1),))
        c = compile_and_check(g, parse_td("s td 1 2 2\nb 1 1 2\n", g))
        assert sorted(c.leaf_origin) == [("e", 1), ("v", 1), ("v", 2)]

    def test_path(self):
        compile_and_check(P4, parse_td(P4_TD, P4))

    def test_empty_graph(self):
        compile_and_check(Digraph(0), TreeDecomposition({}, (), -1, 0))

    def test_parallel_and_antiparallel(self):
        g = Digraph(3, ((1, 2), (1, 2), (2, 1), (3, 3), (2, 3)))
        compile_and_check(g, parse_td("s td 2 2 3\nb 1 1 2\nb 2 2 3\n1 2\n", g))

    def test_invalid_decomposition_rejected(self):
        with pytest.raises(TDValidationError):
            td_to_term(TRIANGLE, TreeDecomposition({1: frozenset({1, 2}), 2: frozenset({2, 3})}, ((1, 2),), 1, 3))

    def test_wait_labels(self):
        assert [wait_label(s, h) for s in (0, 1) for h in (True, False)] == [-2, -3, -4, -5]

    @pytest.mark.parametrize("k", [1, 2, 3, 4])
    def test_partial_ktrees(self, k):
        for seed in range(25):
            g, td = gen_partial_ktree(k, 15, seed=seed, loops=0.2, antiparallel=0.2)
            c = compile_and_check(g, td)
            b = c.budget(td.width)
            assert b["C_used"] <= 2 and b["D_used"] <= b["D_budget"]
            assert labels_of(c.term) == c.vertex_labels | c.edge_labels
            assert term_size(c.term) <= LINEAR_CONSTANT * (g.n + g.m + len(td.bags))

    def test_density_zero(self):
        g, td = gen_partial_ktree(2, 10, density=0.0, seed=1)
        assert g.m == 0
        compile_and_check(g, td)

    def test_fewer_vertices_than_width(self):
        g, td = gen_partial_ktree(4, 3, seed=2)
        assert td.width == 2
        compile_and_check(g, td)


class TestFan:
    @pytest.mark.parametrize("n", [1, 2, 3, 4, 7, 12])
    def test_cycle_and_path(self, n):
        td = fan_decomposition(n)
        td.validate(cycle_digraph(n))
        td.validate(path_digraph(n))
        assert accepts(make_dirham(), compile_and_check(cycle_digraph(n), td).term)
        # a one-vertex path has no loop, so no Hamiltonian cycle either
        assert not accepts(make_dirham(), compile_and_check(path_digraph(n), td).term)

    def test_term_size_is_linear(self):
        sizes = [term_size(td_to_term(cycle_digraph(n), fan_decomposition(n)).term) for n in (100, 200, 400)]
        # equal growth per added vertex
        assert sizes[2] - sizes[1] == 2 * (sizes[1] - sizes[0])
