import random

import pytest

from flyterm.generators import (
    GenConfig,
    GenerationError,
    gen_annotations,
    gen_random_incidence_term,
    gen_random_term,
    incidence_term_for,
    random_hamiltonian_digraph,
)
from flyterm.graphs import Digraph, graph_of_incidence
from flyterm.oracles import has_hamiltonian_cycle, oracle_correct, oracle_irredundant
from flyterm.terms import evaluate, iter_leaves, labels_of, serialize_term


def test_same_seed_same_output():
    a = [serialize_term(gen_random_incidence_term(GenConfig(seed=3))[0]) for _ in range(3)]
    assert len(set(a)) == 1
    assert serialize_term(gen_random_term(GenConfig(seed=3))) == serialize_term(gen_random_term(GenConfig(seed=3)))


def test_incidence_terms_are_correct_and_irredundant():
    rng = random.Random(1)
    for _ in range(300):
        t, g = gen_random_incidence_term(GenConfig(k=3, l=3), rng)
        assert oracle_correct(t) and oracle_irredundant(t)
        assert graph_of_incidence(evaluate(t)) == g
        assert {x for x in labels_of(t) if x > 0} <= {1, 2, 3}
        assert {x for x in labels_of(t) if x < 0} <= {-1, -2, -3}


def test_graph_is_preserved_up_to_numbering():
    rng = random.Random(2)
    g = Digraph(4, ((1, 2), (2, 3), (3, 4), (4, 1), (1, 1), (2, 3)))
    for _ in range(50):
        t, g2 = incidence_term_for(g, rng)
        assert graph_of_incidence(evaluate(t)) == g2
        assert sorted(g.edges) != [] and g2.n == g.n and g2.m == g.m


def test_tight_budget_fails_cleanly():
    g = Digraph(8, tuple((i, j) for i in range(1, 9) for j in range(1, 9) if i != j))
    with pytest.raises(GenerationError):
        incidence_term_for(g, random.Random(0), k=1, l=1, tries=5)


def test_random_terms_include_redundant_and_incorrect():
    rng = random.Random(3)
    ts = [gen_random_term(GenConfig(), rng=rng) for _ in range(1000)]
    assert any(not oracle_irredundant(t) for t in ts)
    assert any(not oracle_correct(t) for t in ts)


def test_hamiltonian_generator():
    rng = random.Random(4)
    for n in range(1, 8):
        assert has_hamiltonian_cycle(random_hamiltonian_digraph(rng, n, chords=2))


def test_config_validation():
    with pytest.raises(ValueError):
        GenConfig(n_range=(3, 2))
    with pytest.raises(ValueError):
        GenConfig(k=0)


class TestAnnotations:
    def leaves(self, t):
        return [p for p, _ in iter_leaves(t)]

    def test_seedless_selects_everything(self):
        t, _ = gen_random_incidence_term(GenConfig(seed=5))
        a = gen_annotations(t, (2, 1))
        vs = {p for p, leaf in iter_leaves(t) if leaf.symbol[1] > 0}
        es = {p for p, leaf in iter_leaves(t) if leaf.symbol[1] < 0}
        assert list(a.vertex_sets) == [vs, vs] and list(a.edge_sets) == [es]

    @pytest.mark.parametrize("mode", ["uniform", "sparse", "mixed"])
    def test_deterministic_and_sorted(self, mode):
        t, _ = gen_random_incidence_term(GenConfig(seed=6, n_range=(3, 6)))
        a = gen_annotations(t, (2, 1), seed=9, mode=mode)
        assert a == gen_annotations(t, (2, 1), seed=9, mode=mode)
        for s in a.vertex_sets:
            assert all(subterm_sign(t, p) > 0 for p in s)

    def test_sparse_sizes(self):
        t, _ = gen_random_incidence_term(GenConfig(seed=7, n_range=(5, 6)))
        for seed in range(50):
            a = gen_annotations(t, (2, 0), seed=seed, mode="sparse")
            assert all(len(s) <= 2 for s in a.vertex_sets)

    def test_unknown_mode(self):
        t, _ = gen_random_incidence_term(GenConfig(seed=8, n_range=(2, 3)))
        with pytest.raises(ValueError):
            gen_annotations(t, (1, 0), seed=1, mode="dense")


def subterm_sign(t, pos):
    return dict(iter_leaves(t))[pos].symbol[1]
