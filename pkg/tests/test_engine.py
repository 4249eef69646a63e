import itertools
import random

import pytest

from conftest import X_POS, Y_POS
from flyterm.codec import decode_state, encode_state, state_size
from flyterm.difftest import make_instance
from flyterm.engine import (
    ERROR,
    OK,
    SUCCESS,
    AutomatonError,
    DeterministicAutomaton,
    SignatureError,
    accepts,
    cache_entries,
    complement,
    determinize,
    drop_last_bit,
    exists_project,
    identity_map,
    image,
    inverse_image,
    product,
    relativize,
    restrict_signature,
    run_deterministic,
    run_star,
    select_bits,
)
from flyterm.generators import GenConfig, gen_random_incidence_term, gen_random_term, random_annotated
from flyterm.graphs import Digraph, naive_incidence_term
from flyterm.oracles import oracle_correct, oracle_edge, oracle_irredundant
from flyterm.properties import (
    make_automaton,
    make_ct,
    make_dirham,
    make_edg,
    make_inc_product,
    make_irredundancy_checker,
    make_link,
)
from flyterm.properties.registry import declared_state_count
from flyterm.terms import (
    AnnotatedSets,
    Empty,
    Leaf,
    Relab,
    annotate,
    annotate_leaves,
    annotations_of,
    fold,
    iter_nodes,
    make_irredundant,
    node_from_symbol,
    parse_term,
)

EMPTY6 = (frozenset(),) * 6


class Never(DeterministicAutomaton):
    def __init__(self):
        super().__init__("never")

    def step(self, symbol, *states):
        return "q"

    def accepting(self, q):
        return False


def incidence_terms(count, seed, widths=(0, 0)):
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        t, _ = gen_random_incidence_term(GenConfig(), rng)
        out.append(random_annotated(t, widths, rng))
    return out


def map_term(h, t):
    return fold(t, lambda node, args: node_from_symbol(h(node.symbol), args))


def small_terms(max_nodes, nullaries, unaries, binaries=(("oplus",),)):
    """Every term with at most ``max_nodes`` nodes over the given symbols."""
    by_size = {1: [node_from_symbol(s) for s in nullaries]}
    for n in range(2, max_nodes + 1):
        out = [node_from_symbol(u, [c]) for u in unaries for c in by_size[n - 1]]
        for left in range(1, n - 1):
            right = n - 1 - left
            for b in binaries:
                out += [node_from_symbol(b, [x, y]) for x in by_size[left] for y in by_size[right]]
        by_size[n] = out
    return [t for n in range(1, max_nodes + 1) for t in by_size[n]]


class TestRuns:
    def test_ct_on_empty(self):
        q, stats = run_deterministic(make_ct(), Empty())
        assert q == EMPTY6 and stats.accepted

    def test_ct_on_edge_leaf(self):
        q, stats = run_deterministic(make_ct(), Leaf(-1))
        assert q[2] == frozenset({-1}) and not stats.accepted

    def test_ndeg_is_one(self, t_edge):
        assert run_deterministic(make_ct(), t_edge)[1].ndeg == 1

    def test_stats_json_keys(self, t_edge):
        stats = run_deterministic(make_ct(), t_edge)[1]
        assert set(stats.to_json()) == {"nodes", "distinct_states", "max_state_bytes", "ndeg", "millis", "accepted"}
        assert stats.ndeg <= stats.distinct_states

    def test_nondeterministic_rejected(self, t_edge):
        with pytest.raises(AutomatonError):
            run_deterministic(make_dirham(), t_edge)

    def test_signature_mismatch(self, t_edge):
        with pytest.raises(SignatureError):
            run_deterministic(make_edg(), t_edge)

    def test_star_singletons_for_deterministic(self, t_edge):
        table, stats = run_star(make_ct(), t_edge)
        assert all(len(s) == 1 for s in table.values()) and stats.ndeg == 1

    def test_star_dirham_edge_leaf(self):
        table, _ = run_star(make_dirham(), Leaf(-1))
        e = frozenset()
        assert table[b""] == {(frozenset({-1}), e, e), (e, e, e)}

    def test_deep_term(self):
        t = Leaf(1)
        for i in range(100_000):
            t = Relab(1, 2, t) if i % 2 == 0 else Relab(2, 1, t)
        q, stats = run_deterministic(make_ct(), t)
        assert stats.accepted and stats.nodes == 100_001

    def test_short_circuit_on_sink(self):
        t = parse_term("(oplus (add 1 -1 (oplus (oplus (leaf 1) (leaf 1)) (leaf -1))) (oplus (leaf 2) (leaf 3)))")
        q, stats = run_deterministic(make_ct(), t)
        assert q == ERROR and stats.nodes < 9


class TestSinks:
    @pytest.mark.parametrize("aid,sink", [("ct", ERROR), ("irr", ERROR), ("link-ee", SUCCESS), ("edg", ERROR)])
    def test_sink_absorbs(self, aid, sink):
        a = make_automaton(aid)
        rng = random.Random(3)
        seen = 0
        for _ in range(300):
            t = make_instance(aid, GenConfig(), rng)
            states = []

            def step(node, args):
                q = a.next_state(node.symbol, *args)
                states.append(q)
                return q

            root = fold(t, step)
            if sink in states:
                seen += 1
                assert root == sink
        assert seen > 0


class TestDeterminize:
    def test_deterministic_input(self, t_edge):
        d = determinize(make_ct())
        assert run_deterministic(d, t_edge)[0] == frozenset({run_deterministic(make_ct(), t_edge)[0]})

    def test_star_equals_det(self):
        for aid in ["ct", "edg", "link-ae", "link-ea", "ham-core", "dirham", "subgraph"]:
            a = make_automaton(aid)
            rng = random.Random(1)
            for _ in range(100):
                t = make_instance(aid, GenConfig(), rng)
                assert run_star(a, t, positions=False)[1].accepted == run_deterministic(determinize(a), t)[1].accepted

    def test_three_cycle(self):
        t = naive_incidence_term(Digraph(3, ((1, 2), (2, 3), (3, 1))))
        assert run_deterministic(determinize(make_dirham()), t)[1].accepted

    def test_state_size_bound(self):
        a = make_dirham()
        t = naive_incidence_term(Digraph(4, ((1, 2), (2, 3), (3, 4), (4, 1), (1, 3))))
        star = run_star(a, t)[1]
        det = run_deterministic(determinize(a), t)[1]
        # set tag plus a one-byte count in front of the members
        assert det.max_state_bytes <= star.ndeg * star.max_state_bytes + 2


class TestProduct:
    def test_idempotent(self):
        a = make_ct()
        aa = product(a, a, "and")
        for t in incidence_terms(100, 2):
            assert accepts(aa, t) == accepts(a, t)

    def test_never_under_and(self):
        p = product(make_ct(), Never(), "and")
        assert not any(accepts(p, t) for t in incidence_terms(500, 4))

    def test_or_mode(self):
        p = product(make_ct(), Never(), "or")
        for t in incidence_terms(50, 4):
            assert accepts(p, t) == accepts(make_ct(), t)

    @pytest.mark.parametrize("k,l", [(1, 1), (2, 1), (1, 2)])
    def test_inc_product_state_count(self, k, l):
        assert declared_state_count("inc-product", k, l) == ((k + 1) * (l + 1) + 2) ** 2

    def test_determinism_flag(self):
        assert product(make_ct(), make_irredundancy_checker()).deterministic
        assert not product(make_ct(), make_dirham()).deterministic


class TestComplement:
    def test_double(self):
        a = make_ct()
        cc = complement(complement(a))
        for t in incidence_terms(500, 6):
            assert accepts(cc, t) == accepts(a, t)

    def test_complement_of_ct(self):
        c = complement(make_ct())
        rng = random.Random(8)
        for _ in range(300):
            t = make_irredundant(gen_random_term(GenConfig(), rng=rng))
            assert accepts(c, t) == (not oracle_correct(t))

    def test_nondeterministic_rejected(self):
        with pytest.raises(AutomatonError):
            complement(make_dirham())


class TestImages:
    def test_identity_image(self):
        a = make_ct()
        i = image(a, identity_map())
        assert i.deterministic
        for t in incidence_terms(100, 9):
            assert accepts(i, t) == accepts(a, t)

    def test_identity_inverse_image(self):
        a = make_ct()
        i = inverse_image(a, identity_map())
        for t in incidence_terms(100, 9):
            assert accepts(i, t) == accepts(a, t)

    def test_dropping_bit_is_nondeterministic(self):
        a = image(make_inc_product(), drop_last_bit("edge", (2, 1)))
        assert not a.deterministic

    def test_variable_permutation(self):
        # reads (X1, X2, X3) and checks an edge from X3 to X1
        a = inverse_image(make_edg(), select_bits([2, 0], None, (3, 0)))
        for t in incidence_terms(300, 12, (3, 0)):
            sets = annotations_of(t)
            xs = list(sets.vertex_sets) + [frozenset()] * 3
            assert accepts(a, t) == oracle_edge(t, xs[2], xs[0])

    def test_inverse_image_language_equation(self):
        # terms up to five nodes over labels {1, -1}, one vertex bit
        h = select_bits([0, 0], None, (1, 0))
        base = make_link("ee")
        a = inverse_image(base, h)
        nullaries = [("empty",), ("leaf", 1, "0"), ("leaf", 1, "1"), ("leaf", -1, "")]
        unaries = [("add", 1, -1), ("add", -1, 1)]
        count = 0
        for t in small_terms(5, nullaries, unaries):
            assert accepts(a, t) == accepts(base, map_term(h, t))
            count += 1
        assert count > 100

    def test_image_language_equation(self):
        h = drop_last_bit("vertex", (2, 0))
        base = make_link("ee")
        a = image(base, h)
        nullaries = [("empty",), ("leaf", 1, "0"), ("leaf", 1, "1"), ("leaf", -1, "")]
        unaries = [("add", 1, -1), ("add", -1, 1)]
        for t in small_terms(5, nullaries, unaries):
            bits = [n.symbol[2] for n in iter_nodes(t) if n.symbol[0] == "leaf"]
            n_vertex = sum(1 for n in iter_nodes(t) if n.symbol[0] == "leaf" and n.symbol[1] > 0)
            expected = False
            for extra in itertools.product("01", repeat=n_vertex):
                more = iter(extra)
                pre = annotate_leaves(t, lambda i, lab: bits[i] + next(more) if lab > 0 else "")
                if accepts(base, pre):
                    expected = True
                    break
            assert accepts(a, t) == expected


class TestRestriction:
    def test_ct_small(self):
        assert declared_state_count("ct", 1, 1) == 16

    def test_same_root_state(self, t_edge):
        r = restrict_signature(make_ct(), {1, 2, -1})
        assert run_deterministic(r, t_edge)[0] == run_deterministic(make_ct(), t_edge)[0]

    def test_foreign_label(self, t_edge):
        r = restrict_signature(make_ct(), {1, -1})
        with pytest.raises(SignatureError):
            run_deterministic(r, t_edge)

    def test_visited_states_are_declared(self):
        labels = {1, 2, -1, -2}
        declared = set(restrict_signature(make_ct(), labels).enumerate_states())
        rng = random.Random(2)
        cfg = GenConfig(k=2, l=2)
        a = make_ct()
        for _ in range(300):
            t = gen_random_term(cfg, rng=rng)
            for q in run_star(a, t)[0].values():
                assert q <= declared


class TestProjection:
    def test_unused_variable(self):
        padded = inverse_image(make_edg(), select_bits([0, 1], None, (3, 0)))
        projected = exists_project(padded, "vertex")
        for t in incidence_terms(300, 14, (2, 0)):
            assert accepts(projected, t) == accepts(make_edg(), t)

    def test_composed_edge(self):
        composed = exists_project(make_inc_product(), "edge")
        for t in incidence_terms(200, 15, (2, 0)):
            assert accepts(composed, t) == accepts(make_edg(), t)

    def test_zero_width(self):
        with pytest.raises(SignatureError):
            exists_project(make_edg(), "edge")


class TestRelativize:
    def test_all_selected(self, t_edge):
        a = relativize(make_ct())
        t = annotate(t_edge, AnnotatedSets.of([[X_POS, Y_POS]], [[p for p in [b"\x01\x01\x02"]]]))
        assert accepts(a, t) == accepts(make_ct(), t_edge)

    def test_none_selected(self, t_edge):
        a = relativize(make_ct())
        t = annotate(t_edge, AnnotatedSets.of([[]], [[]]))
        assert accepts(a, t) == accepts(make_ct(), Empty())

    def test_matches_subgraph(self):
        sub = make_automaton("subgraph")
        rel = relativize(make_ct())
        for t in incidence_terms(200, 16, (1, 1)):
            assert accepts(sub, t) == accepts(rel, t)


class TestCodec:
    def test_round_trip(self):
        for q in [ERROR, OK, (frozenset({1, -2}), frozenset()), frozenset({(1, frozenset({-1})), (2, frozenset())}), True]:
            assert decode_state(encode_state(q)) == q

    def test_set_order_is_canonical(self):
        a = frozenset([3, 1, 2])
        b = frozenset([2, 3, 1])
        assert encode_state(a) == encode_state(b)

    def test_size_is_label_invariant(self):
        assert state_size((frozenset({1, -1}),)) == state_size((frozenset({900, -77}),))


def test_cache_budget_from_environment(monkeypatch):
    monkeypatch.setenv("FLYTERM_CACHE_BYTES", "5120")
    assert cache_entries() == 10
    monkeypatch.setenv("FLYTERM_CACHE_BYTES", "nonsense")
    assert cache_entries() > 0


def test_guards_hold_on_generator_output():
    for t in incidence_terms(200, 21):
        assert accepts(make_ct(), t) and oracle_irredundant(t)


def test_verdicts_do_not_depend_on_cache(monkeypatch):
    cached = [make_automaton(aid) for aid in ("ct", "edg", "dirham")]
    monkeypatch.setenv("FLYTERM_CACHE_BYTES", "0")
    uncached = [make_automaton(aid) for aid in ("ct", "edg", "dirham")]
    rng = random.Random(17)
    for a, b in zip(cached, uncached):
        for _ in range(100):
            t = make_instance(a.name, GenConfig(n_range=(0, 5)), rng)
            assert accepts(a, t) == accepts(b, t)
