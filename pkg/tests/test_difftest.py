import json
import random

from flyterm.difftest import (
    DiffReport,
    Mismatch,
    diff_run,
    make_instance,
    precondition_for,
    replace_at,
    shrink,
)
from flyterm.engine import accepts
from flyterm.generators import GenConfig
from flyterm.oracles import oracle_correct, oracle_irredundant
from flyterm.properties import REGISTRY, make_automaton
from flyterm.terms import Empty, Leaf, parse_position, parse_term, serialize_term, term_size


def test_replace_at(t_edge):
    out = replace_at(t_edge, parse_position("112"), Leaf(-3))
    assert serialize_term(out) == "(add -1 2 (add 1 -1 (oplus (oplus (leaf 1) (leaf 2)) (leaf -3))))"
    assert replace_at(t_edge, b"", Empty()) == Empty()


def test_shrink_to_minimal_redundancy():
    t = parse_term("(oplus (oplus (leaf 3) (add 1 -1 (add 1 -1 (oplus (leaf 1) (leaf -1))))) (relab 2 4 (leaf 2)))")
    small = shrink(t, lambda c: not oracle_irredundant(c))
    assert not oracle_irredundant(small)
    assert serialize_term(small) == "(add 1 -1 (add 1 -1 (oplus (leaf 1) (leaf -1))))"


def test_shrink_keeps_passing_input():
    t = parse_term("(leaf 1)")
    assert shrink(t, lambda c: False) is t


def test_instances_meet_preconditions():
    rng = random.Random(0)
    for aid in REGISTRY:
        pre = precondition_for(aid)
        for _ in range(40):
            assert pre(make_instance(aid, GenConfig(), rng))


def test_instances_are_annotated_to_width():
    rng = random.Random(1)
    t = make_instance("link-aa", GenConfig(n_range=(2, 4)), rng)
    assert accepts(make_automaton("link-aa"), t) in (True, False)


def test_correctness_instances_vary():
    rng = random.Random(2)
    ts = [make_instance("ct", GenConfig(), rng) for _ in range(200)]
    assert any(oracle_correct(t) for t in ts) and any(not oracle_correct(t) for t in ts)


def test_report_json_lines():
    r = DiffReport("edg", "oracle:edg", 3, 7)
    r.mismatches = [Mismatch("(leaf 2)", True, False, "(leaf 2)"), Mismatch("(leaf 1)", False, True)]
    rows = [json.loads(x) for x in r.json_lines().splitlines()]
    assert [x.get("term") for x in rows[:2]] == ["(leaf 1)", "(leaf 2)"]
    assert rows[-1]["mismatches"] == 2 and rows[-1]["passed"] is False


def test_run_is_reproducible():
    a = diff_run("edg", GenConfig(seed=4), trials=60)
    b = diff_run("edg", GenConfig(seed=4), trials=60)
    assert a.passed and a.summary() == b.summary()


def test_planted_fault_is_found_and_shrunk(monkeypatch):
    from flyterm import difftest

    real = difftest._verdict

    def wrong(a):
        run = real(a)
        # flip the verdict whenever the term has more than four nodes
        return lambda t: run(t) != (term_size(t) > 4)

    monkeypatch.setattr(difftest, "_verdict", wrong)
    report = diff_run("irr", GenConfig(seed=1), trials=50)
    assert not report.passed
    for m in report.mismatches:
        assert term_size(parse_term(m.shrunk)) == 5
