"""The coarse union rule for the all-some link automaton against the disjoint one."""

import random

from flyterm.difftest import make_instance
from flyterm.engine import accepts
from flyterm.generators import GenConfig
from flyterm.oracles import oracle_for
from flyterm.properties import make_link
from flyterm.terms import parse_term

# x -> y1 already linked on the left, an isolated Y-vertex y2 on the right
WITNESS = "(oplus (add -1 2 (add 1 -1 (oplus (oplus (leaf 1 10) (leaf 2 01)) (leaf -1)))) (leaf 3 01))"


def test_witness():
    t = parse_term(WITNESS)
    assert oracle_for("link-ae")(t)
    assert accepts(make_link("ae"), t)
    assert not accepts(make_link("ae", legacy_union=True), t)


def test_legacy_rule_only_errs_by_rejecting():
    oracle = oracle_for("link-ae")
    fixed, legacy = make_link("ae"), make_link("ae", legacy_union=True)
    rng = random.Random(21)
    false_rejects = 0
    for _ in range(500):
        t = make_instance("link-ae", GenConfig(), rng)
        want = oracle(t)
        assert accepts(fixed, t) == want
        got = accepts(legacy, t)
        assert not (got and not want)
        false_rejects += want and not got
    assert false_rejects > 0
