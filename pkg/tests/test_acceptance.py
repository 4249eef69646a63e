"""Acceptance criteria, one check per criterion.

Each ``criterion_*`` function returns ``(ok, detail)``. The pytest wrappers
log one PASS/FAIL line per criterion (shown in the terminal summary) and
then assert. Running this file directly prints the same lines.
"""

import random
import sys
import time
from collections import defaultdict

import pytest

from flyterm.difftest import SMALL_WORLD_IDS, diff_run, exhaustive_small_world, make_instance
from flyterm.engine import accepts, run_deterministic, run_star
from flyterm.generators import GenConfig, gen_random_incidence_term, gen_random_term
from flyterm.oracles import oracle_irredundant
from flyterm.properties import REGISTRY, declared_state_count, make_automaton, make_ct, make_dirham, make_irredundancy_checker
from flyterm.terms import evaluate, iter_nodes, labels_of, make_irredundant, relabel_term, subterm_at
from flyterm.treedec import (
    cycle_digraph,
    fan_decomposition,
    gen_partial_ktree,
    path_digraph,
    reconstruction_matches,
    td_to_term,
)

# published seeds
DIFF_SEEDS = {aid: 1000 + i for i, aid in enumerate(sorted(REGISTRY))}
COMPOSED_SEED = 4242
INVARIANCE_SEED = 5151
OFFSET_SEED = 6161
PIPELINE_SEED = 7171

CLOSED_FORMS = {
    "ct": lambda k, l: 3**k * 5**l + 1,
    "edg": lambda k, l: (k + 1) ** 2 * 5**l + 2,
    "inc-xu": lambda k, l: (k + 1) * (l + 1) + 2,
    "inc-uy": lambda k, l: (k + 1) * (l + 1) + 2,
    "link-ee": lambda k, l: 4**k * 5**l + 1,
}


def criterion_1():
    start = time.perf_counter()
    bad = []
    for aid, formula in CLOSED_FORMS.items():
        for k in (1, 2, 3):
            for l in (1, 2, 3):
                got, want = declared_state_count(aid, k, l), formula(k, l)
                if got != want:
                    bad.append(f"{aid}({k},{l})={got}!={want}")
    secs = time.perf_counter() - start
    ok = not bad and secs < 60
    return ok, f"{len(CLOSED_FORMS) * 9} counts, {len(bad)} wrong {bad[:3]}, {secs:.1f}s (limit 60s)"


def criterion_2():
    start = time.perf_counter()
    checks, bad = exhaustive_small_world(SMALL_WORLD_IDS, 3, 3)
    secs = time.perf_counter() - start
    ok = not bad and secs < 600
    return ok, f"{checks} checks over {len(SMALL_WORLD_IDS)} automata, {len(bad)} mismatches, {secs:.1f}s (limit 600s)"


def criterion_3():
    parts, bad = [], []
    for aid in sorted(REGISTRY):
        if aid == "dirham":
            cfg, trials = GenConfig(seed=DIFF_SEEDS[aid], n_range=(0, 7)), 300
        else:
            cfg, trials = GenConfig(seed=DIFF_SEEDS[aid]), 1000
        report = diff_run(aid, cfg, trials)
        done = report.trials - report.skipped
        parts.append(f"{aid}:{done}")
        if not report.passed or done < trials:
            bad.append(f"{aid} mismatches={len(report.mismatches)} skipped={report.skipped}")
    return not bad, f"trials {' '.join(parts)}; failures {bad}"


def criterion_4():
    report = diff_run("edg", GenConfig(seed=COMPOSED_SEED), 500, against="composed-edg")
    direct, composed = make_automaton("edg"), make_automaton("composed-edg")
    rng = random.Random(COMPOSED_SEED)
    larger, worst = 0, (0, 0)
    for _ in range(500):
        t = make_instance("edg", GenConfig(), rng)
        d = run_deterministic(direct, t)[1].max_state_bytes
        c = run_deterministic(composed, t)[1].max_state_bytes
        larger += c > d
        worst = max(worst, (c, d))
    ok = report.passed and report.skipped == 0 and larger > 0
    return ok, (
        f"{report.trials} trials, {len(report.mismatches)} mismatches; composed state larger on "
        f"{larger}/500 instances, max {worst[0]} vs {worst[1]} bytes"
    )


def _instances(aid, count, rng):
    for _ in range(count):
        yield make_instance(aid, GenConfig(), rng)


def _random_bijection(labels, rng):
    pos = sorted(x for x in labels if x > 0)
    neg = sorted(x for x in labels if x < 0)
    new_pos = rng.sample(range(1, 40), len(pos))
    new_neg = rng.sample(range(-40, 0), len(neg))
    return dict(zip(pos, new_pos)) | dict(zip(neg, new_neg))


def criterion_5():
    rng = random.Random(INVARIANCE_SEED)
    local_bad, equi_bad, runs = [], [], 0
    for aid in sorted(REGISTRY):
        a = make_automaton(aid)
        for t in _instances(aid, 500, rng):
            runs += 1
            present = labels_of(t)
            table, _ = run_star(a, t)
            for states in table.values():
                for q in states:
                    if not a.state_labels(q) <= present:
                        local_bad.append(aid)
            mapping = _random_bijection(present, rng)
            u = relabel_term(t, mapping)
            table_u, _ = run_star(a, u)
            if accepts(a, t) != accepts(a, u):
                equi_bad.append(aid)
                continue
            for pos, states in table.items():
                if sorted(len(a.encode(q)) for q in states) != sorted(len(a.encode(q)) for q in table_u[pos]):
                    equi_bad.append(aid)
                    break
    ok = not local_bad and not equi_bad
    return ok, (
        f"{runs} runs ({len(REGISTRY)} automata x 500 terms); locality violations {len(local_bad)}, "
        f"equivariance violations {len(equi_bad)} {sorted(set(equi_bad))[:3]}"
    )


def _irredundant_terms(rng, count):
    out = []
    while len(out) < count:
        if len(out) % 2:
            t, _ = gen_random_incidence_term(GenConfig(), rng)
        else:
            t = make_irredundant(gen_random_term(GenConfig(), rng=rng))
        out.append(t)
    return out


def criterion_6():
    rng = random.Random(OFFSET_SEED)
    violations, groups = 0, 0
    terms = _irredundant_terms(rng, 500)
    if not all(oracle_irredundant(t) for t in terms):
        return False, "generator produced a redundant term"
    for t in terms:
        whole = evaluate(t).degrees()
        for pos, _ in iter_nodes(t, positions=True):
            sub = evaluate(subterm_at(t, pos), prefix=pos)
            part = sub.degrees()
            offsets = defaultdict(set)
            for v, lab in sub.label.items():
                (i, o), (pi, po) = whole[v], part[v]
                offsets[lab].add((i - pi, o - po))
            for offs in offsets.values():
                groups += 1
                if len(offs) != 1 or min(min(p) for p in offs) < 0:
                    violations += 1
    return violations == 0, f"500 irredundant terms, {groups} (subterm, label) classes, {violations} violations"


def criterion_7():
    rng = random.Random(PIPELINE_SEED)
    ct, irr = make_ct(), make_irredundancy_checker()
    bad, done = [], 0
    for k in (1, 2, 3):
        for _ in range(50):
            n = rng.randint(1, 20)
            g, td = gen_partial_ktree(k, n, density=rng.random(), seed=rng.randrange(2**31),
                                      loops=0.1, antiparallel=0.1)
            c = td_to_term(g, td)
            b = c.budget(k)
            checks = {
                "ct": accepts(ct, c.term),
                "irr": accepts(irr, c.term),
                "reconstruct": reconstruction_matches(g, c),
                "C<=2": b["C_used"] <= 2,
                "D<=2k+3": b["D_used"] <= 2 * k + 3,
            }
            done += 1
            if not all(checks.values()):
                bad.append((k, n, [name for name, v in checks.items() if not v]))
    return not bad, f"{done} partial k-trees (k=1,2,3), {len(bad)} violations {bad[:3]}"


def _timed(a, t):
    a.clear_cache()
    start = time.perf_counter()
    verdict = accepts(a, t)
    return verdict, time.perf_counter() - start


def criterion_8():
    start = time.perf_counter()
    sizes = (1_000, 10_000, 100_000)
    a = make_dirham()
    rows, bad = [], []
    for n in sizes:
        td = fan_decomposition(n)
        cycle = td_to_term(cycle_digraph(n), td, validate=False).term
        path = td_to_term(path_digraph(n), td, validate=False).term
        yes, t_cycle = _timed(a, cycle)
        no, t_path = _timed(a, path)
        if not yes or no:
            bad.append(f"n={n}: cycle {yes}, path {no}")
        rows.append((n, t_cycle + t_path))
    ratios = []
    for (n0, s0), (n1, s1) in zip(rows, rows[1:]):
        r = s1 / s0
        ratios.append(r)
        if r > 2 * (n1 / n0):
            bad.append(f"time ratio {r:.1f} above {2 * n1 / n0:.0f} between n={n0} and n={n1}")
    total = time.perf_counter() - start
    if total >= 300:
        bad.append(f"total {total:.0f}s")
    times = ", ".join(f"n={n}: {s:.2f}s" for n, s in rows)
    return not bad, f"{times}; ratios {', '.join(f'{r:.1f}' for r in ratios)} (limit 20); total {total:.0f}s; {bad}"


CRITERIA = [
    (1, "state-space counts", criterion_1),
    (2, "exhaustive small-world equivalence", criterion_2),
    (3, "randomized equivalence", criterion_3),
    (4, "composed vs direct edge automaton", criterion_4),
    (5, "locality and equivariance", criterion_5),
    (6, "degree offsets in irredundant terms", criterion_6),
    (7, "tree-decomposition pipeline", criterion_7),
    (8, "Hamiltonian cycle at scale", criterion_8),
]


def line(number, title, ok, detail):
    return f"{'PASS' if ok else 'FAIL'} criterion {number} ({title}): {detail}"


@pytest.mark.parametrize("number,title,check", CRITERIA, ids=[f"criterion_{c[0]}" for c in CRITERIA])
def test_criterion(number, title, check, acceptance_log):
    ok, detail = check()
    text = line(number, title, ok, detail)
    acceptance_log(text)
    print(text)
    assert ok, text


if __name__ == "__main__":
    failed = 0
    for number, title, check in CRITERIA:
        ok, detail = check()
        failed += not ok
        print(line(number, title, ok, detail), flush=True)
    sys.exit(1 if failed else 0)
