"""Differential testing of automata against oracles or against each other."""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass, field
from typing import Callable, Iterator

from .engine import FlyAutomaton, accepts
from .generators import (
    GenConfig,
    GenerationError,
    gen_random_incidence_term,
    gen_random_term,
    incidence_term_for,
    random_annotated,
    random_digraph,
    random_hamiltonian_digraph,
)
from .graphs import Digraph, naive_incidence_term, small_digraphs
from .oracles import OracleCapExceeded, oracle_correct, oracle_for, oracle_irredundant
from .properties.registry import REGISTRY, make_automaton
from .terms import (
    Empty,
    Term,
    annotate_leaves,
    iter_leaves,
    iter_nodes,
    make_irredundant,
    node_from_symbol,
    restrict_to,
    serialize_term,
    subterm_at,
)

__all__ = [
    "Mismatch",
    "DiffReport",
    "diff_run",
    "exhaustive_small_world",
    "shrink",
    "replace_at",
    "widths_for",
    "precondition_for",
    "make_instance",
]

SMALL_WORLD_IDS = (
    "ct",
    "inc-xu",
    "inc-uy",
    "edg",
    "link-ee",
    "link-ae",
    "link-aa",
    "link-ea",
    "subgraph",
    "ham-core",
    "dirham",
)


@dataclass
class Mismatch:
    term: str
    automaton_verdict: bool
    reference_verdict: bool
    shrunk: str | None = None

    def to_json(self) -> dict:
        return {
            "term": self.term,
            "automaton": self.automaton_verdict,
            "reference": self.reference_verdict,
            "shrunk": self.shrunk,
        }


@dataclass
class DiffReport:
    automaton: str
    reference: str
    trials: int
    seed: int
    mismatches: list[Mismatch] = field(default_factory=list)
    accepted: int = 0
    skipped: int = 0

    @property
    def passed(self) -> bool:
        return not self.mismatches

    def summary(self) -> dict:
        return {
            "automaton": self.automaton,
            "reference": self.reference,
            "trials": self.trials,
            "seed": self.seed,
            "accepted": self.accepted,
            "skipped": self.skipped,
            "mismatches": len(self.mismatches),
            "passed": self.passed,
        }

    def json_lines(self) -> str:
        rows = [json.dumps(m.to_json(), sort_keys=True) for m in sorted(self.mismatches, key=lambda m: m.term)]
        rows.append(json.dumps(self.summary(), sort_keys=True))
        return "\n".join(rows) + "\n"


def widths_for(automaton_id: str) -> tuple[int, int]:
    info = REGISTRY[automaton_id]
    return info.widths or (0, 0)


def precondition_for(automaton_id: str) -> Callable[[Term], bool]:
    """Inputs on which the automaton's verdict is claimed to be meaningful."""
    if automaton_id == "irr":
        return lambda t: True
    if automaton_id == "ct":
        return oracle_irredundant
    return lambda t: oracle_irredundant(t) and oracle_correct(t)


def _random_restriction(t: Term, rng: random.Random) -> Term:
    vs = [p for p, leaf in iter_leaves(t) if leaf.symbol[1] > 0]
    es = [p for p, leaf in iter_leaves(t) if leaf.symbol[1] < 0]
    keep_v = [p for p in vs if rng.random() < 0.8]
    keep_e = [p for p in es if rng.random() < 0.8]
    return restrict_to(t, keep_v, keep_e)


def make_instance(automaton_id: str, cfg: GenConfig, rng: random.Random) -> Term:
    """Random input suited to the automaton, already annotated."""
    if automaton_id == "irr":
        t = gen_random_term(cfg, rng=rng)
        return make_irredundant(t) if rng.random() < 0.3 else t
    if automaton_id == "ct":
        if rng.random() < 0.4:
            return make_irredundant(gen_random_term(cfg, rng=rng))
        t, _ = gen_random_incidence_term(cfg, rng)
        return _random_restriction(t, rng) if rng.random() < 0.6 else t
    if automaton_id in ("ham-core", "dirham"):
        n = rng.randint(*cfg.n_range)
        r = rng.random()
        if r < 0.35:
            g = random_digraph(rng, cfg)
        elif r < 0.55:
            g = random_hamiltonian_digraph(rng, n, 0, cfg.loops)
        else:
            g = random_hamiltonian_digraph(rng, n, rng.randint(0, max(0, cfg.m_range[1] - n)), cfg.loops)
            if rng.random() < 0.5 and g.m:
                # drop one edge: often destroys the cycle
                edges = list(g.edges)
                edges.pop(rng.randrange(len(edges)))
                g = Digraph(g.n, tuple(edges))
        t, _ = incidence_term_for(g, rng, cfg.k, cfg.l, cfg.noise)
        return t
    t, _ = gen_random_incidence_term(cfg, rng)
    return random_annotated(t, widths_for(automaton_id), rng)


def _verdict(a: FlyAutomaton) -> Callable[[Term], bool]:
    return lambda t: accepts(a, t)


def replace_at(t: Term, pos: bytes, new: Term) -> Term:
    path = [t]
    for i in pos:
        path.append(path[-1].children[i - 1])
    node = new
    for depth in range(len(pos) - 1, -1, -1):
        parent = path[depth]
        ch = list(parent.children)
        ch[pos[depth] - 1] = node
        node = node_from_symbol(parent.symbol, ch)
    return node


def _shrink_candidates(t: Term) -> Iterator[Term]:
    nodes = list(iter_nodes(t, positions=True))
    # remove union branches first, then unary wrappers, then leaves
    for pos, node in nodes:
        if node.symbol[0] == "oplus":
            yield replace_at(t, pos, node.children[0])
            yield replace_at(t, pos, node.children[1])
    for pos, node in nodes:
        if node.symbol[0] in ("relab", "add"):
            yield replace_at(t, pos, node.children[0])
    for pos, node in nodes:
        if node.symbol[0] == "leaf":
            yield replace_at(t, pos, Empty())


def shrink(t: Term, still_fails: Callable[[Term], bool], max_steps: int = 10000) -> Term:
    """Greedy removal of branches, wrappers and leaves while ``still_fails`` holds."""
    steps = 0
    improved = True
    while improved and steps < max_steps:
        improved = False
        for cand in _shrink_candidates(t):
            steps += 1
            if steps >= max_steps:
                break
            try:
                ok = still_fails(cand)
            except Exception:
                ok = False
            if ok:
                t = cand
                improved = True
                break
    return t


def diff_run(
    automaton_id: str,
    cfg: GenConfig | None = None,
    trials: int = 1000,
    against: str | None = None,
    shrink_mismatches: bool = True,
) -> DiffReport:
    """Compare an automaton with its oracle (or with another automaton) on random inputs."""
    cfg = cfg or GenConfig()
    a = make_automaton(automaton_id)
    run_a = _verdict(a)
    if against is None:
        reference = oracle_for(automaton_id)
        ref_name = f"oracle:{automaton_id}"
    else:
        reference = _verdict(make_automaton(against))
        ref_name = against
    pre = precondition_for(automaton_id)
    rng = random.Random(cfg.seed)
    report = DiffReport(automaton_id, ref_name, trials, cfg.seed)
    for _ in range(trials):
        try:
            t = make_instance(automaton_id, cfg, rng)
        except GenerationError:
            report.skipped += 1
            continue
        try:
            expected = reference(t)
        except OracleCapExceeded:
            report.skipped += 1
            continue
        got = run_a(t)
        report.accepted += got
        if got != expected:
            mm = Mismatch(serialize_term(t), got, expected)
            if shrink_mismatches:

                def still_fails(c: Term) -> bool:
                    return pre(c) and run_a(c) != reference(c)

                mm.shrunk = serialize_term(shrink(t, still_fails))
            report.mismatches.append(mm)
    return report


def _annotations(t: Term, widths: tuple[int, int]) -> Iterator[Term]:
    """Every annotation of ``t`` with the given widths."""
    p, m = widths
    sizes = [p if leaf.symbol[1] > 0 else m for _, leaf in iter_leaves(t)]
    total = sum(sizes)
    for bits in itertools.product("01", repeat=total):
        chunks = []
        i = 0
        for s in sizes:
            chunks.append("".join(bits[i : i + s]))
            i += s
        yield annotate_leaves(t, lambda idx, label: chunks[idx])


def exhaustive_small_world(
    automaton_ids=SMALL_WORLD_IDS, max_vertices: int = 3, max_edges: int = 3
) -> tuple[int, list[tuple[str, str, bool, bool]]]:
    """Check automata against oracles on every small digraph and annotation.

    Terms come from :func:`naive_incidence_term`. The correctness automaton
    is also run on every restriction of those terms to a subset of leaves,
    since the unrestricted terms are all correct. Returns the number of
    checks and the list of mismatches (id, term, automaton, oracle).
    """
    automata = {aid: make_automaton(aid) for aid in automaton_ids}
    oracles = {aid: oracle_for(aid) for aid in automaton_ids}
    checks = 0
    bad: list[tuple[str, str, bool, bool]] = []
    for g in small_digraphs(max_vertices, max_edges):
        t = naive_incidence_term(g)
        for aid in automaton_ids:
            a, oracle = automata[aid], oracles[aid]
            if aid == "ct":
                leaves = [p for p, _ in iter_leaves(t)]
                cands = []
                for keep in itertools.product((0, 1), repeat=len(leaves)):
                    chosen = [p for p, k in zip(leaves, keep) if k]
                    cands.append(restrict_to(t, [p for p in chosen if subterm_at(t, p).symbol[1] > 0],
                                             [p for p in chosen if subterm_at(t, p).symbol[1] < 0]))
            else:
                cands = _annotations(t, widths_for(aid))
            for c in cands:
                checks += 1
                got = accepts(a, c)
                want = oracle(c)
                if got != want:
                    bad.append((aid, serialize_term(c), got, want))
    return checks, bad
