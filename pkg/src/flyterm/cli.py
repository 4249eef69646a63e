"""Command-line front end.

Every command prints JSON (or CSV for ``bench``) on standard output and a
one-line human summary on standard error. Exit codes: 0 accepted or no
mismatch, 1 rejected or mismatch found, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import csv
import json
import random
import sys
from collections import Counter
from pathlib import Path

from . import __version__
from .difftest import diff_run, exhaustive_small_world
from .engine import AutomatonError, SignatureError, run_deterministic, run_star
from .generators import GenConfig, GenerationError, gen_annotations, gen_random_incidence_term, gen_random_term
from .graphs import GraphFormatError, NotIncidence, format_graph, graph_of_incidence, parse_graph
from .properties.core import make_ct, make_irredundancy_checker
from .properties.registry import REGISTRY, make_automaton
from .terms import (
    AnnotatedSets,
    TermError,
    annotate,
    annotate_leaves,
    evaluate,
    make_irredundant,
    parse_position,
    parse_term,
    serialize_term,
    strip_annotations,
    term_size,
    widths_of,
)
from .treedec import (
    TDValidationError,
    cycle_digraph,
    fan_decomposition,
    format_td,
    gen_partial_ktree,
    parse_td,
    path_digraph,
    td_to_term,
)

EXIT_ACCEPT, EXIT_REJECT, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _emit(payload: dict, summary: str) -> None:
    print(json.dumps(payload, sort_keys=True))
    print(summary, file=sys.stderr)


def _read(path: str) -> str:
    try:
        return sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        try:
            Path(path).write_text(text)
        except OSError as exc:
            raise UsageError(f"cannot write {path}: {exc.strerror}") from None


def _run(a, t):
    if a.deterministic:
        return run_deterministic(a, t)[1]
    return run_star(a, t, positions=False)[1]


def _load_sets(path: str) -> AnnotatedSets:
    try:
        data = json.loads(_read(path))
        return AnnotatedSets.of(
            [[parse_position(p) for p in s] for s in data.get("vertex_sets", [])],
            [[parse_position(p) for p in s] for s in data.get("edge_sets", [])],
        )
    except (ValueError, AttributeError, TypeError) as exc:
        raise UsageError(f"bad sets file {path}: {exc}") from None


# ---------------------------------------------------------------- commands


def cmd_check(args) -> int:
    if args.automaton not in REGISTRY:
        raise UsageError(f"unknown automaton {args.automaton!r}; known: {', '.join(sorted(REGISTRY))}")
    info = REGISTRY[args.automaton]
    t = parse_term(_read(args.term))
    if args.sets and args.seed is not None:
        raise UsageError("--sets and --seed are exclusive")
    widths = info.widths
    if args.sets:
        t = annotate(t, _load_sets(args.sets))
    elif args.seed is not None and widths is not None:
        t = annotate(t, gen_annotations(t, widths, args.seed))
    if widths is not None:
        p, m = widths_of(t)
        if (p is not None and p != widths[0]) or (m is not None and m != widths[1]):
            raise UsageError(f"{args.automaton} reads widths {widths}, term carries ({p}, {m})")
    plain = strip_annotations(t)
    if args.make_irredundant:
        t = make_irredundant(t)
        plain = strip_annotations(t)

    guards: dict[str, bool] = {}
    if args.automaton != "irr" and not args.assume_irredundant:
        guards["irr"] = _run(make_irredundancy_checker(), plain).accepted
    if args.automaton not in ("irr", "ct") and not args.assume_correct:
        guards["ct"] = _run(make_ct(), plain).accepted
    guard_failed = next((g for g in ("irr", "ct") if guards.get(g) is False), None)

    stats = _run(make_automaton(args.automaton), t)
    verdict = stats.accepted and guard_failed is None
    payload = {
        "automaton": args.automaton,
        "verdict": verdict,
        "property_verdict": stats.accepted,
        "guards": guards,
        "guard_failed": guard_failed,
        "stats": stats.to_json(),
    }
    if args.stats:
        _write(args.stats, json.dumps(stats.to_json(), sort_keys=True) + "\n")
    note = f" (guard {guard_failed} rejected)" if guard_failed else ""
    _emit(payload, f"{args.automaton}: {'accepted' if verdict else 'rejected'}{note}, {stats.nodes} nodes, {stats.millis:.1f} ms")
    return EXIT_ACCEPT if verdict else EXIT_REJECT


def cmd_eval(args) -> int:
    t = parse_term(_read(args.term))
    s = evaluate(t)
    if args.emit == "graph":
        g = graph_of_incidence(s)
        _write(args.out, format_graph(g))
        print(f"digraph with {g.n} vertices and {g.m} edges", file=sys.stderr)
        return EXIT_ACCEPT
    per_label = Counter(s.label.values())
    census = {
        "vertices": sum(1 for lab in s.label.values() if lab > 0),
        "edge_vertices": sum(1 for lab in s.label.values() if lab < 0),
        "arcs": len(s.edges),
        "per_label": {str(k): v for k, v in sorted(per_label.items())},
        "term_nodes": term_size(t),
    }
    _emit(census, f"{census['vertices']} vertices, {census['edge_vertices']} edge-vertices, {census['arcs']} arcs")
    return EXIT_ACCEPT


def cmd_td2term(args) -> int:
    g = parse_graph(_read(args.graph))
    td = parse_td(_read(args.td), g)
    compiled = td_to_term(g, td, validate=False)
    summary = compiled.budget(td.width)
    summary.update({"width": td.width, "term_nodes": term_size(compiled.term)})
    text = serialize_term(compiled.term) + "\n"
    line = f"C_used={summary['C_used']} D_used={summary['D_used']} budget 2k+3={summary['D_budget']}"
    if args.out:
        _write(args.out, text)
        _emit(summary, line)
    else:
        sys.stdout.write(text)
        print(json.dumps(summary, sort_keys=True), file=sys.stderr)
    return EXIT_ACCEPT


def cmd_diff(args) -> int:
    if args.automaton not in REGISTRY:
        raise UsageError(f"unknown automaton {args.automaton!r}")
    if args.exhaustive_small:
        checks, bad = exhaustive_small_world([args.automaton], args.max_vertices, args.max_edges)
        for aid, term, got, want in sorted(bad, key=lambda b: b[1]):
            print(json.dumps({"automaton": aid, "term": term, "automaton_verdict": got, "oracle": want}, sort_keys=True))
        _emit({"automaton": args.automaton, "checks": checks, "mismatches": len(bad), "passed": not bad},
              f"{args.automaton}: {checks} exhaustive checks, {len(bad)} mismatches")
        return EXIT_ACCEPT if not bad else EXIT_REJECT
    if args.against is not None and args.against not in REGISTRY:
        raise UsageError(f"unknown automaton {args.against!r}")
    cfg = GenConfig(seed=args.seed, n_range=(0, args.max_n), m_range=(0, args.max_m), k=args.k, l=args.l)
    report = diff_run(args.automaton, cfg, args.trials, against=args.against)
    sys.stdout.write(report.json_lines())
    print(f"{args.automaton} vs {report.reference}: {report.trials} trials, {len(report.mismatches)} mismatches",
          file=sys.stderr)
    return EXIT_ACCEPT if report.passed else EXIT_REJECT


def _family(name: str, size: int, seed: int, width: int):
    if name == "cycle":
        return cycle_digraph(size), fan_decomposition(size)
    if name == "path":
        return path_digraph(size), fan_decomposition(size)
    return gen_partial_ktree(width, size, 0.6, seed)


def cmd_bench(args) -> int:
    try:
        sizes = [int(x) for x in args.sizes.split(",") if x.strip()]
    except ValueError:
        raise UsageError("--sizes takes a comma separated list of integers") from None
    if not sizes or any(s < 1 for s in sizes) or sizes != sorted(sizes):
        raise UsageError("--sizes must be a nonempty ascending list of positive integers")
    info = REGISTRY.get(args.automaton)
    if info is None:
        raise UsageError(f"unknown automaton {args.automaton!r}")
    a = make_automaton(args.automaton)
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(["size", "millis", "max_state_bytes", "ndeg"])
    for size in sizes:
        g, td = _family(args.family, size, args.seed, args.width)
        t = td_to_term(g, td, validate=False).term
        if info.widths and info.widths != (0, 0):
            rng = random.Random(args.seed)
            p, m = info.widths
            t = annotate_leaves(t, lambda i, lab: "".join(rng.choice("01") for _ in range(p if lab > 0 else m)))
        stats = _run(a, t)
        writer.writerow([size, f"{stats.millis:.3f}", stats.max_state_bytes, stats.ndeg])
        sys.stdout.flush()
    print(f"{args.automaton} on {args.family}: {len(sizes)} sizes", file=sys.stderr)
    return EXIT_ACCEPT


def cmd_gen(args) -> int:
    rng = random.Random(args.seed)
    cfg = GenConfig(seed=args.seed, n_range=(0, args.max_n), m_range=(0, args.max_m), k=args.k, l=args.l)
    if args.kind == "ktree":
        g, td = gen_partial_ktree(args.width, max(1, args.max_n), args.density, args.seed)
        _write(args.out, format_graph(g))
        if args.td_out:
            _write(args.td_out, format_td(td))
        print(f"partial {args.width}-tree with {g.n} vertices and {g.m} edges", file=sys.stderr)
        return EXIT_ACCEPT
    if args.kind == "term":
        t = gen_random_term(cfg, rng=rng)
    else:
        t, g = gen_random_incidence_term(cfg, rng)
        if args.graph_out:
            _write(args.graph_out, format_graph(g))
    if args.widths:
        p, _, m = args.widths.partition(",")
        t = annotate(t, gen_annotations(t, (int(p), int(m or 0)), args.seed))
    _write(args.out, serialize_term(t) + "\n")
    print(f"{args.kind} term with {term_size(t)} nodes", file=sys.stderr)
    return EXIT_ACCEPT


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="flyterm", description="Fly-automata over incidence-graph terms.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="run an automaton on a term, guarded by correctness and irredundancy")
    p.add_argument("--automaton", "-a", required=True)
    p.add_argument("--term", "-t", required=True, help="term file, '-' for stdin")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--sets", help="JSON file with vertex_sets and edge_sets given by leaf positions")
    src.add_argument("--seed", type=int, help="draw random annotation sets with this seed")
    p.add_argument("--assume-correct", action="store_true")
    p.add_argument("--assume-irredundant", action="store_true")
    p.add_argument("--make-irredundant", action="store_true", help="drop redundant additions first")
    p.add_argument("--stats", help="also write run statistics to this file")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("eval", help="evaluate a term")
    p.add_argument("term")
    p.add_argument("--emit", choices=["graph", "stats"], default="stats")
    p.add_argument("--out", "-o")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("td2term", help="compile a graph and a tree-decomposition into a term")
    p.add_argument("--graph", "-g", required=True)
    p.add_argument("--td", required=True)
    p.add_argument("--out", "-o")
    p.set_defaults(func=cmd_td2term)

    p = sub.add_parser("diff", help="differential test of an automaton against its oracle")
    p.add_argument("automaton")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-n", type=int, default=6)
    p.add_argument("--max-m", type=int, default=8)
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--l", type=int, default=5)
    p.add_argument("--against", help="compare with another automaton instead of the oracle")
    p.add_argument("--exhaustive-small", action="store_true")
    p.add_argument("--max-vertices", type=int, default=3)
    p.add_argument("--max-edges", type=int, default=3)
    p.set_defaults(func=cmd_diff)

    p = sub.add_parser("bench", help="time an automaton on a graph family")
    p.add_argument("automaton")
    p.add_argument("--family", choices=["path", "cycle", "random-ktree"], required=True)
    p.add_argument("--sizes", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--width", type=int, default=2, help="k for random-ktree")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("gen", help="generate random inputs")
    p.add_argument("kind", choices=["incidence", "term", "ktree"])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-n", type=int, default=6)
    p.add_argument("--max-m", type=int, default=8)
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--l", type=int, default=5)
    p.add_argument("--width", type=int, default=2)
    p.add_argument("--density", type=float, default=0.6)
    p.add_argument("--widths", help="annotate with random sets, e.g. '2,0'")
    p.add_argument("--out", "-o")
    p.add_argument("--graph-out")
    p.add_argument("--td-out")
    p.set_defaults(func=cmd_gen)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, TermError, GraphFormatError, NotIncidence, TDValidationError, SignatureError,
            AutomatonError, GenerationError, ValueError) as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}, sort_keys=True))
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
