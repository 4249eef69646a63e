"""Brute-force deciders used as ground truth for the automata.

Every function here works from the evaluated structure or the recovered
digraph and never calls automaton code. Vertex and edge sets are given as
sets of leaf positions.
"""

from __future__ import annotations

import itertools
from typing import Iterable

from .graphs import Digraph, graph_of_incidence
from .terms import Term, annotations_of, evaluate, fold

__all__ = [
    "OracleCapExceeded",
    "oracle_correct",
    "oracle_irredundant",
    "oracle_edge",
    "oracle_inc",
    "oracle_link",
    "oracle_subgraph",
    "oracle_cycle_or_empty",
    "oracle_dirham",
    "has_hamiltonian_cycle",
    "has_hamiltonian_cycle_by_subsets",
    "is_single_cycle",
    "oracle_for",
    "DIRHAM_CAP",
]

DIRHAM_CAP = 9


class OracleCapExceeded(ValueError):
    pass


def oracle_correct(t: Term) -> bool:
    """Every edge-vertex has indegree 1 and outdegree 1."""
    s = evaluate(t)
    deg = s.degrees()
    return all(deg[v] == (1, 1) for v, lab in s.label.items() if lab < 0)


def oracle_irredundant(t: Term) -> bool:
    """Replay the evaluation and watch for an addition meeting an existing edge."""
    edges: set[tuple[int, int]] = set()
    counter = [0]
    redundant = [False]

    def step(node: Term, args: list) -> dict[int, list[int]]:
        sym = node.symbol
        kind = sym[0]
        if kind == "leaf":
            counter[0] += 1
            return {sym[1]: [counter[0]]}
        if kind == "empty":
            return {}
        if kind == "oplus":
            merged = {k: list(v) for k, v in args[0].items()}
            for k, v in args[1].items():
                merged.setdefault(k, []).extend(v)
            return merged
        classes = args[0]
        a, b = sym[1], sym[2]
        if kind == "relab":
            if a not in classes:
                return classes
            out = {k: v for k, v in classes.items() if k != a}
            out[b] = out.get(b, []) + classes[a]
            return out
        for x in classes.get(a, ()):
            for y in classes.get(b, ()):
                if (x, y) in edges:
                    redundant[0] = True
                edges.add((x, y))
        return classes

    fold(t, step)
    return not redundant[0]


def _graph_and_ids(t: Term) -> tuple[Digraph, dict[bytes, int], dict[bytes, int]]:
    g = graph_of_incidence(evaluate(t))
    vid = {p: i + 1 for i, p in enumerate(g.vertex_origin or ())}
    eid = {p: i + 1 for i, p in enumerate(g.edge_origin or ())}
    return g, vid, eid


def oracle_edge(t: Term, xs: Iterable[bytes], ys: Iterable[bytes]) -> bool:
    """X = {x}, Y = {y} and the digraph has an edge x -> y."""
    xs, ys = set(xs), set(ys)
    if len(xs) != 1 or len(ys) != 1:
        return False
    g, vid, _ = _graph_and_ids(t)
    return g.has_edge(vid[next(iter(xs))], vid[next(iter(ys))])


def oracle_inc(t: Term, xs: Iterable[bytes], us: Iterable[bytes], direction: str = "xu") -> bool:
    """X = {x}, U = {u} and x is the tail of u (``xu``) or its head (``uy``)."""
    xs, us = set(xs), set(us)
    if len(xs) != 1 or len(us) != 1:
        return False
    g, vid, eid = _graph_and_ids(t)
    tail, head = g.edges[eid[next(iter(us))] - 1]
    x = vid[next(iter(xs))]
    return tail == x if direction == "xu" else head == x


def oracle_link(t: Term, xs: Iterable[bytes], ys: Iterable[bytes], mode: str) -> bool:
    """Quantified adjacency, evaluated literally over X × Y."""
    g, vid, _ = _graph_and_ids(t)
    X = [vid[p] for p in xs]
    Y = [vid[p] for p in ys]
    adj = set(g.edges)
    mode = mode.lower()
    if mode == "ee":
        return any((x, y) in adj for x in X for y in Y)
    if mode == "ae":
        return all(any((x, y) in adj for y in Y) for x in X)
    if mode == "aa":
        return all((x, y) in adj for x in X for y in Y)
    if mode == "ea":
        return any(all((x, y) in adj for y in Y) for x in X)
    raise ValueError(f"unknown link mode {mode!r}")


def oracle_subgraph(t: Term, xs: Iterable[bytes], us: Iterable[bytes]) -> bool:
    """Both ends of every edge in U lie in X."""
    g, vid, eid = _graph_and_ids(t)
    X = {vid[p] for p in xs}
    for p in us:
        tail, head = g.edges[eid[p] - 1]
        if tail not in X or head not in X:
            return False
    return True


def is_single_cycle(n: int, edges: Iterable[tuple[int, int]]) -> bool:
    """The edges form one directed cycle through all ``n`` vertices."""
    edges = list(edges)
    if n == 0 or len(edges) != n:
        return False
    succ: dict[int, int] = {}
    pred: dict[int, int] = {}
    for t, h in edges:
        if t in succ or h in pred:
            return False
        succ[t] = h
        pred[h] = t
    v, steps = 1, 0
    while True:
        v = succ[v]
        steps += 1
        if v == 1:
            return steps == n
        if steps > n:
            return False


def oracle_cycle_or_empty(t: Term) -> bool:
    """The digraph is empty or is a single directed cycle."""
    g = graph_of_incidence(evaluate(t))
    return (g.n == 0 and g.m == 0) or is_single_cycle(g.n, g.edges)


def has_hamiltonian_cycle(g: Digraph, cap: int = DIRHAM_CAP) -> bool:
    """Permutation search. The empty digraph counts as Hamiltonian."""
    if g.n > cap:
        raise OracleCapExceeded(f"{g.n} vertices exceeds the cap of {cap}")
    if g.n == 0:
        return True
    adj = set(g.edges)
    if g.n == 1:
        return (1, 1) in adj
    for rest in itertools.permutations(range(2, g.n + 1)):
        order = (1,) + rest
        if all((order[i], order[(i + 1) % g.n]) in adj for i in range(g.n)):
            return True
    return False


def has_hamiltonian_cycle_by_subsets(g: Digraph) -> bool:
    """Secondary check: some subset of the edges is one cycle through every vertex."""
    if g.n == 0:
        return True
    for chosen in itertools.combinations(range(g.m), g.n):
        if is_single_cycle(g.n, (g.edges[i] for i in chosen)):
            return True
    return False


def oracle_dirham(t: Term, cap: int = DIRHAM_CAP) -> bool:
    return has_hamiltonian_cycle(graph_of_incidence(evaluate(t)), cap)


def oracle_for(automaton_id: str):
    """Oracle reading its sets from the term's annotations: ``f(term) -> bool``."""

    def sets(t: Term):
        # pad with empty sets: a sort without leaves carries no annotation
        a = annotations_of(t)
        vs = list(a.vertex_sets) + [frozenset()] * 2
        es = list(a.edge_sets) + [frozenset()] * 1
        return vs, es

    if automaton_id == "irr":
        return oracle_irredundant
    if automaton_id == "ct":
        return oracle_correct
    if automaton_id in ("inc-xu", "inc-uy"):
        direction = automaton_id[-2:]

        def inc(t: Term) -> bool:
            vs, es = sets(t)
            return oracle_inc(t, vs[0], es[0], direction)

        return inc
    if automaton_id in ("edg", "composed-edg"):

        def edg(t: Term) -> bool:
            vs, _ = sets(t)
            return oracle_edge(t, vs[0], vs[1])

        return edg
    if automaton_id.startswith("link-"):
        mode = automaton_id[5:]

        def link(t: Term) -> bool:
            vs, _ = sets(t)
            return oracle_link(t, vs[0], vs[1], mode)

        return link
    if automaton_id == "subgraph":

        def sub(t: Term) -> bool:
            vs, es = sets(t)
            return oracle_subgraph(t, vs[0], es[0])

        return sub
    if automaton_id == "ham-core":
        return oracle_cycle_or_empty
    if automaton_id == "dirham":
        return oracle_dirham
    raise KeyError(f"no oracle for {automaton_id!r}")
