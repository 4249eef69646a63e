"""Automata for the two structural preconditions: irredundancy and correctness."""

from __future__ import annotations

import itertools
from typing import Iterator

from ..engine import ERROR, State
from .base import EMPTY, TermAutomaton, powerset, rename

__all__ = ["IrredundancyChecker", "CorrectnessAutomaton", "make_irredundancy_checker", "make_ct"]


class IrredundancyChecker(TermAutomaton):
    """Detects an edge addition that would recreate an existing edge.

    A state is ``(present, pairs)``: the labels carried by some vertex and
    the label pairs ``(π(x), π(y))`` over all edges ``x -> y``. The present
    labels are needed to know whether an addition creates anything at all.
    """

    sinks = frozenset({ERROR})

    def __init__(self):
        super().__init__("irr")

    def on_empty(self) -> State:
        return (EMPTY, EMPTY)

    def on_leaf(self, label: int, bits: str) -> State:
        return (frozenset((label,)), EMPTY)

    def on_oplus(self, q1: State, q2: State) -> State:
        return (q1[0] | q2[0], q1[1] | q2[1])

    def on_relab(self, a: int, b: int, q: State) -> State:
        present, pairs = q
        if a not in present:
            return q
        moved = frozenset(((b if x == a else x), (b if y == a else y)) for x, y in pairs)
        return (rename(present, a, b), moved)

    def _add(self, a: int, b: int, q: State) -> State:
        present, pairs = q
        if (a, b) in pairs:
            return ERROR
        if a in present and b in present:
            return (present, pairs | {(a, b)})
        return q

    on_add_to_edge = _add
    on_add_from_edge = _add

    def accepting(self, q: State) -> bool:
        return q != ERROR

    def is_valid_state(self, q: State) -> bool:
        if q == ERROR:
            return True
        present, pairs = q
        return all(x in present and y in present and (x > 0) != (y > 0) for x, y in pairs)

    def enumerate_states_over(self, vertex_labels, edge_labels) -> Iterator[State]:
        yield ERROR
        for present in powerset(vertex_labels | edge_labels):
            cs = sorted(x for x in present if x > 0)
            ds = sorted(x for x in present if x < 0)
            possible = [(c, d) for c in cs for d in ds] + [(d, c) for c in cs for d in ds]
            for pairs in powerset(possible):
                yield (present, pairs)


class CorrectnessAutomaton(TermAutomaton):
    """Decides whether the value of an irredundant term is an incidence graph.

    A state ``(g1, g2, d00, d01, d10, d11)`` records the vertex labels used
    by exactly one vertex (``g1``) or by several (``g2``), and splits the
    edge labels by the indegree and outdegree (each 0 or 1) shared by all
    edge-vertices with that label. Annotation bits are ignored.
    """

    sinks = frozenset({ERROR})

    def __init__(self):
        super().__init__("ct")

    def on_empty(self) -> State:
        return (EMPTY,) * 6

    def on_leaf(self, label: int, bits: str) -> State:
        if label > 0:
            return (frozenset((label,)), EMPTY, EMPTY, EMPTY, EMPTY, EMPTY)
        return (EMPTY, EMPTY, frozenset((label,)), EMPTY, EMPTY, EMPTY)

    def on_oplus(self, q1: State, q2: State) -> State:
        g1, g2 = q1[0], q1[1]
        h1, h2 = q2[0], q2[1]
        ds = [q1[i] | q2[i] for i in range(2, 6)]
        for i, j in itertools.combinations(range(4), 2):
            if ds[i] & ds[j]:
                return ERROR
        many = g2 | h2 | (g1 & h1)
        once = (g1 - (h1 | h2)) | (h1 - (g1 | g2))
        return (once, many, ds[0], ds[1], ds[2], ds[3])

    def on_relab(self, a: int, b: int, q: State) -> State:
        g1, g2, d00, d01, d10, d11 = q
        if a > 0:
            if a not in g1 and a not in g2:
                return q
            if b in g1 or b in g2:
                return (g1 - {a, b}, (g2 - {a}) | {b}, d00, d01, d10, d11)
            return (rename(g1, a, b), rename(g2, a, b), d00, d01, d10, d11)
        ds = [rename(d, a, b) for d in (d00, d01, d10, d11)]
        for i, j in itertools.combinations(range(4), 2):
            if ds[i] & ds[j]:
                return ERROR
        return (g1, g2, ds[0], ds[1], ds[2], ds[3])

    def on_add_to_edge(self, a: int, d: int, q: State) -> State:
        g1, g2, d00, d01, d10, d11 = q
        if (a not in g1 and a not in g2) or not (d in d00 or d in d01 or d in d10 or d in d11):
            return q
        if a in g2 or d in d10 or d in d11:
            return ERROR
        if d in d00:
            return (g1, g2, d00 - {d}, d01, d10 | {d}, d11)
        return (g1, g2, d00, d01 - {d}, d10, d11 | {d})

    def on_add_from_edge(self, d: int, a: int, q: State) -> State:
        g1, g2, d00, d01, d10, d11 = q
        if (a not in g1 and a not in g2) or not (d in d00 or d in d01 or d in d10 or d in d11):
            return q
        if a in g2 or d in d01 or d in d11:
            return ERROR
        if d in d00:
            return (g1, g2, d00 - {d}, d01 | {d}, d10, d11)
        return (g1, g2, d00, d01, d10 - {d}, d11 | {d})

    def accepting(self, q: State) -> bool:
        return q != ERROR and not q[2] and not q[3] and not q[4]

    def is_valid_state(self, q: State) -> bool:
        if q == ERROR:
            return True
        g1, g2 = q[0], q[1]
        if g1 & g2 or any(x <= 0 for x in g1 | g2):
            return False
        ds = q[2:]
        if any(x >= 0 for d in ds for x in d):
            return False
        return all(not (ds[i] & ds[j]) for i, j in itertools.combinations(range(4), 2))

    def enumerate_states_over(self, vertex_labels, edge_labels) -> Iterator[State]:
        yield ERROR
        cs = powerset(vertex_labels)
        ds = powerset(edge_labels)
        for g1 in cs:
            for g2 in cs:
                if g1 & g2:
                    continue
                for d00, d01, d10, d11 in itertools.product(ds, repeat=4):
                    q = (g1, g2, d00, d01, d10, d11)
                    if self.is_valid_state(q):
                        yield q


def make_irredundancy_checker() -> IrredundancyChecker:
    return IrredundancyChecker()


def make_ct() -> CorrectnessAutomaton:
    return CorrectnessAutomaton()
