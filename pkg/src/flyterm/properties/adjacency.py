"""Incidence and adjacency between annotated singletons.

These automata assume a correct and irredundant input term.
"""

from __future__ import annotations

from typing import Iterator

from ..engine import ERROR, OK, Signature, State
from .base import EMPTY, TermAutomaton, at_most_one, powerset, rename

__all__ = ["IncAutomaton", "EdgAutomaton", "make_inc", "make_edg"]


class IncAutomaton(TermAutomaton):
    """Checks that X = {x}, U = {u} and x -> u (or u -> x for ``"uy"``).

    Reads one vertex bit and one edge bit per leaf. A state is ``Ok``,
    ``Error`` (a set has two or more members) or ``(g, d)``: the label of
    the selected vertex and of the selected edge-vertex, when present.
    """

    sinks = frozenset({ERROR})

    def __init__(self, direction: str = "xu"):
        if direction not in ("xu", "uy"):
            raise ValueError(f"direction must be 'xu' or 'uy', got {direction!r}")
        super().__init__(f"inc-{direction}", Signature(1, 1))
        self.direction = direction

    def on_empty(self) -> State:
        return (EMPTY, EMPTY)

    def on_leaf(self, label: int, bits: str) -> State:
        if bits != "1":
            return (EMPTY, EMPTY)
        if label > 0:
            return (frozenset((label,)), EMPTY)
        return (EMPTY, frozenset((label,)))

    def on_oplus(self, q1: State, q2: State) -> State:
        if q1 == OK or q2 == OK:
            other = q2 if q1 == OK else q1
            return OK if other == (EMPTY, EMPTY) else ERROR
        if len(q1[0]) + len(q2[0]) >= 2 or len(q1[1]) + len(q2[1]) >= 2:
            return ERROR
        return (q1[0] | q2[0], q1[1] | q2[1])

    def on_relab(self, a: int, b: int, q: State) -> State:
        if q == OK:
            return OK
        if a > 0:
            return (rename(q[0], a, b), q[1])
        return (q[0], rename(q[1], a, b))

    def on_add_to_edge(self, a: int, d: int, q: State) -> State:
        if self.direction == "xu" and q != OK and a in q[0] and d in q[1]:
            return OK
        return q

    def on_add_from_edge(self, d: int, b: int, q: State) -> State:
        if self.direction == "uy" and q != OK and b in q[0] and d in q[1]:
            return OK
        return q

    def accepting(self, q: State) -> bool:
        return q == OK

    def is_valid_state(self, q: State) -> bool:
        if q in (OK, ERROR):
            return True
        return len(q[0]) <= 1 and len(q[1]) <= 1

    def enumerate_states_over(self, vertex_labels, edge_labels) -> Iterator[State]:
        yield OK
        yield ERROR
        for g in powerset(vertex_labels):
            for d in powerset(edge_labels):
                q = (g, d)
                if self.is_valid_state(q):
                    yield q


class EdgAutomaton(TermAutomaton):
    """Checks X = {x}, Y = {y} and an edge x -> y, reading two vertex bits.

    A state is ``Ok``, ``Error`` or ``(g1, g2, d, d1, d2)``: the label of x
    (if present), the label of y (if present), all edge labels, the labels
    of edge-vertices entered from x and those of edge-vertices leading to y.
    ``Ok`` is accepting but not absorbing: a disjoint union with anything
    that contains x or y again gives ``Error``.
    """

    sinks = frozenset({ERROR})

    def __init__(self):
        super().__init__("edg", Signature(2, 0))

    def on_empty(self) -> State:
        return (EMPTY,) * 5

    def on_leaf(self, label: int, bits: str) -> State:
        if label < 0:
            return (EMPTY, EMPTY, frozenset((label,)), EMPTY, EMPTY)
        one = frozenset((label,))
        return (one if bits[0] == "1" else EMPTY, one if bits[1] == "1" else EMPTY, EMPTY, EMPTY, EMPTY)

    def on_oplus(self, q1: State, q2: State) -> State:
        if q1 == OK and q2 == OK:
            return ERROR
        if q1 == OK or q2 == OK:
            other = q2 if q1 == OK else q1
            return OK if not other[0] and not other[1] else ERROR
        if len(q1[0]) + len(q2[0]) >= 2 or len(q1[1]) + len(q2[1]) >= 2:
            return ERROR
        return tuple(x | y for x, y in zip(q1, q2))

    def on_relab(self, a: int, b: int, q: State) -> State:
        if q == OK:
            return OK
        g1, g2, d, d1, d2 = q
        if a > 0:
            return (rename(g1, a, b), rename(g2, a, b), d, d1, d2)
        return (g1, g2, rename(d, a, b), rename(d1, a, b), rename(d2, a, b))

    def on_add_to_edge(self, a: int, e: int, q: State) -> State:
        if q == OK:
            return OK
        g1, g2, d, d1, d2 = q
        if a in g1 and e in d2:
            return OK
        if a in g1 and e in d:
            return (g1, g2, d, d1 | {e}, d2)
        return q

    def on_add_from_edge(self, e: int, b: int, q: State) -> State:
        if q == OK:
            return OK
        g1, g2, d, d1, d2 = q
        if b in g2 and e in d1:
            return OK
        if b in g2 and e in d:
            return (g1, g2, d, d1, d2 | {e})
        return q

    def accepting(self, q: State) -> bool:
        return q == OK

    def is_valid_state(self, q: State) -> bool:
        if q in (OK, ERROR):
            return True
        g1, g2, d, d1, d2 = q
        return len(g1) <= 1 and len(g2) <= 1 and (d1 | d2) <= d

    def enumerate_states_over(self, vertex_labels, edge_labels) -> Iterator[State]:
        yield OK
        yield ERROR
        cs = at_most_one(vertex_labels)
        ds = powerset(edge_labels)
        for g1 in cs:
            for g2 in cs:
                for d in ds:
                    for d1 in ds:
                        for d2 in ds:
                            q = (g1, g2, d, d1, d2)
                            if self.is_valid_state(q):
                                yield q


def make_inc(direction: str = "xu") -> IncAutomaton:
    aliases = {"XtoU": "xu", "UtoY": "uy", "xu": "xu", "uy": "uy"}
    if direction not in aliases:
        raise ValueError(f"unknown incidence direction {direction!r}")
    return IncAutomaton(aliases[direction])


def make_edg() -> EdgAutomaton:
    return EdgAutomaton()
