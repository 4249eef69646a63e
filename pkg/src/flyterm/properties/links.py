"""Quantified adjacency between two vertex sets X and Y.

All four automata read two vertex bits (membership in X, then in Y) and
assume a correct and irredundant input term. "x links to y" means that
some edge-vertex u has x -> u -> y, so x = y needs a loop.

* ``ee``: some x in X links to some y in Y.
* ``ae``: every x in X links to some y in Y.
* ``aa``: every x in X links to every y in Y.
* ``ea``: some x in X links to every y in Y.

Pairs of label sets stand for classes of vertices that behave the same
under every later operation: a vertex label together with the set of
labels of its out-neighbours (or in-neighbours).
"""

from __future__ import annotations

import math
from typing import Iterator

from ..engine import SUCCESS, Signature, State
from .base import EMPTY, TermAutomaton, powerset, rename

__all__ = [
    "LinkSomeSome",
    "LinkAllSome",
    "LinkAllAll",
    "LinkSomeAll",
    "make_link",
    "link_ae_state_count",
    "link_ae_state_bound",
]


def _bits(bits: str) -> tuple[bool, bool]:
    return bits[0] == "1", bits[1] == "1"


def _ren(x: int, a: int, b: int) -> int:
    return b if x == a else x


class LinkSomeSome(TermAutomaton):
    """``(g1, g2, d, d1, d2)`` or the accepting sink ``Success``.

    g1, g2: labels of X- and Y-vertices; d: all edge labels; d1: labels of
    edge-vertices entered from X; d2: labels of edge-vertices leading to Y.
    """

    sinks = frozenset({SUCCESS})

    def __init__(self):
        super().__init__("link-ee", Signature(2, 0))

    def on_empty(self) -> State:
        return (EMPTY,) * 5

    def on_leaf(self, label: int, bits: str) -> State:
        if label < 0:
            return (EMPTY, EMPTY, frozenset((label,)), EMPTY, EMPTY)
        in_x, in_y = _bits(bits)
        one = frozenset((label,))
        return (one if in_x else EMPTY, one if in_y else EMPTY, EMPTY, EMPTY, EMPTY)

    def on_oplus(self, q1: State, q2: State) -> State:
        return tuple(x | y for x, y in zip(q1, q2))

    def on_relab(self, a: int, b: int, q: State) -> State:
        g1, g2, d, d1, d2 = q
        if a > 0:
            return (rename(g1, a, b), rename(g2, a, b), d, d1, d2)
        return (g1, g2, rename(d, a, b), rename(d1, a, b), rename(d2, a, b))

    def on_add_to_edge(self, a: int, e: int, q: State) -> State:
        g1, g2, d, d1, d2 = q
        if a in g1 and e in d2:
            return SUCCESS
        if a in g1 and e in d:
            return (g1, g2, d, d1 | {e}, d2)
        return q

    def on_add_from_edge(self, e: int, b: int, q: State) -> State:
        g1, g2, d, d1, d2 = q
        if b in g2 and e in d1:
            return SUCCESS
        if b in g2 and e in d:
            return (g1, g2, d, d1, d2 | {e})
        return q

    def accepting(self, q: State) -> bool:
        return q == SUCCESS

    def is_valid_state(self, q: State) -> bool:
        if q == SUCCESS:
            return True
        return (q[3] | q[4]) <= q[2]

    def enumerate_states_over(self, vertex_labels, edge_labels) -> Iterator[State]:
        yield SUCCESS
        cs = powerset(vertex_labels)
        ds = powerset(edge_labels)
        for g1 in cs:
            for g2 in cs:
                for d in ds:
                    for d1 in ds:
                        for d2 in ds:
                            q = (g1, g2, d, d1, d2)
                            if self.is_valid_state(q):
                                yield q


class LinkAllSome(TermAutomaton):
    """``(g, d, lam, out, todo)``.

    g: labels of Y-vertices; d: edge labels; lam: labels of edge-vertices
    leading to Y; out: classes (label, out-labels) of X-vertices; todo: the
    classes still containing an X-vertex without a link into Y.

    ``legacy_union=True`` replaces the disjoint-union rule by the coarser
    one that resets a side's pending classes to all its X-classes whenever
    the other side holds Y-vertices. That rule can reject valid inputs and
    is kept only to demonstrate the difference.
    """

    def __init__(self, legacy_union: bool = False):
        super().__init__("link-ae-legacy" if legacy_union else "link-ae", Signature(2, 0))
        self.legacy_union = legacy_union

    def on_empty(self) -> State:
        return (EMPTY,) * 5

    def on_leaf(self, label: int, bits: str) -> State:
        if label < 0:
            return (EMPTY, frozenset((label,)), EMPTY, EMPTY, EMPTY)
        in_x, in_y = _bits(bits)
        g = frozenset((label,)) if in_y else EMPTY
        cls = frozenset(((label, EMPTY),)) if in_x else EMPTY
        return (g, EMPTY, EMPTY, cls, cls)

    def on_oplus(self, q1: State, q2: State) -> State:
        g, d, lam, out, todo = q1
        h, e, mu, out2, todo2 = q2
        if self.legacy_union:
            todo = todo if not h else out
            todo2 = todo2 if not g else out2
        return (g | h, d | e, lam | mu, out | out2, todo | todo2)

    def on_relab(self, a: int, b: int, q: State) -> State:
        g, d, lam, out, todo = q
        if a > 0:
            return (
                rename(g, a, b),
                d,
                lam,
                frozenset((_ren(x, a, b), eta) for x, eta in out),
                frozenset((_ren(x, a, b), eta) for x, eta in todo),
            )
        return (
            g,
            rename(d, a, b),
            rename(lam, a, b),
            frozenset((x, rename(eta, a, b)) for x, eta in out),
            frozenset((x, rename(eta, a, b)) for x, eta in todo),
        )

    def on_add_to_edge(self, a: int, e: int, q: State) -> State:
        g, d, lam, out, todo = q
        if e not in d:
            return q
        out = frozenset((x, eta | {e}) if x == a else (x, eta) for x, eta in out)
        if e in lam:
            todo = frozenset((x, eta) for x, eta in todo if x != a)
        else:
            todo = frozenset((x, eta | {e}) if x == a else (x, eta) for x, eta in todo)
        return (g, d, lam, out, todo)

    def on_add_from_edge(self, e: int, b: int, q: State) -> State:
        g, d, lam, out, todo = q
        if b not in g or e not in d:
            return q
        return (g, d, lam | {e}, out, frozenset((x, eta) for x, eta in todo if e not in eta))

    def accepting(self, q: State) -> bool:
        return not q[4]

    def is_valid_state(self, q: State) -> bool:
        g, d, lam, out, todo = q
        return lam <= d and todo <= out and all(eta <= d for _, eta in out)

    def enumerate_states_over(self, vertex_labels, edge_labels) -> Iterator[State]:
        vs = sorted(vertex_labels)
        for d in powerset(edge_labels):
            classes = [(x, eta) for x in vs for eta in powerset(d)]
            for lam in powerset(d):
                for g in powerset(vertex_labels):
                    # each class is absent, present, or present and pending
                    for marks in _ternary(len(classes)):
                        out = frozenset(c for c, m in zip(classes, marks) if m)
                        todo = frozenset(c for c, m in zip(classes, marks) if m == 2)
                        yield (g, d, lam, out, todo)


def _ternary(n: int) -> Iterator[tuple[int, ...]]:
    if n == 0:
        yield ()
        return
    digits = [0] * n
    while True:
        yield tuple(digits)
        i = 0
        while i < n and digits[i] == 2:
            digits[i] = 0
            i += 1
        if i == n:
            return
        digits[i] += 1


def link_ae_state_count(k: int, l: int) -> int:
    """Number of states enumerated by ``LinkAllSome`` over k vertex and l edge labels."""
    return 2**k * sum(math.comb(l, j) * 2**j * 3 ** (k * 2**j) for j in range(l + 1))


def link_ae_state_bound(k: int, l: int) -> int:
    """Upper bound 2^k * 3^l * 3^(k * 2^l) on the same state space."""
    return 2**k * 3**l * 3 ** (k * 2**l)


class LinkAllAll(TermAutomaton):
    """``(d, out, inn, todo)``.

    out: classes (label, out-labels) of X-vertices; inn: classes
    (in-labels, label) of Y-vertices; todo: quadruples (label of x,
    out-labels of x, in-labels of y, label of y) for pairs not yet linked.
    """

    def __init__(self):
        super().__init__("link-aa", Signature(2, 0))

    def on_empty(self) -> State:
        return (EMPTY,) * 4

    def on_leaf(self, label: int, bits: str) -> State:
        if label < 0:
            return (frozenset((label,)), EMPTY, EMPTY, EMPTY)
        in_x, in_y = _bits(bits)
        out = frozenset(((label, EMPTY),)) if in_x else EMPTY
        inn = frozenset(((EMPTY, label),)) if in_y else EMPTY
        todo = frozenset(((label, EMPTY, EMPTY, label),)) if in_x and in_y else EMPTY
        return (EMPTY, out, inn, todo)

    def on_oplus(self, q1: State, q2: State) -> State:
        d, out, inn, todo = q1
        e, out2, inn2, todo2 = q2
        cross = {(a, eta, eta2, b) for a, eta in out for eta2, b in inn2}
        cross.update((a, eta, eta2, b) for a, eta in out2 for eta2, b in inn)
        return (d | e, out | out2, inn | inn2, todo | todo2 | cross)

    def on_relab(self, a: int, b: int, q: State) -> State:
        d, out, inn, todo = q
        if a > 0:
            return (
                d,
                frozenset((_ren(x, a, b), eta) for x, eta in out),
                frozenset((eta, _ren(y, a, b)) for eta, y in inn),
                frozenset((_ren(x, a, b), eta, eta2, _ren(y, a, b)) for x, eta, eta2, y in todo),
            )
        return (
            rename(d, a, b),
            frozenset((x, rename(eta, a, b)) for x, eta in out),
            frozenset((rename(eta, a, b), y) for eta, y in inn),
            frozenset((x, rename(eta, a, b), rename(eta2, a, b), y) for x, eta, eta2, y in todo),
        )

    def on_add_to_edge(self, a: int, e: int, q: State) -> State:
        d, out, inn, todo = q
        if e not in d:
            return q
        out = frozenset((x, eta | {e}) if x == a else (x, eta) for x, eta in out)
        new_todo = set()
        for x, eta, eta2, y in todo:
            if x != a:
                new_todo.add((x, eta, eta2, y))
            elif e not in eta2:
                new_todo.add((x, eta | {e}, eta2, y))
        return (d, out, inn, frozenset(new_todo))

    def on_add_from_edge(self, e: int, b: int, q: State) -> State:
        d, out, inn, todo = q
        if e not in d:
            return q
        inn = frozenset((eta | {e}, y) if y == b else (eta, y) for eta, y in inn)
        new_todo = set()
        for x, eta, eta2, y in todo:
            if y != b:
                new_todo.add((x, eta, eta2, y))
            elif e not in eta:
                new_todo.add((x, eta, eta2 | {e}, y))
        return (d, out, inn, frozenset(new_todo))

    def accepting(self, q: State) -> bool:
        return not q[3]

    def is_valid_state(self, q: State) -> bool:
        d, out, inn, todo = q
        return all(eta <= d for _, eta in out) and all(eta <= d for eta, _ in inn)


class LinkSomeAll(TermAutomaton):
    """``(d, inn, cand)``.

    inn: classes (in-labels, label) of Y-vertices; cand: triples (label of
    x, out-labels of x, classes of Y-vertices x does not link to yet), one
    per class of X-vertices. Accepting iff some triple has nothing left.
    """

    def __init__(self):
        super().__init__("link-ea", Signature(2, 0))

    def on_empty(self) -> State:
        return (EMPTY,) * 3

    def on_leaf(self, label: int, bits: str) -> State:
        if label < 0:
            return (frozenset((label,)), EMPTY, EMPTY)
        in_x, in_y = _bits(bits)
        inn = frozenset(((EMPTY, label),)) if in_y else EMPTY
        cand = frozenset(((label, EMPTY, inn),)) if in_x else EMPTY
        return (EMPTY, inn, cand)

    def on_oplus(self, q1: State, q2: State) -> State:
        d, inn, cand = q1
        e, inn2, cand2 = q2
        merged = {(a, eta, miss | inn2) for a, eta, miss in cand}
        merged.update((a, eta, miss | inn) for a, eta, miss in cand2)
        return (d | e, inn | inn2, frozenset(merged))

    def on_relab(self, a: int, b: int, q: State) -> State:
        d, inn, cand = q
        if a > 0:

            def ry(s):
                return frozenset((eta, _ren(y, a, b)) for eta, y in s)

            return (d, ry(inn), frozenset((_ren(x, a, b), eta, ry(miss)) for x, eta, miss in cand))

        def rd(s):
            return frozenset((rename(eta, a, b), y) for eta, y in s)

        return (rename(d, a, b), rd(inn), frozenset((x, rename(eta, a, b), rd(miss)) for x, eta, miss in cand))

    def on_add_to_edge(self, a: int, e: int, q: State) -> State:
        d, inn, cand = q
        if e not in d:
            return q
        new = set()
        for x, eta, miss in cand:
            if x == a:
                new.add((x, eta | {e}, frozenset(m for m in miss if e not in m[0])))
            else:
                new.add((x, eta, miss))
        return (d, inn, frozenset(new))

    def on_add_from_edge(self, e: int, b: int, q: State) -> State:
        d, inn, cand = q
        if e not in d:
            return q
        inn = frozenset((eta | {e}, y) if y == b else (eta, y) for eta, y in inn)
        new = set()
        for x, eta, miss in cand:
            kept = set()
            for eta2, y in miss:
                if y != b:
                    kept.add((eta2, y))
                elif e not in eta:
                    kept.add((eta2 | {e}, y))
            new.add((x, eta, frozenset(kept)))
        return (d, inn, frozenset(new))

    def accepting(self, q: State) -> bool:
        return any(not miss for _, _, miss in q[2])

    def is_valid_state(self, q: State) -> bool:
        d, inn, cand = q
        return all(eta <= d for eta, _ in inn) and all(eta <= d for _, eta, _ in cand)


def make_link(mode: str, *, legacy_union: bool = False) -> TermAutomaton:
    mode = mode.lower()
    if mode == "ee":
        return LinkSomeSome()
    if mode == "ae":
        return LinkAllSome(legacy_union=legacy_union)
    if mode == "aa":
        return LinkAllAll()
    if mode == "ea":
        return LinkSomeAll()
    raise ValueError(f"unknown link mode {mode!r}")
