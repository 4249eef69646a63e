"""Directed Hamiltonicity.

``HamCore`` recognizes, among correct irredundant terms, those whose value
is a single directed cycle or is empty. ``DirHam`` adds a guess at every
edge leaf: keep the edge or replace it by the empty graph. A graph has a
directed Hamiltonian cycle iff some choice of kept edges leaves exactly a
cycle through all vertices, so the determinized ``DirHam`` decides it.
"""

from __future__ import annotations

from ..engine import ERROR, OK, FlyAutomaton, Signature, State, Symbol
from .base import EMPTY, TermAutomaton

__all__ = ["HamCore", "DirHam", "make_ham_core", "make_dirham", "ham_condition"]

EMPTY3 = (EMPTY, EMPTY, EMPTY)


def ham_condition(alpha: frozenset, beta: frozenset, psi: frozenset) -> bool:
    """Isolated labels, inner vertex labels, path starts and path ends are
    pairwise disjoint, and no two paths share a start or an end."""
    starts = [x for x, _ in psi]
    ends = [y for _, y in psi]
    s1, s2 = set(starts), set(ends)
    if len(s1) != len(starts) or len(s2) != len(ends):
        return False
    parts = (alpha, beta, s1, s2)
    for i in range(4):
        for j in range(i + 1, 4):
            if parts[i] & parts[j]:
                return False
    return True


def _sub(x: int, a: int, b: int) -> int:
    return b if x == a else x


class HamCore(TermAutomaton):
    """States ``Ok``, ``Error`` and ``(alpha, beta, psi)``.

    alpha: labels of isolated vertices; beta: labels of vertex-sort
    vertices inside a path; psi: (start label, end label) of each path.
    ``Ok`` means the value is one directed cycle. It is not absorbing,
    since a disjoint union with anything nonempty breaks it.
    """

    sinks = frozenset({ERROR})

    def __init__(self, name: str = "ham-core"):
        super().__init__(name, Signature(0, 0))

    def on_empty(self) -> State:
        return EMPTY3

    def on_leaf(self, label: int, bits: str) -> State:
        return (frozenset((label,)), EMPTY, EMPTY)

    def on_oplus(self, q1: State, q2: State) -> State:
        if q1 == OK or q2 == OK:
            other = q2 if q1 == OK else q1
            return OK if other == EMPTY3 else ERROR
        a1, b1, p1 = q1
        a2, b2, p2 = q2
        if a1 & a2 or p1 & p2:
            return ERROR
        merged = (a1 | a2, b1 | b2, p1 | p2)
        return merged if ham_condition(*merged) else ERROR

    def on_relab(self, a: int, b: int, q: State) -> State:
        if q == OK:
            return OK
        alpha, beta, psi = q
        if a in alpha and b in alpha:
            return ERROR
        alpha2 = frozenset(_sub(x, a, b) for x in alpha)
        beta2 = frozenset(_sub(x, a, b) for x in beta)
        psi2 = frozenset((_sub(x, a, b), _sub(y, a, b)) for x, y in psi)
        if len(psi2) != len(psi) or not ham_condition(alpha2, beta2, psi2):
            return ERROR
        return (alpha2, beta2, psi2)

    def _add(self, a: int, b: int, q: State) -> State:
        """Edge from every ``a`` vertex to every ``b`` vertex."""
        if q == OK:
            # on a correct irredundant term nothing can attach to a closed cycle
            return OK
        alpha, beta, psi = q
        starts = {x: y for x, y in psi}
        ends = {y: x for x, y in psi}
        seen = alpha | beta | starts.keys() | ends.keys()
        if a not in seen or b not in seen:
            return q
        if not alpha and psi == frozenset(((b, a),)):
            return OK
        inner = frozenset(x for x in (a, b) if x > 0)
        if a in alpha and b in alpha:
            return (alpha - {a, b}, beta, psi | {(a, b)})
        if a in alpha and b in starts:
            c = starts[b]
            return (alpha - {a}, beta | (inner & {b}), (psi - {(b, c)}) | {(a, c)})
        if a in ends and b in alpha:
            d = ends[a]
            return (alpha - {b}, beta | (inner & {a}), (psi - {(d, a)}) | {(d, b)})
        if a in ends and b in starts:
            d, c = ends[a], starts[b]
            if (d, a) != (b, c):
                return (alpha, beta | inner, (psi - {(d, a), (b, c)}) | {(d, c)})
        return ERROR

    on_add_to_edge = _add
    on_add_from_edge = _add

    def accepting(self, q: State) -> bool:
        return q == OK or q == EMPTY3

    def is_valid_state(self, q: State) -> bool:
        if q in (OK, ERROR):
            return True
        alpha, beta, psi = q
        return all(x > 0 for x in beta) and ham_condition(alpha, beta, psi)


class DirHam(FlyAutomaton):
    """Nondeterministic: every edge leaf may also be read as the empty graph."""

    sinks = frozenset({ERROR})

    def __init__(self):
        super().__init__("dirham", Signature(0, 0), deterministic=False)
        self.core = HamCore("ham-core")

    def compute(self, symbol: Symbol, *states: State) -> tuple:
        q = self.core.next_state(symbol, *states)
        if symbol[0] == "leaf" and symbol[1] < 0:
            return (q, EMPTY3)
        return (q,)

    def accepting(self, q: State) -> bool:
        return self.core.accepting(q)

    def is_valid_state(self, q: State) -> bool:
        return self.core.is_valid_state(q)


def make_ham_core() -> HamCore:
    return HamCore()


def make_dirham() -> DirHam:
    return DirHam()
