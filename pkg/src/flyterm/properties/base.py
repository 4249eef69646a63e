"""Shared scaffolding for the concrete property automata."""

from __future__ import annotations

import itertools
from typing import Iterable, Iterator

from ..engine import DeterministicAutomaton, Signature, State, Symbol

EMPTY: frozenset = frozenset()


def rename(s: frozenset, a: int, b: int) -> frozenset:
    """Replace label ``a`` by ``b`` in a set of labels."""
    if a in s:
        return (s - {a}) | {b}
    return s


def powerset(items: Iterable) -> list[frozenset]:
    items = sorted(items)
    return [frozenset(c) for r in range(len(items) + 1) for c in itertools.combinations(items, r)]


def at_most_one(items: Iterable) -> list[frozenset]:
    return [EMPTY] + [frozenset((x,)) for x in sorted(items)]


class TermAutomaton(DeterministicAutomaton):
    """Deterministic automaton written as one method per kind of symbol.

    Any child in a sink state makes the node take that sink state, so the
    handlers below only ever see non-sink states.
    """

    def __init__(self, name: str, signature: Signature | None = None):
        super().__init__(name, signature)

    def step(self, symbol: Symbol, *states: State) -> State:
        for q in states:
            if type(q) is str and q in self.sinks:
                return q
        kind = symbol[0]
        if kind == "leaf":
            return self.on_leaf(symbol[1], symbol[2])
        if kind == "empty":
            return self.on_empty()
        if kind == "oplus":
            return self.on_oplus(states[0], states[1])
        if kind == "relab":
            return self.on_relab(symbol[1], symbol[2], states[0])
        if kind == "add":
            a, b = symbol[1], symbol[2]
            if a > 0:
                return self.on_add_to_edge(a, b, states[0])
            return self.on_add_from_edge(a, b, states[0])
        raise ValueError(f"unknown symbol {symbol!r}")

    def on_empty(self) -> State:
        raise NotImplementedError

    def on_leaf(self, label: int, bits: str) -> State:
        raise NotImplementedError

    def on_oplus(self, q1: State, q2: State) -> State:
        raise NotImplementedError

    def on_relab(self, a: int, b: int, q: State) -> State:
        raise NotImplementedError

    def on_add_to_edge(self, a: int, d: int, q: State) -> State:
        """Edges from every vertex labeled ``a`` to every edge-vertex labeled ``d``."""
        raise NotImplementedError

    def on_add_from_edge(self, d: int, b: int, q: State) -> State:
        """Edges from every edge-vertex labeled ``d`` to every vertex labeled ``b``."""
        raise NotImplementedError


def count_with_budget(states: Iterator[State], budget: int | None) -> int:
    from ..engine import EnumerationBudgetExceeded

    n = 0
    for _ in states:
        n += 1
        if budget is not None and n > budget:
            raise EnumerationBudgetExceeded(f"more than {budget} states")
    return n
