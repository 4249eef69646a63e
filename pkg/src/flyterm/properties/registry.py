"""Automata by stable string id, plus composed automata and state counts."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from ..engine import (
    EnumerationBudgetExceeded,
    FlyAutomaton,
    exists_project,
    inverse_image,
    product,
    relativize,
    restrict_signature,
    select_bits,
)
from .adjacency import make_edg, make_inc
from .base import count_with_budget
from .core import make_ct, make_irredundancy_checker
from .hamilton import make_dirham, make_ham_core
from .links import link_ae_state_count, make_link

__all__ = [
    "AutomatonInfo",
    "REGISTRY",
    "make_automaton",
    "make_subgraph",
    "make_inc_product",
    "make_composed_edg",
    "declared_state_count",
    "closed_form_state_count",
]


@dataclass(frozen=True)
class AutomatonInfo:
    id: str
    factory: Callable[[], FlyAutomaton]
    widths: tuple[int, int] | None
    needs_guards: bool
    summary: str


def make_subgraph() -> FlyAutomaton:
    """Reads (X, U) bits; accepts iff every edge in U has both ends in X."""
    a = relativize(make_ct())
    a.name = "subgraph"
    return a


def make_inc_product(widths: tuple[int, int] = (2, 1)) -> FlyAutomaton:
    """inc(X1, U) and inc(U, X2) over two vertex bits and one edge bit."""
    first = inverse_image(make_inc("xu"), select_bits([0], None, widths))
    second = inverse_image(make_inc("uy"), select_bits([1], None, widths))
    return product(first, second, "and")


def make_composed_edg() -> FlyAutomaton:
    """Adjacency obtained by projecting the edge variable out of the incidence product."""
    a = exists_project(make_inc_product(), "edge")
    a.name = "composed-edg"
    return a


REGISTRY: dict[str, AutomatonInfo] = {
    info.id: info
    for info in [
        AutomatonInfo("irr", make_irredundancy_checker, None, False, "no edge addition recreates an edge"),
        AutomatonInfo("ct", make_ct, None, False, "value is an incidence graph (given irredundancy)"),
        AutomatonInfo("inc-xu", lambda: make_inc("xu"), (1, 1), True, "X={x}, U={u}, x -> u"),
        AutomatonInfo("inc-uy", lambda: make_inc("uy"), (1, 1), True, "U={u}, Y={y}, u -> y"),
        AutomatonInfo("edg", make_edg, (2, 0), True, "X={x}, Y={y}, edge x -> y"),
        AutomatonInfo("link-ee", lambda: make_link("ee"), (2, 0), True, "some x in X has an edge to some y in Y"),
        AutomatonInfo("link-ae", lambda: make_link("ae"), (2, 0), True, "every x in X has an edge to some y in Y"),
        AutomatonInfo("link-aa", lambda: make_link("aa"), (2, 0), True, "every x in X has an edge to every y in Y"),
        AutomatonInfo("link-ea", lambda: make_link("ea"), (2, 0), True, "some x in X has an edge to every y in Y"),
        AutomatonInfo("ham-core", make_ham_core, (0, 0), True, "value is one directed cycle or empty"),
        AutomatonInfo("dirham", make_dirham, (0, 0), True, "graph has a directed Hamiltonian cycle"),
        AutomatonInfo("subgraph", make_subgraph, (1, 1), True, "every edge in U has both ends in X"),
        AutomatonInfo("composed-edg", make_composed_edg, (2, 0), True, "edg built from two incidence automata"),
    ]
}

_ALIASES = {"inc": "inc-xu", "CT": "ct", "I": "irr", "inc-product": "inc-product"}


def make_automaton(automaton_id: str) -> FlyAutomaton:
    key = _ALIASES.get(automaton_id, automaton_id)
    if key == "inc-product":
        return make_inc_product()
    if key not in REGISTRY:
        raise KeyError(f"unknown automaton {automaton_id!r}; known: {', '.join(sorted(REGISTRY))}")
    return REGISTRY[key].factory()


def closed_form_state_count(automaton_id: str, k: int, l: int) -> int:
    """Closed-form sizes of the declared state spaces over k vertex and l edge labels."""
    key = _ALIASES.get(automaton_id, automaton_id)
    if key == "ct":
        return 3**k * 5**l + 1
    if key == "edg":
        return (k + 1) ** 2 * 5**l + 2
    if key in ("inc-xu", "inc-uy"):
        return (k + 1) * (l + 1) + 2
    if key == "inc-product":
        return ((k + 1) * (l + 1) + 2) ** 2
    if key == "link-ee":
        return 4**k * 5**l + 1
    if key == "link-ae":
        return link_ae_state_count(k, l)
    raise KeyError(f"no closed form for {automaton_id!r}")


def declared_state_count(automaton_id: str, k: int, l: int, budget: int = 2_000_000) -> int:
    """Count the declared states over labels {1..k} and {-1..-l} by enumeration.

    The enumeration goes through the automaton's own validity predicate,
    independently of :func:`closed_form_state_count`.
    """
    if k < 0 or l < 0:
        raise ValueError("label counts must be nonnegative")
    key = _ALIASES.get(automaton_id, automaton_id)
    if key == "link-ae" and link_ae_state_count(k, l) > budget:
        raise EnumerationBudgetExceeded(f"link-ae over ({k}, {l}) has more than {budget} states")
    labels = set(range(1, k + 1)) | {-j for j in range(1, l + 1)}
    a = restrict_signature(make_automaton(key), labels)
    return count_with_budget(a.enumerate_states(), budget)
