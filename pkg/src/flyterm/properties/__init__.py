"""Concrete automata for graph properties of incidence terms."""

from .adjacency import EdgAutomaton, IncAutomaton, make_edg, make_inc
from .core import CorrectnessAutomaton, IrredundancyChecker, make_ct, make_irredundancy_checker
from .hamilton import DirHam, HamCore, make_dirham, make_ham_core
from .links import (
    LinkAllAll,
    LinkAllSome,
    LinkSomeAll,
    LinkSomeSome,
    link_ae_state_bound,
    link_ae_state_count,
    make_link,
)
from .registry import (
    REGISTRY,
    AutomatonInfo,
    closed_form_state_count,
    declared_state_count,
    make_automaton,
    make_composed_edg,
    make_inc_product,
    make_subgraph,
)

__all__ = [
    "EdgAutomaton",
    "IncAutomaton",
    "CorrectnessAutomaton",
    "IrredundancyChecker",
    "DirHam",
    "HamCore",
    "LinkAllAll",
    "LinkAllSome",
    "LinkSomeAll",
    "LinkSomeSome",
    "REGISTRY",
    "AutomatonInfo",
    "make_edg",
    "make_inc",
    "make_ct",
    "make_irredundancy_checker",
    "make_dirham",
    "make_ham_core",
    "make_link",
    "make_automaton",
    "make_composed_edg",
    "make_inc_product",
    "make_subgraph",
    "declared_state_count",
    "closed_form_state_count",
    "link_ae_state_count",
    "link_ae_state_bound",
]
