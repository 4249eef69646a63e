"""Fly-automata for checking graph properties on clique-width terms of incidence graphs."""

__version__ = "0.1.0"
