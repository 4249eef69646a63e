"""Directed multigraphs, their text format, and the link to incidence terms.

A :class:`Digraph` has vertices ``1..n`` and edges ``1..m`` given as
(tail, head) pairs; loops and parallel edges are allowed. The incidence
graph has one vertex per vertex and per edge of the digraph, with arcs
tail -> edge -> head.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .terms import Add, BipartiteStruct, Leaf, Term, oplus_all

__all__ = [
    "Digraph",
    "GraphFormatError",
    "NotIncidence",
    "parse_graph",
    "format_graph",
    "graph_of_incidence",
    "naive_incidence_term",
    "isomorphic",
    "small_digraphs",
]


class GraphFormatError(ValueError):
    pass


class NotIncidence(ValueError):
    """An edge-vertex does not have exactly one tail and one head."""

    def __init__(self, position: bytes, indegree: int, outdegree: int):
        from .terms import format_position

        super().__init__(
            f"edge-vertex at {format_position(position) or 'root'!r} has indegree {indegree} and outdegree {outdegree}"
        )
        self.position = position
        self.indegree = indegree
        self.outdegree = outdegree


@dataclass(frozen=True)
class Digraph:
    n: int
    edges: tuple[tuple[int, int], ...] = ()
    vertex_origin: tuple[bytes, ...] | None = field(default=None, compare=False, repr=False)
    edge_origin: tuple[bytes, ...] | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("vertex count must be nonnegative")
        edges = tuple((int(x), int(y)) for x, y in self.edges)
        object.__setattr__(self, "edges", edges)
        for t, h in edges:
            if not (1 <= t <= self.n and 1 <= h <= self.n):
                raise ValueError(f"edge {t}->{h} has an endpoint outside 1..{self.n}")

    @property
    def m(self) -> int:
        return len(self.edges)

    def edge_records(self) -> list[tuple[int, int, int]]:
        return [(i + 1, t, h) for i, (t, h) in enumerate(self.edges)]

    def has_edge(self, tail: int, head: int) -> bool:
        return (tail, head) in self.edges

    def successors(self, v: int) -> set[int]:
        return {h for t, h in self.edges if t == v}

    def renumber(self, vertex_map: dict[int, int], edge_order: Iterable[int]) -> "Digraph":
        """Rename vertices through ``vertex_map`` and list edges in ``edge_order`` (0-based)."""
        return Digraph(self.n, tuple((vertex_map[self.edges[i][0]], vertex_map[self.edges[i][1]]) for i in edge_order))


def parse_graph(text: str) -> Digraph:
    """Read ``p digraph <n> <m>`` followed by ``a <edge-id> <tail> <head>`` lines."""
    header = None
    records: dict[int, tuple[int, int]] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        try:
            if parts[0] == "p":
                if header is not None:
                    raise GraphFormatError(f"line {lineno}: second header")
                if len(parts) != 4 or parts[1] != "digraph":
                    raise GraphFormatError(f"line {lineno}: expected 'p digraph <n> <m>'")
                header = (int(parts[2]), int(parts[3]))
            elif parts[0] == "a":
                if header is None:
                    raise GraphFormatError(f"line {lineno}: edge before header")
                if len(parts) != 4:
                    raise GraphFormatError(f"line {lineno}: expected 'a <edge-id> <tail> <head>'")
                eid, t, h = int(parts[1]), int(parts[2]), int(parts[3])
                if eid in records:
                    raise GraphFormatError(f"line {lineno}: edge id {eid} repeated")
                records[eid] = (t, h)
            else:
                raise GraphFormatError(f"line {lineno}: unknown record {parts[0]!r}")
        except ValueError as exc:
            if isinstance(exc, GraphFormatError):
                raise
            raise GraphFormatError(f"line {lineno}: {exc}") from None
    if header is None:
        raise GraphFormatError("missing 'p digraph' header")
    n, m = header
    if sorted(records) != list(range(1, m + 1)):
        raise GraphFormatError(f"edge ids must be exactly 1..{m}")
    try:
        return Digraph(n, tuple(records[i] for i in range(1, m + 1)))
    except ValueError as exc:
        raise GraphFormatError(str(exc)) from None


def format_graph(g: Digraph) -> str:
    lines = [f"p digraph {g.n} {g.m}"]
    lines += [f"a {i} {t} {h}" for i, t, h in g.edge_records()]
    return "\n".join(lines) + "\n"


def graph_of_incidence(s: BipartiteStruct) -> Digraph:
    """Recover the digraph whose incidence graph is ``s``.

    Vertices and edges are numbered in the order of their positions; the
    positions are kept in ``vertex_origin`` and ``edge_origin``.
    """
    vertices = sorted(p for p, lab in s.label.items() if lab > 0)
    edge_vertices = sorted(p for p, lab in s.label.items() if lab < 0)
    vid = {p: i + 1 for i, p in enumerate(vertices)}
    tails: dict[bytes, list[bytes]] = {e: [] for e in edge_vertices}
    heads: dict[bytes, list[bytes]] = {e: [] for e in edge_vertices}
    for x, y in s.edges:
        if y in tails:
            tails[y].append(x)
        if x in heads:
            heads[x].append(y)
    edges = []
    for e in edge_vertices:
        if len(tails[e]) != 1 or len(heads[e]) != 1:
            raise NotIncidence(e, len(tails[e]), len(heads[e]))
        edges.append((vid[tails[e][0]], vid[heads[e][0]]))
    return Digraph(len(vertices), tuple(edges), tuple(vertices), tuple(edge_vertices))


def naive_incidence_term(g: Digraph) -> Term:
    """One label per vertex (i) and per edge (-j), then one addition per arc."""
    t = oplus_all([Leaf(v) for v in range(1, g.n + 1)] + [Leaf(-j) for j in range(1, g.m + 1)])
    for j, (tail, head) in enumerate(g.edges, 1):
        t = Add(tail, -j, t)
        t = Add(-j, head, t)
    return t


def isomorphic(g1: Digraph, g2: Digraph) -> bool:
    """Brute-force isomorphism test for small multigraphs with loops."""
    if g1.n != g2.n or g1.m != g2.m:
        return False
    target = Counter(g2.edges)

    def signature(g: Digraph) -> dict[int, tuple[int, int, int]]:
        out = Counter(t for t, h in g.edges if t != h)
        inn = Counter(h for t, h in g.edges if t != h)
        loops = Counter(t for t, h in g.edges if t == h)
        return {v: (out[v], inn[v], loops[v]) for v in range(1, g.n + 1)}

    s1, s2 = signature(g1), signature(g2)
    if sorted(s1.values()) != sorted(s2.values()):
        return False
    order = list(range(1, g1.n + 1))
    candidates = {v: [w for w in order if s2[w] == s1[v]] for v in order}
    used: set[int] = set()
    mapping: dict[int, int] = {}

    def extend(i: int) -> bool:
        if i == len(order):
            return Counter((mapping[t], mapping[h]) for t, h in g1.edges) == target
        v = order[i]
        for w in candidates[v]:
            if w not in used:
                used.add(w)
                mapping[v] = w
                if extend(i + 1):
                    return True
                used.discard(w)
        return False

    return extend(0)


def small_digraphs(max_vertices: int = 3, max_edges: int = 3) -> Iterator[Digraph]:
    """Every digraph on 0..max_vertices vertices with 0..max_edges edges.

    Loops and parallel edges are included. Edge lists are multisets of
    ordered pairs, so isomorphic copies are not removed.
    """
    for n in range(max_vertices + 1):
        pairs = [(x, y) for x in range(1, n + 1) for y in range(1, n + 1)]
        for m in range(max_edges + 1):
            if m and not pairs:
                break
            for combo in itertools.combinations_with_replacement(pairs, m):
                yield Digraph(n, combo)
