"""Tree-decompositions and their compilation into incidence terms.

The compiled term uses two vertex labels and at most ``2k+3`` edge labels
for a decomposition of width ``k``:

* vertex label 1 marks the vertex being introduced, label 2 every older one;
* edge label -1 marks an edge-vertex with both incidences in place;
* edge label ``-(2+2s)`` marks an edge-vertex waiting for its head, which
  sits in bag slot ``s``; ``-(3+2s)`` waits for its tail in slot ``s``.

Slots range over ``0..k``. Each vertex is created at the topmost bag that
contains it and each edge at the deeper of its endpoints' topmost bags,
where the other endpoint is still addressable through its slot.
"""

from __future__ import annotations

import random
from collections import defaultdict
from dataclasses import dataclass, field

from .graphs import Digraph, graph_of_incidence
from .terms import Add, Empty, Leaf, Oplus, Relab, Term, evaluate, iter_leaves

__all__ = [
    "TreeDecomposition",
    "TDValidationError",
    "parse_td",
    "format_td",
    "td_to_term",
    "Compiled",
    "reconstruction_matches",
    "gen_partial_ktree",
    "cycle_digraph",
    "path_digraph",
    "fan_decomposition",
    "DONE",
    "wait_label",
    "LINEAR_CONSTANT",
]

DONE = -1
NEW, OLD = 1, 2
# term nodes per vertex, edge or bag, at most
LINEAR_CONSTANT = 5


def wait_label(slot: int, awaiting_head: bool) -> int:
    return -(2 + 2 * slot) if awaiting_head else -(3 + 2 * slot)


class TDValidationError(ValueError):
    """Malformed decomposition; ``invariant`` names the broken rule."""

    INVARIANTS = ("syntax", "coverage", "edge-cover", "connectivity", "width", "tree")

    def __init__(self, invariant: str, message: str):
        assert invariant in self.INVARIANTS
        super().__init__(f"{invariant}: {message}")
        self.invariant = invariant


@dataclass(frozen=True)
class TreeDecomposition:
    bags: dict[int, frozenset[int]]
    tree_edges: tuple[tuple[int, int], ...]
    width: int
    n_vertices: int

    def neighbours(self) -> dict[int, list[int]]:
        nb: dict[int, list[int]] = {b: [] for b in self.bags}
        for a, b in self.tree_edges:
            nb[a].append(b)
            nb[b].append(a)
        return nb

    def validate(self, g: Digraph | None = None) -> None:
        """Raise :class:`TDValidationError` on the first broken invariant."""
        bags = self.bags
        if len(self.tree_edges) != max(len(bags) - 1, 0):
            raise TDValidationError("tree", f"{len(bags)} bags need {max(len(bags) - 1, 0)} tree edges, got {len(self.tree_edges)}")
        for a, b in self.tree_edges:
            if a not in bags or b not in bags:
                raise TDValidationError("tree", f"tree edge {a}-{b} names an unknown bag")
        if bags:
            nb = self.neighbours()
            start = next(iter(bags))
            seen = {start}
            todo = [start]
            while todo:
                for c in nb[todo.pop()]:
                    if c not in seen:
                        seen.add(c)
                        todo.append(c)
            if len(seen) != len(bags):
                raise TDValidationError("tree", "bags do not form a connected tree")
        actual = max((len(b) for b in bags.values()), default=0)
        if actual != self.width + 1 and not (not bags and self.width <= 0):
            raise TDValidationError("width", f"declared bag size {self.width + 1} but largest bag has {actual}")
        n = self.n_vertices if g is None else g.n
        if g is not None and g.n != self.n_vertices:
            raise TDValidationError("coverage", f"decomposition covers {self.n_vertices} vertices, graph has {g.n}")
        occurs: dict[int, list[int]] = defaultdict(list)
        for bid, bag in bags.items():
            for v in bag:
                if not 1 <= v <= n:
                    raise TDValidationError("coverage", f"bag {bid} names vertex {v} outside 1..{n}")
                occurs[v].append(bid)
        missing = [v for v in range(1, n + 1) if v not in occurs]
        if missing:
            raise TDValidationError("coverage", f"vertex {missing[0]} is in no bag")
        if g is not None:
            for t, h in g.edges:
                if not any(t in bags[b] for b in occurs[h]):
                    raise TDValidationError("edge-cover", f"no bag contains both ends of {t}->{h}")
        nb = self.neighbours()
        for v, where in occurs.items():
            inside = set(where)
            seen = {where[0]}
            todo = [where[0]]
            while todo:
                for c in nb[todo.pop()]:
                    if c in inside and c not in seen:
                        seen.add(c)
                        todo.append(c)
            if len(seen) != len(inside):
                raise TDValidationError("connectivity", f"bags holding vertex {v} are not connected")


def parse_td(text: str, graph: Digraph | None = None) -> TreeDecomposition:
    """Read the ``s td <bags> <max-bag-size> <vertices>`` format and validate it."""
    header = None
    bags: dict[int, frozenset[int]] = {}
    edges: list[tuple[int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        parts = raw.split()
        if not parts or parts[0] == "c":
            continue
        try:
            nums = [int(x) for x in parts[2:]] if parts[0] == "s" else [int(x) for x in parts[1:]] if parts[0] == "b" else [int(x) for x in parts]
        except ValueError:
            raise TDValidationError("syntax", f"line {lineno}: expected integers") from None
        if parts[0] == "s":
            if header is not None or len(parts) != 5 or parts[1] != "td":
                raise TDValidationError("syntax", f"line {lineno}: expected one 's td <bags> <max-bag-size> <vertices>'")
            header = tuple(nums)
        elif header is None:
            raise TDValidationError("syntax", f"line {lineno}: content before the 's td' header")
        elif parts[0] == "b":
            if not nums:
                raise TDValidationError("syntax", f"line {lineno}: bag without an id")
            bid = nums[0]
            if bid in bags or not 1 <= bid <= header[0]:
                raise TDValidationError("syntax", f"line {lineno}: bad or repeated bag id {bid}")
            bags[bid] = frozenset(nums[1:])
        else:
            if len(nums) != 2:
                raise TDValidationError("syntax", f"line {lineno}: expected a tree edge '<bag> <bag>'")
            edges.append((nums[0], nums[1]))
    if header is None:
        raise TDValidationError("syntax", "missing 's td' header")
    if len(bags) != header[0]:
        raise TDValidationError("syntax", f"header announces {header[0]} bags, found {len(bags)}")
    td = TreeDecomposition(bags, tuple(edges), header[1] - 1, header[2])
    td.validate(graph)
    return td


def format_td(td: TreeDecomposition) -> str:
    lines = [f"s td {len(td.bags)} {td.width + 1} {td.n_vertices}"]
    for bid in sorted(td.bags):
        lines.append(" ".join(["b", str(bid)] + [str(v) for v in sorted(td.bags[bid])]))
    lines += [f"{a} {b}" for a, b in td.tree_edges]
    return "\n".join(lines) + "\n"


@dataclass
class Compiled:
    """A compiled term with its leaf correspondence.

    ``leaf_origin[i]`` is ``("v", vertex)`` or ``("e", edge_index)`` for the
    i-th leaf from the left; edge indexes are 1-based into ``g.edges``.
    """

    term: Term
    leaf_origin: list[tuple[str, int]]
    vertex_labels: frozenset[int] = field(default_factory=frozenset)
    edge_labels: frozenset[int] = field(default_factory=frozenset)

    def budget(self, width: int) -> dict:
        return {"C_used": len(self.vertex_labels), "D_used": len(self.edge_labels), "D_budget": 2 * width + 3}


def _root_order(td: TreeDecomposition, root: int) -> tuple[list[int], dict[int, int | None]]:
    nb = td.neighbours()
    parent: dict[int, int | None] = {root: None}
    order = [root]
    i = 0
    while i < len(order):
        b = order[i]
        i += 1
        for c in sorted(nb[b]):
            if c not in parent:
                parent[c] = b
                order.append(c)
    return order, parent


def td_to_term(g: Digraph, td: TreeDecomposition, validate: bool = True) -> Compiled:
    """Compile ``g`` and a decomposition of it into a correct irredundant term.

    Runs in time linear in the size of ``g`` plus the number of bags for a
    fixed width, and the term has at most ``LINEAR_CONSTANT`` nodes per
    vertex, edge and bag.
    """
    if validate:
        td.validate(g)
    if not td.bags:
        return Compiled(Empty(), [])
    root = min(td.bags)
    order, parent = _root_order(td, root)
    depth = {root: 0}
    for b in order[1:]:
        depth[b] = depth[parent[b]] + 1

    # slots top-down: inherited vertices keep theirs, new ones take the smallest free
    slot: dict[int, int] = {}
    top: dict[int, int] = {}
    for b in order:
        bag = td.bags[b]
        taken = {slot[v] for v in bag if v in slot}
        free = (s for s in range(td.width + 1) if s not in taken)
        for v in sorted(bag):
            if v not in slot:
                slot[v] = next(free)
                top[v] = b

    # each edge is created with the endpoint whose top bag is deeper
    rank = {v: (depth[top[v]], -v) for v in top}
    owned: dict[int, list[int]] = defaultdict(list)
    for j, (t, h) in enumerate(g.edges):
        owner = t if rank[t] >= rank[h] else h
        owned[owner].append(j)
    forgotten: dict[int, list[int]] = defaultdict(list)
    for v, b in top.items():
        forgotten[b].append(v)

    # per bag result: (term, leaf rope, present D labels)
    results: dict[int, tuple[Term | None, object, set[int]]] = {}
    children: dict[int, list[int]] = defaultdict(list)
    for b in order[1:]:
        children[parent[b]].append(b)
    used_d: set[int] = set()
    used_c: set[int] = set()

    for b in reversed(order):
        acc: Term | None = None
        rope: object = None
        present: set[int] = set()
        for c in children[b]:
            ct, cr, cp = results.pop(c)
            if ct is not None:
                acc = ct if acc is None else Oplus(acc, ct)
                rope = cr if rope is None else (rope, cr)
                present |= cp
        for v in sorted(forgotten[b]):
            piece: Term = Leaf(NEW)
            prope: object = ("v", v)
            groups: dict[int, int] = {}
            loops = [j for j in owned[v] if g.edges[j][0] == g.edges[j][1]]
            for j in loops:
                piece = Oplus(piece, Leaf(DONE))
                prope = (prope, ("e", j + 1))
            if loops:
                # one pair of additions closes every loop at once
                piece = Add(DONE, NEW, Add(NEW, DONE, piece))
                used_d.add(DONE)
            for j in owned[v]:
                t, h = g.edges[j]
                if t == h:
                    continue
                other = h if t == v else t
                lab = wait_label(slot[other], awaiting_head=(t == v))
                groups[lab] = t
                piece = Oplus(piece, Leaf(lab))
                prope = (prope, ("e", j + 1))
                used_d.add(lab)
            for lab in sorted(groups, reverse=True):
                piece = Add(NEW, lab, piece) if groups[lab] == v else Add(lab, NEW, piece)
            piece_present = set(groups)
            if loops:
                piece_present.add(DONE)
            acc = piece if acc is None else Oplus(acc, piece)
            rope = prope if rope is None else (rope, prope)
            present |= piece_present
            used_c.add(NEW)
            head_wait, tail_wait = wait_label(slot[v], True), wait_label(slot[v], False)
            if head_wait in present:
                acc = Relab(head_wait, DONE, Add(head_wait, NEW, acc))
                present.discard(head_wait)
                present.add(DONE)
                used_d.add(DONE)
            if tail_wait in present:
                acc = Relab(tail_wait, DONE, Add(NEW, tail_wait, acc))
                present.discard(tail_wait)
                present.add(DONE)
                used_d.add(DONE)
            acc = Relab(NEW, OLD, acc)
            used_c.add(OLD)
        results[b] = (acc, rope, present)

    term, rope, present = results[root]
    if term is None:
        term = Empty()
    leaf_origin: list[tuple[str, int]] = []
    stack = [rope] if rope is not None else []
    while stack:
        r = stack.pop()
        if isinstance(r[0], str):
            leaf_origin.append(r)
        else:
            stack.append(r[1])
            stack.append(r[0])
    return Compiled(term, leaf_origin, frozenset(used_c), frozenset(used_d))


def reconstruction_matches(g: Digraph, compiled: Compiled) -> bool:
    """The term's value, read through the leaf correspondence, is exactly ``g``."""
    positions = [p for p, _ in iter_leaves(compiled.term)]
    positions.sort()
    if len(positions) != len(compiled.leaf_origin):
        return False
    origin = dict(zip(positions, compiled.leaf_origin))
    rec = graph_of_incidence(evaluate(compiled.term))
    if rec.n != g.n or rec.m != g.m:
        return False
    vmap = {}
    for i, p in enumerate(rec.vertex_origin or (), 1):
        kind, v = origin[p]
        if kind != "v":
            return False
        vmap[i] = v
    for (t, h), p in zip(rec.edges, rec.edge_origin or ()):
        kind, j = origin[p]
        if kind != "e" or g.edges[j - 1] != (vmap[t], vmap[h]):
            return False
    return True


def gen_partial_ktree(
    k: int, n: int, density: float = 0.6, seed: int = 0, loops: float = 0.0, antiparallel: float = 0.0
) -> tuple[Digraph, TreeDecomposition]:
    """Random oriented subgraph of a random k-tree, with its decomposition.

    Vertices join one at a time, each adjacent to an existing k-clique.
    Every k-tree edge survives with probability ``density`` and gets a
    random orientation; ``antiparallel`` adds the reverse edge too and
    ``loops`` adds a loop per vertex, each with the given probability.
    """
    if k < 1 or n < 1:
        raise ValueError("need k >= 1 and n >= 1")
    rng = random.Random(seed)
    ids = list(range(1, n + 1))
    rng.shuffle(ids)
    first = ids[: min(n, k + 1)]
    bags: dict[int, frozenset[int]] = {1: frozenset(first)}
    tree_edges: list[tuple[int, int]] = []
    pairs = [(first[i], first[j]) for i in range(len(first)) for j in range(i + 1, len(first))]
    cliques: list[tuple[frozenset[int], int]] = []
    if len(first) == k + 1:
        cliques = [(frozenset(first) - {v}, 1) for v in first]
    for v in ids[k + 1 :]:
        clique, home = cliques[rng.randrange(len(cliques))]
        bid = len(bags) + 1
        bag = clique | {v}
        bags[bid] = bag
        tree_edges.append((home, bid))
        pairs += [(u, v) for u in sorted(clique)]
        cliques += [(bag - {u}, bid) for u in clique]
    edges: list[tuple[int, int]] = []
    for u, v in pairs:
        if rng.random() < density:
            e = (u, v) if rng.random() < 0.5 else (v, u)
            edges.append(e)
            if rng.random() < antiparallel:
                edges.append((e[1], e[0]))
    for v in range(1, n + 1):
        if rng.random() < loops:
            edges.append((v, v))
    rng.shuffle(edges)
    g = Digraph(n, tuple(edges))
    td = TreeDecomposition(bags, tuple(tree_edges), len(first) - 1, n)
    td.validate(g)
    return g, td


def cycle_digraph(n: int) -> Digraph:
    return Digraph(n, tuple((i, i % n + 1) for i in range(1, n + 1)))


def path_digraph(n: int) -> Digraph:
    return Digraph(n, tuple((i, i + 1) for i in range(1, n)))


def fan_decomposition(n: int) -> TreeDecomposition:
    """Path of bags {1, i, i+1}; width 2, and covers both the n-cycle and the n-path."""
    if n <= 3:
        return TreeDecomposition({1: frozenset(range(1, n + 1))} if n else {}, (), max(n - 1, 0) if n else -1, n)
    bags = {i - 1: frozenset({1, i, i + 1}) for i in range(2, n)}
    edges = tuple((i, i + 1) for i in range(1, n - 2))
    return TreeDecomposition(bags, edges, 2, n)
