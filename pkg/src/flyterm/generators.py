"""Seeded random generators for digraphs, terms and annotations.

``gen_random_incidence_term`` builds a clique-width style construction of
the incidence graph of a random digraph under a fixed label budget. Vertex
classes that still wait for arcs keep private labels; classes that are
complete are parked on shared "dead" labels. Arcs are added as soon as
both ends sit in the same part, so every arc is created by exactly one
addition and the result is correct and irredundant by construction.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, replace
from typing import Iterable

from .graphs import Digraph
from .terms import (
    Add,
    AnnotatedSets,
    Empty,
    Leaf,
    Oplus,
    Relab,
    Term,
    annotate,
    iter_leaves,
)

__all__ = [
    "GenConfig",
    "GenerationError",
    "random_digraph",
    "random_hamiltonian_digraph",
    "gen_random_incidence_term",
    "incidence_term_for",
    "gen_random_term",
    "gen_annotations",
    "random_annotated",
]


class GenerationError(RuntimeError):
    """The label budget could not accommodate the sampled graph."""


@dataclass(frozen=True)
class GenConfig:
    seed: int = 0
    n_range: tuple[int, int] = (0, 6)
    m_range: tuple[int, int] = (0, 8)
    k: int = 5
    l: int = 5
    widths: tuple[int, int] = (0, 0)
    loops: bool = True
    parallel: bool = True
    noise: float = 0.1

    def __post_init__(self):
        if self.n_range[0] > self.n_range[1] or self.m_range[0] > self.m_range[1]:
            raise ValueError("empty range in generator configuration")
        if self.n_range[0] < 0 or self.m_range[0] < 0:
            raise ValueError("ranges must be nonnegative")
        if self.k < 1 or self.l < 1:
            raise ValueError("label budgets must be at least 1")

    def with_seed(self, seed: int) -> "GenConfig":
        return replace(self, seed=seed)


def random_digraph(rng: random.Random, cfg: GenConfig) -> Digraph:
    n = rng.randint(*cfg.n_range)
    if n == 0:
        return Digraph(0)
    m = rng.randint(*cfg.m_range)
    edges: list[tuple[int, int]] = []
    attempts = 0
    while len(edges) < m and attempts < 20 * (m + 1):
        attempts += 1
        t, h = rng.randint(1, n), rng.randint(1, n)
        if t == h and not cfg.loops:
            continue
        if (t, h) in edges and not cfg.parallel:
            continue
        edges.append((t, h))
    return Digraph(n, tuple(edges))


def random_hamiltonian_digraph(rng: random.Random, n: int, chords: int, loops: bool = True) -> Digraph:
    """A directed cycle through all vertices in random order plus random extra edges."""
    if n == 0:
        return Digraph(0)
    order = list(range(1, n + 1))
    rng.shuffle(order)
    edges = [(order[i], order[(i + 1) % n]) for i in range(n)]
    for _ in range(chords):
        t, h = rng.randint(1, n), rng.randint(1, n)
        if t == h and not loops:
            continue
        edges.append((t, h))
    rng.shuffle(edges)
    return Digraph(n, tuple(edges))


class _OverBudget(Exception):
    pass


class _Part:
    __slots__ = ("term", "classes", "dead")

    def __init__(self, term: Term, classes: dict[int, set], dead: set[int]):
        self.term = term
        self.classes = classes
        self.dead = dead


class _Builder:
    """Agglomerates the incidence graph's nodes into one term."""

    def __init__(self, g: Digraph, rng: random.Random, k: int, l: int, noise: float):
        self.g, self.rng, self.k, self.l, self.noise = g, rng, k, l, noise
        self.pend_out: dict = {}
        self.pend_in: dict = {}
        for v in range(1, g.n + 1):
            self.pend_out[("v", v)] = set()
            self.pend_in[("v", v)] = set()
        for j, (t, h) in enumerate(g.edges, 1):
            e = ("e", j)
            self.pend_out[e] = {("v", h)}
            self.pend_in[e] = {("v", t)}
            self.pend_out[("v", t)].add(e)
            self.pend_in[("v", h)].add(e)
        self.origin: dict[int, tuple] = {}

    def _labels(self, vertex: bool) -> list[int]:
        return list(range(1, self.k + 1)) if vertex else [-j for j in range(1, self.l + 1)]

    def _pending(self, node) -> tuple[frozenset, frozenset]:
        return frozenset(self.pend_out[node]), frozenset(self.pend_in[node])

    def leaf(self, node) -> _Part:
        label = self.rng.choice(self._labels(node[0] == "v"))
        lf = Leaf(label)
        self.origin[id(lf)] = node
        part = _Part(lf, {label: {node}}, set())
        self._settle(part)
        return part

    def _relab(self, part: _Part, a: int, b: int) -> None:
        part.term = Relab(a, b, part.term)
        members = part.classes.pop(a)
        part.classes.setdefault(b, set()).update(members)
        if a in part.dead:
            part.dead.discard(a)
            part.dead.add(b)

    def _free_label(self, vertex: bool, taken: Iterable[int]) -> int:
        taken = set(taken)
        free = [x for x in self._labels(vertex) if x not in taken]
        if not free:
            raise _OverBudget()
        return self.rng.choice(free)

    def _settle(self, part: _Part) -> None:
        """Park finished classes on dead labels and merge look-alike active classes."""
        rng = self.rng
        for lab in sorted(part.classes, key=abs):
            if lab in part.dead or lab not in part.classes:
                continue
            rep = next(iter(part.classes[lab]))
            if not self.pend_out[rep] and not self.pend_in[rep]:
                same_sort_dead = [d for d in part.dead if (d > 0) == (lab > 0)]
                if same_sort_dead and rng.random() < 0.85:
                    self._relab(part, lab, rng.choice(same_sort_dead))
                else:
                    part.dead.add(lab)
        by_pending: dict = {}
        for lab in sorted(part.classes, key=abs):
            if lab in part.dead:
                continue
            rep = next(iter(part.classes[lab]))
            key = (lab > 0, self._pending(rep))
            by_pending.setdefault(key, []).append(lab)
        for labs in by_pending.values():
            while len(labs) >= 2 and rng.random() < 0.7:
                a = labs.pop()
                self._relab(part, a, labs[0])

    def _maybe_noise(self, part: _Part) -> None:
        rng = self.rng
        if rng.random() >= self.noise:
            return
        present = set(part.classes)
        choice = rng.random()
        if choice < 0.4:
            # addition with an absent label creates nothing
            a = rng.choice(self._labels(True))
            d = rng.choice(self._labels(False))
            if a not in present or d not in present:
                part.term = Add(a, d, part.term) if rng.random() < 0.5 else Add(d, a, part.term)
        elif choice < 0.7:
            absent = [x for x in self._labels(rng.random() < 0.5) if x not in present]
            if absent:
                a = rng.choice(absent)
                b = rng.choice([x for x in self._labels(a > 0) if x != a] or [a])
                if b != a:
                    part.term = Relab(a, b, part.term)
        else:
            part.term = Oplus(part.term, Empty()) if rng.random() < 0.5 else Oplus(Empty(), part.term)

    def merge(self, left: _Part, right: _Part) -> _Part:
        rng = self.rng
        taken = set(left.classes) | set(right.classes)
        for lab in sorted(right.classes, key=abs):
            if lab in left.classes:
                if lab in left.dead and lab in right.dead:
                    continue
                new = self._free_label(lab > 0, taken)
                taken.add(new)
                self._relab(right, lab, new)
            elif lab in right.dead:
                options = [d for d in left.dead if (d > 0) == (lab > 0) and d not in right.classes]
                if options and rng.random() < 0.5:
                    self._relab(right, lab, rng.choice(options))
        term = Oplus(left.term, right.term) if rng.random() < 0.5 else Oplus(right.term, left.term)
        classes = {lab: set(m) for lab, m in left.classes.items()}
        for lab, m in right.classes.items():
            classes.setdefault(lab, set()).update(m)
        part = _Part(term, classes, left.dead | right.dead)
        pairs = [(a, b) for a in part.classes for b in part.classes if (a > 0) != (b > 0)]
        rng.shuffle(pairs)
        for a, b in pairs:
            if a in part.dead or b in part.dead:
                continue
            rep_a = next(iter(part.classes[a]))
            rep_b = next(iter(part.classes[b]))
            if rep_b in self.pend_out[rep_a]:
                part.term = Add(a, b, part.term)
                for x in part.classes[a]:
                    self.pend_out[x] -= part.classes[b]
                for y in part.classes[b]:
                    self.pend_in[y] -= part.classes[a]
        self._maybe_noise(part)
        self._settle(part)
        return part

    def order(self) -> list:
        """Random breadth-first order over the incidence graph, with jumps."""
        nodes = list(self.pend_out)
        if not nodes:
            return []
        nbrs = {x: set(self.pend_out[x]) | set(self.pend_in[x]) for x in nodes}
        rng = self.rng
        seen: set = set()
        out: list = []
        frontier: list = []
        remaining = set(nodes)
        while remaining:
            if not frontier or rng.random() < 0.1:
                start = rng.choice(sorted(remaining))
                frontier.append(start)
            x = frontier.pop(rng.randrange(len(frontier)) if rng.random() < 0.3 else 0)
            if x in seen:
                continue
            seen.add(x)
            remaining.discard(x)
            out.append(x)
            for y in sorted(nbrs[x]):
                if y not in seen:
                    frontier.append(y)
        return out

    def build(self) -> Term:
        rng = self.rng
        stack: list[_Part] = []
        for node in self.order():
            stack.append(self.leaf(node))
            while len(stack) >= 2 and rng.random() < 0.65:
                right = stack.pop()
                stack.append(self.merge(stack.pop(), right))
        while len(stack) >= 2:
            right = stack.pop()
            stack.append(self.merge(stack.pop(), right))
        if not stack:
            return Empty()
        part = stack[0]
        if any(self.pend_out.values()) or any(self.pend_in.values()):
            raise AssertionError("arcs left pending after the final merge")
        return part.term


def incidence_term_for(g: Digraph, rng: random.Random, k: int = 5, l: int = 5, noise: float = 0.1,
                       tries: int = 50) -> tuple[Term, Digraph]:
    """Random correct irredundant term for the incidence graph of ``g``.

    Returns the term and ``g`` renumbered to match the order in which
    :func:`graph_of_incidence` recovers vertices and edges from the term.
    """
    for _ in range(tries):
        builder = _Builder(g, rng, k, l, noise)
        try:
            t = builder.build()
        except _OverBudget:
            continue
        where = {}
        for pos, leaf in iter_leaves(t):
            where[builder.origin[id(leaf)]] = pos
        vpos = sorted(where[("v", v)] for v in range(1, g.n + 1))
        epos = sorted(where[("e", j)] for j in range(1, g.m + 1))
        vrank = {p: i + 1 for i, p in enumerate(vpos)}
        vmap = {v: vrank[where[("v", v)]] for v in range(1, g.n + 1)}
        erank = {p: i for i, p in enumerate(epos)}
        order = sorted(range(g.m), key=lambda i: erank[where[("e", i + 1)]])
        return t, g.renumber(vmap, order)
    raise GenerationError(f"could not encode a graph with {g.n} vertices and {g.m} edges in ({k}, {l}) labels")


def gen_random_incidence_term(cfg: GenConfig, rng: random.Random | None = None) -> tuple[Term, Digraph]:
    """Seeded random (term, digraph) with the term correct and irredundant."""
    from .oracles import oracle_correct, oracle_irredundant

    rng = rng or random.Random(cfg.seed)
    last: Exception | None = None
    for _ in range(20):
        g = random_digraph(rng, cfg)
        try:
            t, g2 = incidence_term_for(g, rng, cfg.k, cfg.l, cfg.noise)
        except GenerationError as exc:
            last = exc
            continue
        if not (oracle_correct(t) and oracle_irredundant(t)):
            raise AssertionError("generator produced an incorrect or redundant term")
        return t, g2
    raise GenerationError(f"label budget too small: {last}")


def gen_random_term(cfg: GenConfig, size: int | None = None, rng: random.Random | None = None) -> Term:
    """Arbitrary term (not necessarily correct or irredundant) over the label budget.

    Operations mostly pick labels present in the subterm they wrap, and an
    addition is sometimes repeated, so redundant and incorrect terms both
    show up often.
    """
    rng = rng or random.Random(cfg.seed)
    size = size if size is not None else rng.randint(1, 25)
    cs = list(range(1, cfg.k + 1))
    ds = [-j for j in range(1, cfg.l + 1)]
    parts: list[Term] = []
    labs: list[set[int]] = []

    def pick(pool: list[int], present: set[int]) -> int:
        here = [x for x in pool if x in present]
        return rng.choice(here) if here and rng.random() < 0.8 else rng.choice(pool)

    for _ in range(size):
        r = rng.random()
        if not parts or r < 0.3:
            if rng.random() < 0.05:
                parts.append(Empty())
                labs.append(set())
            else:
                lab = rng.choice(cs if rng.random() < 0.5 else ds)
                parts.append(Leaf(lab))
                labs.append({lab})
        elif r < 0.5 and len(parts) >= 2:
            i = rng.randrange(len(parts))
            x, lx = parts.pop(i), labs.pop(i)
            j = rng.randrange(len(parts))
            y, ly = parts.pop(j), labs.pop(j)
            parts.append(Oplus(x, y))
            labs.append(lx | ly)
        elif r < 0.65:
            i = rng.randrange(len(parts))
            pool = cs if rng.random() < 0.5 else ds
            if len(pool) >= 2:
                a = pick(pool, labs[i])
                b = rng.choice([x for x in pool if x != a])
                parts[i] = Relab(a, b, parts[i])
                if a in labs[i]:
                    labs[i] = (labs[i] - {a}) | {b}
        else:
            i = rng.randrange(len(parts))
            a, d = pick(cs, labs[i]), pick(ds, labs[i])
            parts[i] = Add(a, d, parts[i]) if rng.random() < 0.5 else Add(d, a, parts[i])
            if rng.random() < 0.15:
                parts[i] = Add(parts[i].symbol[1], parts[i].symbol[2], parts[i])
    t = parts[0]
    for p in parts[1:]:
        t = Oplus(t, p)
    return t


def gen_annotations(t: Term, widths: tuple[int, int], seed: int | None = None, mode: str = "uniform") -> AnnotatedSets:
    """Random vertex and edge sets over the leaves of ``t``.

    ``seed=None`` selects every leaf in every set. ``mode`` is ``uniform``
    (each leaf independently with probability 1/2), ``sparse`` (zero to two
    leaves per set) or ``mixed`` (a random choice per set).
    """
    p, m = widths
    vleaves = [pos for pos, leaf in iter_leaves(t) if leaf.symbol[1] > 0]
    eleaves = [pos for pos, leaf in iter_leaves(t) if leaf.symbol[1] < 0]
    if seed is None:
        return AnnotatedSets.of([vleaves] * p, [eleaves] * m)
    rng = random.Random(seed)

    def draw(pool: list[bytes]) -> frozenset[bytes]:
        how = mode if mode != "mixed" else rng.choice(["uniform", "sparse", "sparse"])
        if how == "uniform":
            return frozenset(x for x in pool if rng.random() < 0.5)
        if how == "sparse":
            if not pool:
                return frozenset()
            return frozenset(rng.sample(pool, min(len(pool), rng.choice([0, 1, 1, 1, 2]))))
        raise ValueError(f"unknown annotation mode {mode!r}")

    return AnnotatedSets.of([draw(vleaves) for _ in range(p)], [draw(eleaves) for _ in range(m)])


def random_annotated(t: Term, widths: tuple[int, int], rng: random.Random, mode: str = "mixed") -> Term:
    if widths == (0, 0):
        return t
    return annotate(t, gen_annotations(t, widths, rng.randrange(2**31), mode))
