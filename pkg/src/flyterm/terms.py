"""Two-sorted clique-width terms over vertex labels and edge labels.

Labels are nonzero integers. Positive labels name vertex classes (sort C)
and negative labels name edge classes (sort D). A term is built from the
empty graph, labeled leaves, disjoint union, relabelling and directed edge
addition. Evaluating a term gives a bipartite directed structure whose
vertices are the positions of the leaves.

Terms can be very deep (a path of 10^5 vertices produces a term of depth
of the same order), so every traversal in this module is iterative.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Mapping, Sequence

__all__ = [
    "Term",
    "Empty",
    "Leaf",
    "Oplus",
    "Relab",
    "Add",
    "TermError",
    "TermSyntaxError",
    "BipartiteStruct",
    "AnnotatedSets",
    "is_vertex_label",
    "parse_term",
    "serialize_term",
    "fold",
    "fold_positions",
    "iter_nodes",
    "iter_leaves",
    "leaf_positions",
    "term_size",
    "term_depth",
    "labels_of",
    "widths_of",
    "evaluate",
    "annotate",
    "annotate_leaves",
    "annotations_of",
    "strip_annotations",
    "restrict_to",
    "relabel_term",
    "make_irredundant",
    "subterm_at",
    "format_position",
    "parse_position",
    "oplus_all",
]


class TermError(ValueError):
    """Raised for sort violations and malformed terms."""


class TermSyntaxError(TermError):
    """Raised by the parser, carrying a 1-based line and column."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{line}:{column}: {message}")
        self.line = line
        self.column = column


def is_vertex_label(label: int) -> bool:
    return label > 0


def _check_label(label: object) -> int:
    if isinstance(label, bool) or not isinstance(label, int) or label == 0:
        raise TermError(f"label must be a nonzero integer, got {label!r}")
    return label


_BITS = re.compile(r"[01]*\Z")


class Term:
    """Immutable term node.

    ``symbol`` is a hashable tuple naming the operation: ``("empty",)``,
    ``("leaf", label, bits)``, ``("oplus",)``, ``("relab", a, b)`` or
    ``("add", a, b)``. Equality is structural and the hash is computed once
    at construction from the children's cached hashes.
    """

    __slots__ = ("symbol", "children", "_hash")

    symbol: tuple
    children: tuple

    def _finish(self) -> None:
        self._hash = hash((self.symbol, tuple(c._hash for c in self.children)))

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, Term):
            return NotImplemented
        stack = [(self, other)]
        while stack:
            x, y = stack.pop()
            if x is y:
                continue
            if x._hash != y._hash or x.symbol != y.symbol:
                return False
            stack.extend(zip(x.children, y.children))
        return True

    def __ne__(self, other: object) -> bool:
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    def __repr__(self) -> str:
        text = serialize_term(self) if term_size(self, limit=40) <= 40 else None
        if text is None:
            return f"<{type(self).__name__} term, {term_size(self)} nodes>"
        return f"Term({text!r})"

    @property
    def kind(self) -> str:
        return self.symbol[0]

    def __reduce__(self):
        # pickling goes through the text form so deep terms do not recurse
        return (parse_term, (serialize_term(self),))


class Empty(Term):
    __slots__ = ()

    def __init__(self):
        self.symbol = ("empty",)
        self.children = ()
        self._finish()


class Leaf(Term):
    __slots__ = ()

    def __init__(self, label: int, bits: str = ""):
        _check_label(label)
        if not isinstance(bits, str) or not _BITS.match(bits):
            raise TermError(f"annotation must be a 0/1 string, got {bits!r}")
        self.symbol = ("leaf", label, bits)
        self.children = ()
        self._finish()

    @property
    def label(self) -> int:
        return self.symbol[1]

    @property
    def bits(self) -> str:
        return self.symbol[2]


class Oplus(Term):
    __slots__ = ()

    def __init__(self, left: Term, right: Term):
        if not isinstance(left, Term) or not isinstance(right, Term):
            raise TermError("oplus needs two terms")
        self.symbol = ("oplus",)
        self.children = (left, right)
        self._finish()


class Relab(Term):
    __slots__ = ()

    def __init__(self, a: int, b: int, child: Term):
        _check_label(a)
        _check_label(b)
        if is_vertex_label(a) != is_vertex_label(b):
            raise TermError(f"relab {a}->{b} crosses sorts")
        if a == b:
            raise TermError(f"relab {a}->{b} is the identity")
        if not isinstance(child, Term):
            raise TermError("relab needs a term")
        self.symbol = ("relab", a, b)
        self.children = (child,)
        self._finish()


class Add(Term):
    __slots__ = ()

    def __init__(self, a: int, b: int, child: Term):
        _check_label(a)
        _check_label(b)
        if is_vertex_label(a) == is_vertex_label(b):
            raise TermError(f"add {a} {b} requires labels of opposite sorts")
        if not isinstance(child, Term):
            raise TermError("add needs a term")
        self.symbol = ("add", a, b)
        self.children = (child,)
        self._finish()


def node_from_symbol(symbol: tuple, children: Sequence[Term] = ()) -> Term:
    kind = symbol[0]
    if kind == "empty":
        return Empty()
    if kind == "leaf":
        return Leaf(symbol[1], symbol[2])
    if kind == "oplus":
        return Oplus(children[0], children[1])
    if kind == "relab":
        return Relab(symbol[1], symbol[2], children[0])
    if kind == "add":
        return Add(symbol[1], symbol[2], children[0])
    raise TermError(f"unknown symbol {symbol!r}")


def symbol_arity(symbol: tuple) -> int:
    kind = symbol[0]
    if kind in ("empty", "leaf"):
        return 0
    if kind == "oplus":
        return 2
    if kind in ("relab", "add"):
        return 1
    raise TermError(f"unknown symbol {symbol!r}")


def oplus_all(parts: Iterable[Term]) -> Term:
    """Left-nested disjoint union of ``parts``; empty input gives ``Empty``."""
    acc = None
    for p in parts:
        acc = p if acc is None else Oplus(acc, p)
    return Empty() if acc is None else acc


# ---------------------------------------------------------------- positions


def format_position(pos: bytes) -> str:
    return "".join(str(i) for i in pos)


def parse_position(text: str) -> bytes:
    text = text.strip()
    if text in ("", "root"):
        return b""
    if not re.fullmatch(r"[12]+", text):
        raise TermError(f"bad position {text!r}")
    return bytes(int(ch) for ch in text)


# ---------------------------------------------------------------- traversal


def fold(t: Term, f: Callable[[Term, list], object]):
    """Post-order fold: ``f(node, child_values)`` without recursion."""
    stack: list = [(t, False)]
    values: list = []
    while stack:
        node, expanded = stack.pop()
        ch = node.children
        if not ch:
            values.append(f(node, []))
        elif expanded:
            n = len(ch)
            args = values[-n:]
            del values[-n:]
            values.append(f(node, args))
        else:
            stack.append((node, True))
            for c in reversed(ch):
                stack.append((c, False))
    return values[0]


def fold_positions(t: Term, f: Callable[[Term, bytes, list], object]):
    """Like :func:`fold` but ``f`` also receives the node's position."""
    stack: list = [(t, b"", False)]
    values: list = []
    while stack:
        node, pos, expanded = stack.pop()
        ch = node.children
        if not ch:
            values.append(f(node, pos, []))
        elif expanded:
            n = len(ch)
            args = values[-n:]
            del values[-n:]
            values.append(f(node, pos, args))
        else:
            stack.append((node, pos, True))
            for i in range(len(ch), 0, -1):
                stack.append((ch[i - 1], pos + bytes((i,)), False))
    return values[0]


def iter_nodes(t: Term, positions: bool = False) -> Iterator:
    """Pre-order, left to right. Yields nodes, or (position, node) pairs."""
    if positions:
        stack = [(b"", t)]
        while stack:
            pos, node = stack.pop()
            yield pos, node
            ch = node.children
            for i in range(len(ch), 0, -1):
                stack.append((pos + bytes((i,)), ch[i - 1]))
    else:
        stack2 = [t]
        while stack2:
            node = stack2.pop()
            yield node
            stack2.extend(reversed(node.children))


def iter_leaves(t: Term) -> Iterator[tuple[bytes, Leaf]]:
    for pos, node in iter_nodes(t, positions=True):
        if node.symbol[0] == "leaf":
            yield pos, node


def leaf_positions(t: Term) -> dict[bytes, int]:
    """Map from leaf position to the label written on the leaf."""
    return {pos: leaf.symbol[1] for pos, leaf in iter_leaves(t)}


def term_size(t: Term, limit: int | None = None) -> int:
    """Number of nodes, optionally stopping once ``limit`` is exceeded."""
    n = 0
    stack = [t]
    while stack:
        node = stack.pop()
        n += 1
        if limit is not None and n > limit:
            return n
        stack.extend(node.children)
    return n


def term_depth(t: Term) -> int:
    best = 0
    stack = [(t, 1)]
    while stack:
        node, d = stack.pop()
        best = max(best, d)
        for c in node.children:
            stack.append((c, d + 1))
    return best


def labels_of(t: Term) -> frozenset[int]:
    """Every label written anywhere in the term, leaves and operations."""
    out: set[int] = set()
    for node in iter_nodes(t):
        out.update(node.symbol[1:3] if node.symbol[0] != "leaf" else node.symbol[1:2])
    return frozenset(out)


def widths_of(t: Term) -> tuple[int | None, int | None]:
    """Annotation widths (p, m) used by C-leaves and D-leaves.

    A sort without leaves reports ``None``. Mixed widths within a sort raise.
    """
    p = m = None
    for _, leaf in iter_leaves(t):
        label, bits = leaf.symbol[1], leaf.symbol[2]
        if label > 0:
            if p is None:
                p = len(bits)
            elif p != len(bits):
                raise TermError(f"vertex leaves carry annotations of widths {p} and {len(bits)}")
        else:
            if m is None:
                m = len(bits)
            elif m != len(bits):
                raise TermError(f"edge leaves carry annotations of widths {m} and {len(bits)}")
    return p, m


# ---------------------------------------------------------------- text form

_TOKEN = re.compile(r"\s*(?:(\()|(\))|([^\s()]+))")
_INT = re.compile(r"-?[1-9][0-9]*\Z")
_ARITY = {"empty": (0, 0), "leaf": (1, 0), "oplus": (0, 2), "relab": (2, 1), "add": (2, 1)}


def _tokens(text: str) -> Iterator[tuple[str, str, int, int]]:
    line, line_start, i, n = 1, 0, 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            line_start = i + 1
            i += 1
            continue
        if ch.isspace():
            i += 1
            continue
        col = i - line_start + 1
        if ch == "(":
            yield "(", ch, line, col
            i += 1
        elif ch == ")":
            yield ")", ch, line, col
            i += 1
        else:
            j = i
            while j < n and not text[j].isspace() and text[j] not in "()":
                j += 1
            yield "atom", text[i:j], line, col
            i = j


def parse_term(text: str) -> Term:
    """Parse the S-expression form of a term.

    Grammar::

        term := (empty) | (leaf INT [BITS]) | (oplus term term)
              | (relab INT INT term) | (add INT INT term)

    Annotation widths must be uniform per sort.
    """
    frames: list[list] = []  # [keyword, atoms, terms, line, col]
    result: Term | None = None
    expect_keyword = False
    last = (1, 1)
    for kind, tok, line, col in _tokens(text):
        last = (line, col)
        if result is not None:
            raise TermSyntaxError("trailing input after term", line, col)
        if expect_keyword:
            if kind != "atom" or tok not in _ARITY:
                raise TermSyntaxError(f"expected an operation name, got {tok!r}", line, col)
            frames[-1][0] = tok
            expect_keyword = False
            continue
        if kind == "(":
            if frames:
                kw, atoms, terms = frames[-1][0], frames[-1][1], frames[-1][2]
                if kw == "leaf":
                    raise TermSyntaxError("leaf takes no subterm", line, col)
                n_atoms, n_terms = _ARITY[kw]
                if len(atoms) < n_atoms:
                    raise TermSyntaxError(f"{kw} expects {n_atoms} labels before its subterm", line, col)
                if len(terms) >= n_terms:
                    raise TermSyntaxError(f"too many subterms for {kw}", line, col)
            frames.append([None, [], [], line, col])
            expect_keyword = True
        elif kind == ")":
            if not frames:
                raise TermSyntaxError("unbalanced ')'", line, col)
            kw, atoms, terms, fline, fcol = frames.pop()
            node = _build(kw, atoms, terms, fline, fcol)
            if frames:
                frames[-1][2].append(node)
            else:
                result = node
        else:
            if not frames:
                raise TermSyntaxError(f"unexpected atom {tok!r}", line, col)
            kw, atoms, terms = frames[-1][0], frames[-1][1], frames[-1][2]
            if kw == "leaf":
                if len(atoms) == 0:
                    atoms.append(_int_atom(tok, line, col))
                elif len(atoms) == 1:
                    if not re.fullmatch(r"[01]+", tok):
                        raise TermSyntaxError(f"bad annotation {tok!r}", line, col)
                    atoms.append(tok)
                else:
                    raise TermSyntaxError("leaf takes a label and an optional annotation", line, col)
            else:
                n_atoms, _ = _ARITY[kw]
                if len(atoms) >= n_atoms or terms:
                    raise TermSyntaxError(f"unexpected atom {tok!r} in {kw}", line, col)
                atoms.append(_int_atom(tok, line, col))
    if frames or expect_keyword:
        raise TermSyntaxError("unexpected end of input", *last)
    if result is None:
        raise TermSyntaxError("no term found", *last)
    widths_of(result)
    return result


def _int_atom(tok: str, line: int, col: int) -> int:
    if not _INT.match(tok):
        raise TermSyntaxError(f"expected a nonzero integer label, got {tok!r}", line, col)
    return int(tok)


def _build(kw: str, atoms: list, terms: list, line: int, col: int) -> Term:
    n_atoms, n_terms = _ARITY[kw]
    if kw == "leaf":
        if not atoms:
            raise TermSyntaxError("leaf needs a label", line, col)
    elif len(atoms) != n_atoms or len(terms) != n_terms:
        raise TermSyntaxError(f"{kw} expects {n_atoms} labels and {n_terms} subterms", line, col)
    try:
        if kw == "empty":
            return Empty()
        if kw == "leaf":
            return Leaf(atoms[0], atoms[1] if len(atoms) > 1 else "")
        if kw == "oplus":
            return Oplus(terms[0], terms[1])
        if kw == "relab":
            return Relab(atoms[0], atoms[1], terms[0])
        return Add(atoms[0], atoms[1], terms[0])
    except TermError as exc:
        raise TermSyntaxError(str(exc), line, col) from None


def serialize_term(t: Term) -> str:
    out: list[str] = []
    stack: list = [t]
    while stack:
        item = stack.pop()
        if isinstance(item, str):
            out.append(item)
            continue
        sym = item.symbol
        kind = sym[0]
        if kind == "empty":
            out.append("(empty)")
        elif kind == "leaf":
            out.append(f"(leaf {sym[1]} {sym[2]})" if sym[2] else f"(leaf {sym[1]})")
        elif kind == "oplus":
            out.append("(oplus ")
            stack.append(")")
            stack.append(item.children[1])
            stack.append(" ")
            stack.append(item.children[0])
        else:
            out.append(f"({kind} {sym[1]} {sym[2]} ")
            stack.append(")")
            stack.append(item.children[0])
    return "".join(out)


# ---------------------------------------------------------------- evaluation


@dataclass(frozen=True)
class BipartiteStruct:
    """Value of a term: leaf positions, their final labels and directed edges."""

    label: Mapping[bytes, int]
    edges: frozenset[tuple[bytes, bytes]]

    @property
    def vertices(self) -> frozenset[bytes]:
        return frozenset(self.label)

    def is_vertex(self, pos: bytes) -> bool:
        return self.label[pos] > 0

    def indegree(self, pos: bytes) -> int:
        return sum(1 for _, y in self.edges if y == pos)

    def outdegree(self, pos: bytes) -> int:
        return sum(1 for x, _ in self.edges if x == pos)

    def degrees(self) -> dict[bytes, tuple[int, int]]:
        """(indegree, outdegree) for every vertex."""
        deg = {v: [0, 0] for v in self.label}
        for x, y in self.edges:
            deg[x][1] += 1
            deg[y][0] += 1
        return {v: (d[0], d[1]) for v, d in deg.items()}

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BipartiteStruct):
            return NotImplemented
        return dict(self.label) == dict(other.label) and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((frozenset(self.label.items()), self.edges))


def evaluate(t: Term, prefix: bytes = b"") -> BipartiteStruct:
    """Evaluate ``t``; vertex identities are leaf positions, prefixed by ``prefix``."""
    edges: set[tuple[bytes, bytes]] = set()

    def step(node: Term, pos: bytes, args: list) -> dict[int, list[bytes]]:
        sym = node.symbol
        kind = sym[0]
        if kind == "leaf":
            return {sym[1]: [prefix + pos]}
        if kind == "empty":
            return {}
        if kind == "oplus":
            left, right = args
            if len(left) < len(right):
                left, right = right, left
            for lab, members in right.items():
                if lab in left:
                    left[lab] = left[lab] + members
                else:
                    left[lab] = members
            return left
        classes = args[0]
        a, b = sym[1], sym[2]
        if kind == "relab":
            if a in classes:
                moved = classes.pop(a)
                classes[b] = classes.get(b, []) + moved
            return classes
        for x in classes.get(a, ()):
            for y in classes.get(b, ()):
                edges.add((x, y))
        return classes

    classes = fold_positions(t, step)
    label = {v: lab for lab, members in classes.items() for v in members}
    return BipartiteStruct(label=label, edges=frozenset(edges))


# ---------------------------------------------------------------- annotations


@dataclass(frozen=True)
class AnnotatedSets:
    """Vertex sets X_1..X_p and edge sets U_1..U_m, as sets of leaf positions."""

    vertex_sets: tuple[frozenset[bytes], ...] = ()
    edge_sets: tuple[frozenset[bytes], ...] = ()

    @property
    def widths(self) -> tuple[int, int]:
        return len(self.vertex_sets), len(self.edge_sets)

    @classmethod
    def of(cls, vertex_sets: Iterable[Iterable[bytes]] = (), edge_sets: Iterable[Iterable[bytes]] = ()):
        return cls(tuple(frozenset(s) for s in vertex_sets), tuple(frozenset(s) for s in edge_sets))


def _rebuild(t: Term, leaf_fn: Callable[[bytes, Term], Term]) -> Term:
    """Copy ``t`` replacing each nullary node through ``leaf_fn(pos, node)``."""

    def step(node: Term, pos: bytes, args: list) -> Term:
        if not node.children:
            return leaf_fn(pos, node)
        if all(a is c for a, c in zip(args, node.children)):
            return node
        return node_from_symbol(node.symbol, args)

    return fold_positions(t, step)


def annotate(t: Term, sets: AnnotatedSets) -> Term:
    """Write the membership bits of ``sets`` onto the leaves of ``t``.

    Bit ``i`` of a vertex leaf is 1 iff its position belongs to ``vertex_sets[i]``;
    edge leaves use ``edge_sets`` the same way. Existing bits are replaced.
    """
    leaves = leaf_positions(t)
    for i, s in enumerate(sets.vertex_sets):
        for pos in s:
            if pos not in leaves:
                raise TermError(f"vertex set {i + 1} names {format_position(pos)!r}, which is not a leaf")
            if leaves[pos] < 0:
                raise TermError(f"vertex set {i + 1} names edge leaf {format_position(pos)!r}")
    for j, s in enumerate(sets.edge_sets):
        for pos in s:
            if pos not in leaves:
                raise TermError(f"edge set {j + 1} names {format_position(pos)!r}, which is not a leaf")
            if leaves[pos] > 0:
                raise TermError(f"edge set {j + 1} names vertex leaf {format_position(pos)!r}")

    def leaf_fn(pos: bytes, node: Term) -> Term:
        if node.symbol[0] != "leaf":
            return node
        label = node.symbol[1]
        family = sets.vertex_sets if label > 0 else sets.edge_sets
        bits = "".join("1" if pos in s else "0" for s in family)
        return node if bits == node.symbol[2] else Leaf(label, bits)

    return _rebuild(t, leaf_fn)


def annotate_leaves(t: Term, bits_for: Callable[[int, int], str]) -> Term:
    """Annotate by leaf index instead of position.

    ``bits_for(index, label)`` is called for leaves in left-to-right order.
    Unlike :func:`annotate` this never materializes positions, so it stays
    linear on deep terms.
    """
    counter = [0]

    def step(node: Term, args: list) -> Term:
        if node.symbol[0] == "leaf":
            i = counter[0]
            counter[0] += 1
            bits = bits_for(i, node.symbol[1])
            return node if bits == node.symbol[2] else Leaf(node.symbol[1], bits)
        if not node.children or all(a is c for a, c in zip(args, node.children)):
            return node
        return node_from_symbol(node.symbol, args)

    return fold(t, step)


def annotations_of(t: Term) -> AnnotatedSets:
    """Inverse of :func:`annotate`: read the sets back from the leaf bits."""
    p, m = widths_of(t)
    p, m = p or 0, m or 0
    vs: list[set[bytes]] = [set() for _ in range(p)]
    es: list[set[bytes]] = [set() for _ in range(m)]
    for pos, leaf in iter_leaves(t):
        family = vs if leaf.symbol[1] > 0 else es
        for i, bit in enumerate(leaf.symbol[2]):
            if bit == "1":
                family[i].add(pos)
    return AnnotatedSets.of(vs, es)


def strip_annotations(t: Term) -> Term:
    return annotate_leaves(t, lambda i, label: "")


def restrict_to(t: Term, vertices: Iterable[bytes], edges: Iterable[bytes]) -> Term:
    """Replace every leaf outside ``vertices`` ∪ ``edges`` by the empty term."""
    keep_v, keep_e = frozenset(vertices), frozenset(edges)
    leaves = leaf_positions(t)
    for pos in keep_v:
        if leaves.get(pos, 0) <= 0:
            raise TermError(f"{format_position(pos)!r} is not a vertex leaf")
    for pos in keep_e:
        if leaves.get(pos, 0) >= 0:
            raise TermError(f"{format_position(pos)!r} is not an edge leaf")
    keep = keep_v | keep_e

    def leaf_fn(pos: bytes, node: Term) -> Term:
        if node.symbol[0] == "leaf" and pos not in keep:
            return Empty()
        return node

    return _rebuild(t, leaf_fn)


def relabel_term(t: Term, mapping: Mapping[int, int]) -> Term:
    """Apply a label renaming everywhere. Unmapped labels are kept."""

    def m(x: int) -> int:
        return mapping.get(x, x)

    def step(node: Term, args: list) -> Term:
        sym = node.symbol
        kind = sym[0]
        if kind == "empty":
            return node
        if kind == "leaf":
            return Leaf(m(sym[1]), sym[2])
        if kind == "oplus":
            return Oplus(args[0], args[1])
        return node_from_symbol((kind, m(sym[1]), m(sym[2])), args)

    return fold(t, step)


def subterm_at(t: Term, pos: bytes) -> Term:
    node = t
    for depth, i in enumerate(pos):
        if not 1 <= i <= len(node.children):
            raise TermError(f"position {format_position(pos)!r} leaves the term at depth {depth}")
        node = node.children[i - 1]
    return node


# ---------------------------------------------------------------- irredundancy


def make_irredundant(t: Term) -> Term:
    """Remove edge additions that can only recreate existing edges.

    An ``add a b`` node whose subterm contains both labels, and whose label
    pair is still addressed by some ``add`` higher up once the relabellings
    in between are taken into account, creates edges that the higher node
    creates again (label classes only ever merge going up). Deleting every
    such node keeps the value unchanged and leaves no addition that
    recreates an edge. Returns ``t`` itself when nothing is removed.
    """
    present: dict[int, frozenset[int]] = {}

    def labels_step(node: Term, args: list) -> frozenset[int]:
        key = id(node)
        if key in present:
            return present[key]
        sym = node.symbol
        kind = sym[0]
        if kind == "empty":
            res = frozenset()
        elif kind == "leaf":
            res = frozenset((sym[1],))
        elif kind == "oplus":
            res = args[0] | args[1]
        elif kind == "relab":
            res = args[0]
            if sym[1] in res:
                res = (res - {sym[1]}) | {sym[2]}
        else:
            res = args[0]
        present[key] = res
        return res

    fold(t, labels_step)

    removed = [0]
    # top-down pass with the set of label pairs covered by an ancestor add
    stack: list = [(t, frozenset(), False)]
    values: list = []
    while stack:
        node, covered, expanded = stack.pop()
        sym = node.symbol
        kind = sym[0]
        if not node.children:
            values.append(node)
            continue
        if expanded:
            n = len(node.children)
            args = values[-n:]
            del values[-n:]
            if kind == "add":
                a, b = sym[1], sym[2]
                child_labels = present[id(node.children[0])]
                if (a, b) in covered and a in child_labels and b in child_labels:
                    removed[0] += 1
                    values.append(args[0])
                    continue
            if all(x is y for x, y in zip(args, node.children)):
                values.append(node)
            else:
                values.append(node_from_symbol(sym, args))
            continue
        stack.append((node, covered, True))
        if kind == "oplus":
            stack.append((node.children[1], covered, False))
            stack.append((node.children[0], covered, False))
        elif kind == "add":
            stack.append((node.children[0], covered | {(sym[1], sym[2])}, False))
        else:
            a, b = sym[1], sym[2]
            below = set()
            for x, y in covered:
                if x != a and y != a:
                    below.add((x, y))
                if x == b:
                    below.add((a, y))
                if y == b:
                    below.add((x, a))
            stack.append((node.children[0], frozenset(below), False))
    out = values[0]
    return t if removed[0] == 0 else out
