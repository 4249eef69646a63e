"""Fly-automata: bottom-up tree automata whose transitions are computed on demand.

An automaton here never stores a transition table. It exposes a function
from a term symbol and the states of the children to the set of possible
states at the node, an accepting predicate and a canonical state encoding.
Runs are iterative post-order traversals, so they work on very deep terms.

Combinators build new automata from old ones lazily: product,
complement, image and inverse image under a symbol map, restriction of the
label set, existential projection of an annotation bit, relativization and
determinization by the subset construction.
"""

from __future__ import annotations

import functools
import itertools
import os
import time
from dataclasses import dataclass
from typing import Callable, Hashable, Iterable, Iterator, Sequence

from .codec import decode_state, encode_state, state_ints
from .terms import Term, fold, fold_positions, iter_nodes, symbol_arity

__all__ = [
    "Signature",
    "SignatureError",
    "AutomatonError",
    "EnumerationBudgetExceeded",
    "FlyAutomaton",
    "DeterministicAutomaton",
    "RunStats",
    "SymbolMap",
    "ERROR",
    "OK",
    "SUCCESS",
    "cache_entries",
    "run_deterministic",
    "run_star",
    "accepts",
    "determinize",
    "product",
    "complement",
    "image",
    "inverse_image",
    "restrict_signature",
    "exists_project",
    "relativize",
    "identity_map",
    "select_bits",
    "drop_last_bit",
    "selection_map",
    "symbol_labels",
]

State = Hashable
Symbol = tuple

ERROR = "Error"
OK = "Ok"
SUCCESS = "Success"

_DEFAULT_CACHE_BYTES = 256 * 1024 * 1024
_BYTES_PER_ENTRY = 512


def cache_entries() -> int:
    """Transition cache size, derived from ``FLYTERM_CACHE_BYTES``."""
    raw = os.environ.get("FLYTERM_CACHE_BYTES", "")
    try:
        budget = int(raw) if raw else _DEFAULT_CACHE_BYTES
    except ValueError:
        budget = _DEFAULT_CACHE_BYTES
    return max(0, budget // _BYTES_PER_ENTRY)


class SignatureError(ValueError):
    """A term or symbol does not belong to the automaton's signature."""


class AutomatonError(RuntimeError):
    """An automaton broke its own contract, e.g. a deterministic one returned two states."""


class EnumerationBudgetExceeded(RuntimeError):
    """Enumerating a declared state space would exceed the allowed budget."""


def symbol_labels(symbol: Symbol) -> tuple[int, ...]:
    kind = symbol[0]
    if kind == "leaf":
        return (symbol[1],)
    if kind in ("relab", "add"):
        return (symbol[1], symbol[2])
    return ()


@dataclass(frozen=True)
class Signature:
    """Annotation widths per sort and an optional finite label universe.

    ``None`` means "any": any width, or every label.
    """

    vertex_width: int | None = None
    edge_width: int | None = None
    labels: frozenset[int] | None = None

    def admits(self, symbol: Symbol) -> bool:
        if symbol[0] == "leaf":
            width = self.vertex_width if symbol[1] > 0 else self.edge_width
            if width is not None and len(symbol[2]) != width:
                return False
        if self.labels is not None:
            return all(x in self.labels for x in symbol_labels(symbol))
        return True

    def check_term(self, t: Term) -> None:
        for node in iter_nodes(t):
            if not self.admits(node.symbol):
                raise SignatureError(f"symbol {node.symbol!r} is outside the signature {self.describe()}")

    def meet(self, other: "Signature") -> "Signature":
        def pick(x, y, what):
            if x is None:
                return y
            if y is None or x == y:
                return x
            raise SignatureError(f"incompatible {what} widths {x} and {y}")

        if self.labels is None:
            labels = other.labels
        elif other.labels is None:
            labels = self.labels
        else:
            labels = self.labels & other.labels
        return Signature(
            pick(self.vertex_width, other.vertex_width, "vertex"),
            pick(self.edge_width, other.edge_width, "edge"),
            labels,
        )

    def describe(self) -> str:
        p = "*" if self.vertex_width is None else self.vertex_width
        m = "*" if self.edge_width is None else self.edge_width
        lab = "all labels" if self.labels is None else f"labels {sorted(self.labels)}"
        return f"(p={p}, m={m}, {lab})"


# ---------------------------------------------------------------- automata


class FlyAutomaton:
    """Base class. Subclasses override :meth:`compute` (or ``step`` for
    deterministic ones), :meth:`accepting` and optionally the sink set."""

    sinks: frozenset = frozenset()

    def __init__(self, name: str, signature: Signature | None = None, deterministic: bool = False):
        self.name = name
        self.signature = signature or Signature()
        self.deterministic = deterministic
        self._transitions = functools.lru_cache(maxsize=cache_entries())(self.compute)
        self._det: "Determinized | None" = None

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.name}>"

    # subclasses implement
    def compute(self, symbol: Symbol, *states: State) -> tuple:
        raise NotImplementedError

    def accepting(self, q: State) -> bool:
        raise NotImplementedError

    # shared machinery
    def transitions(self, symbol: Symbol, *states: State) -> tuple:
        """Possible states at a node with ``symbol`` whose children are in ``states``."""
        return self._transitions(symbol, *states)

    def next_state(self, symbol: Symbol, *states: State) -> State:
        res = self.transitions(symbol, *states)
        if len(res) != 1:
            raise AutomatonError(f"{self.name}: {len(res)} states for {symbol!r} in a deterministic run")
        return res[0]

    def is_sink(self, q: State) -> bool:
        return type(q) is str and q in self.sinks

    def encode(self, q: State) -> bytes:
        return encode_state(q)

    def decode(self, data: bytes) -> State:
        return decode_state(data)

    def state_labels(self, q: State) -> set[int]:
        return state_ints(q)

    def is_valid_state(self, q: State) -> bool:
        return True

    def enumerate_states(self) -> Iterator[State]:
        """Declared states over the finite label universe of the signature."""
        lab = self.signature.labels
        if lab is None:
            raise NotImplementedError(f"{self.name} has an infinite label universe; restrict it first")
        return self.enumerate_states_over(frozenset(x for x in lab if x > 0), frozenset(x for x in lab if x < 0))

    def enumerate_states_over(self, vertex_labels: frozenset, edge_labels: frozenset) -> Iterator[State]:
        """Declared states mentioning only the given labels."""
        raise NotImplementedError(f"{self.name} has no declared state enumeration")

    def clear_cache(self) -> None:
        self._transitions.cache_clear()


class DeterministicAutomaton(FlyAutomaton):
    """Deterministic automaton defined by ``step``; the cache holds single states."""

    def __init__(self, name: str, signature: Signature | None = None):
        super().__init__(name, signature, deterministic=True)
        self._step = functools.lru_cache(maxsize=cache_entries())(self.step)

    def step(self, symbol: Symbol, *states: State) -> State:
        raise NotImplementedError

    def compute(self, symbol: Symbol, *states: State) -> tuple:
        return (self._step(symbol, *states),)

    def next_state(self, symbol: Symbol, *states: State) -> State:
        return self._step(symbol, *states)

    def clear_cache(self) -> None:
        super().clear_cache()
        self._step.cache_clear()


# ---------------------------------------------------------------- runs


@dataclass
class RunStats:
    nodes: int = 0
    distinct_states: int = 0
    max_state_bytes: int = 0
    ndeg: int = 0
    millis: float = 0.0
    accepted: bool = False

    def to_json(self) -> dict:
        return {
            "nodes": self.nodes,
            "distinct_states": self.distinct_states,
            "max_state_bytes": self.max_state_bytes,
            "ndeg": self.ndeg,
            "millis": round(self.millis, 3),
            "accepted": self.accepted,
        }


class _Census:
    """Collects distinct states and their maximal encoded size."""

    def __init__(self, encode: Callable[[State], bytes]):
        self.seen: set = set()
        self.max_bytes = 0
        self.encode = encode

    def add(self, q: State) -> None:
        if q not in self.seen:
            self.seen.add(q)
            size = len(self.encode(q))
            if size > self.max_bytes:
                self.max_bytes = size


class _SinkReached(Exception):
    def __init__(self, state):
        self.state = state


def run_deterministic(
    a: FlyAutomaton, t: Term, *, timing: bool = True, check_signature: bool = True
) -> tuple[State, RunStats]:
    """Unique run of a deterministic automaton; returns the root state.

    The run stops as soon as a sink state appears, since sinks absorb every
    transition above them.
    """
    if not a.deterministic:
        raise AutomatonError(f"{a.name} is not deterministic; determinize it or use run_star")
    if check_signature:
        a.signature.check_term(t)
    start = time.perf_counter()
    census = _Census(a.encode)
    nodes = [0]
    next_state = a.next_state
    is_sink = a.is_sink

    def step(node: Term, args: list) -> State:
        nodes[0] += 1
        q = next_state(node.symbol, *args)
        census.add(q)
        if is_sink(q):
            raise _SinkReached(q)
        return q

    try:
        root = fold(t, step)
    except _SinkReached as stop:
        root = stop.state
    stats = RunStats(
        nodes=nodes[0],
        distinct_states=len(census.seen),
        max_state_bytes=census.max_bytes,
        ndeg=1,
        millis=(time.perf_counter() - start) * 1000.0 if timing else 0.0,
        accepted=bool(a.accepting(root)),
    )
    return root, stats


def run_star(
    a: FlyAutomaton, t: Term, *, positions: bool = True, timing: bool = True, check_signature: bool = True
) -> tuple[dict[bytes, frozenset] | frozenset, RunStats]:
    """Set of reachable states at every position.

    With ``positions=False`` only the root set is returned, which avoids the
    cost of materializing positions on deep terms.
    """
    if check_signature:
        a.signature.check_term(t)
    det = determinize(a)
    start = time.perf_counter()
    census = _Census(a.encode)
    ndeg = [0]
    nodes = [0]
    seen_sets: set = set()

    def record(s: frozenset) -> None:
        nodes[0] += 1
        if len(s) > ndeg[0]:
            ndeg[0] = len(s)
        if s not in seen_sets:
            seen_sets.add(s)
            for q in s:
                census.add(q)

    if positions:
        table: dict[bytes, frozenset] = {}

        def step_pos(node: Term, pos: bytes, args: list) -> frozenset:
            s = det.next_state(node.symbol, *args)
            record(s)
            table[pos] = s
            return s

        root = fold_positions(t, step_pos)
        result = table
    else:

        def step(node: Term, args: list) -> frozenset:
            s = det.next_state(node.symbol, *args)
            record(s)
            return s

        root = fold(t, step)
        result = root
    stats = RunStats(
        nodes=nodes[0],
        distinct_states=len(census.seen),
        max_state_bytes=census.max_bytes,
        ndeg=ndeg[0],
        millis=(time.perf_counter() - start) * 1000.0 if timing else 0.0,
        accepted=any(a.accepting(q) for q in root),
    )
    return result, stats


def accepts(a: FlyAutomaton, t: Term) -> bool:
    """Acceptance by the unique run if deterministic, else by the subset run."""
    if a.deterministic:
        return run_deterministic(a, t, timing=False)[1].accepted
    return run_star(a, t, positions=False, timing=False)[1].accepted


# ---------------------------------------------------------------- determinization


class Determinized(DeterministicAutomaton):
    """Subset construction, computed one transition at a time."""

    def __init__(self, base: FlyAutomaton):
        super().__init__(f"det({base.name})", base.signature)
        self.base = base

    def step(self, symbol: Symbol, *sets: frozenset) -> frozenset:
        trans = self.base.transitions
        if not sets:
            return frozenset(trans(symbol))
        if len(sets) == 1:
            out = set()
            for q in sets[0]:
                out.update(trans(symbol, q))
            return frozenset(out)
        out = set()
        for combo in itertools.product(*sets):
            out.update(trans(symbol, *combo))
        return frozenset(out)

    def accepting(self, s: frozenset) -> bool:
        acc = self.base.accepting
        return any(acc(q) for q in s)

    def is_sink(self, s: frozenset) -> bool:
        if not s:
            return True
        if len(s) == 1:
            (q,) = s
            return self.base.is_sink(q)
        return False

    def is_valid_state(self, s: frozenset) -> bool:
        return all(self.base.is_valid_state(q) for q in s)


def determinize(a: FlyAutomaton) -> Determinized:
    if a._det is None:
        a._det = Determinized(a)
    return a._det


# ---------------------------------------------------------------- product / complement


class Product(FlyAutomaton):
    def __init__(self, left: FlyAutomaton, right: FlyAutomaton, mode: str = "and"):
        if mode not in ("and", "or"):
            raise ValueError(f"accept mode must be 'and' or 'or', got {mode!r}")
        sig = left.signature.meet(right.signature)
        super().__init__(f"{left.name}*{right.name}", sig, deterministic=left.deterministic and right.deterministic)
        self.left, self.right, self.mode = left, right, mode

    def compute(self, symbol: Symbol, *states: State) -> tuple:
        ls = self.left.transitions(symbol, *(q[0] for q in states))
        rs = self.right.transitions(symbol, *(q[1] for q in states))
        return tuple((x, y) for x in ls for y in rs)

    def next_state(self, symbol: Symbol, *states: State) -> State:
        if not self.deterministic:
            return super().next_state(symbol, *states)
        return (
            self.left.next_state(symbol, *(q[0] for q in states)),
            self.right.next_state(symbol, *(q[1] for q in states)),
        )

    def accepting(self, q: State) -> bool:
        if self.mode == "and":
            return bool(self.left.accepting(q[0]) and self.right.accepting(q[1]))
        return bool(self.left.accepting(q[0]) or self.right.accepting(q[1]))

    def is_sink(self, q: State) -> bool:
        return self.left.is_sink(q[0]) and self.right.is_sink(q[1])

    def is_valid_state(self, q: State) -> bool:
        return self.left.is_valid_state(q[0]) and self.right.is_valid_state(q[1])

    def enumerate_states_over(self, vertex_labels: frozenset, edge_labels: frozenset) -> Iterator[State]:
        rights = list(self.right.enumerate_states_over(vertex_labels, edge_labels))
        for x in self.left.enumerate_states_over(vertex_labels, edge_labels):
            for y in rights:
                yield (x, y)


def product(a: FlyAutomaton, b: FlyAutomaton, mode: str = "and") -> Product:
    return Product(a, b, mode)


class Complement(FlyAutomaton):
    def __init__(self, base: FlyAutomaton):
        if not base.deterministic:
            raise AutomatonError(f"complement needs a deterministic automaton; {base.name} is not")
        super().__init__(f"not({base.name})", base.signature, deterministic=True)
        self.base = base

    def compute(self, symbol: Symbol, *states: State) -> tuple:
        return self.base.transitions(symbol, *states)

    def next_state(self, symbol: Symbol, *states: State) -> State:
        return self.base.next_state(symbol, *states)

    def accepting(self, q: State) -> bool:
        return not self.base.accepting(q)

    def is_sink(self, q: State) -> bool:
        return self.base.is_sink(q)

    def is_valid_state(self, q: State) -> bool:
        return self.base.is_valid_state(q)

    def enumerate_states_over(self, vertex_labels: frozenset, edge_labels: frozenset) -> Iterator[State]:
        return self.base.enumerate_states_over(vertex_labels, edge_labels)


def complement(a: FlyAutomaton) -> Complement:
    return Complement(a)


# ---------------------------------------------------------------- symbol maps


class SymbolMap:
    """Arity-preserving map between signatures with an optional finite inverse.

    ``forward`` sends a source symbol to a target symbol. ``preimage`` lists
    the source symbols sent to a target symbol; it is needed by :func:`image`
    only.
    """

    def __init__(
        self,
        forward: Callable[[Symbol], Symbol],
        preimage: Callable[[Symbol], Sequence[Symbol]] | None = None,
        *,
        source: Signature | None = None,
        target: Signature | None = None,
        injective: bool = False,
        name: str = "h",
    ):
        self._forward = forward
        self._preimage = preimage
        self.source = source or Signature()
        self.target = target or Signature()
        self.injective = injective
        self.name = name

    def __call__(self, symbol: Symbol) -> Symbol:
        out = self._forward(symbol)
        if symbol_arity(out) != symbol_arity(symbol):
            raise SignatureError(f"{self.name} maps {symbol!r} to {out!r}, changing the arity")
        return out

    def preimage(self, symbol: Symbol) -> tuple[Symbol, ...]:
        if self._preimage is None:
            raise SignatureError(f"{self.name} has no computable inverse")
        res = tuple(self._preimage(symbol))
        for f in res:
            if symbol_arity(f) != symbol_arity(symbol):
                raise SignatureError(f"{self.name} preimage {f!r} of {symbol!r} changes the arity")
        return res


def identity_map() -> SymbolMap:
    return SymbolMap(lambda s: s, lambda s: (s,), injective=True, name="id")


def _all_bitstrings(width: int) -> Iterator[str]:
    for bits in itertools.product("01", repeat=width):
        yield "".join(bits)


def select_bits(
    vertex_indices: Sequence[int] | None,
    edge_indices: Sequence[int] | None,
    source_widths: tuple[int, int],
) -> SymbolMap:
    """Rearrange annotation bits: the new bit j is the old bit ``indices[j]``.

    ``None`` keeps a sort's bits unchanged. Dropping, duplicating and
    permuting variables are all instances.
    """
    p, m = source_widths
    vidx = tuple(range(p)) if vertex_indices is None else tuple(vertex_indices)
    eidx = tuple(range(m)) if edge_indices is None else tuple(edge_indices)
    for i in vidx:
        if not 0 <= i < p:
            raise ValueError(f"vertex bit {i} out of range for width {p}")
    for i in eidx:
        if not 0 <= i < m:
            raise ValueError(f"edge bit {i} out of range for width {m}")

    def forward(sym: Symbol) -> Symbol:
        if sym[0] != "leaf":
            return sym
        idx = vidx if sym[1] > 0 else eidx
        bits = sym[2]
        return ("leaf", sym[1], "".join(bits[i] for i in idx))

    def preimage(sym: Symbol) -> list[Symbol]:
        if sym[0] != "leaf":
            return [sym]
        label, bits = sym[1], sym[2]
        idx, width = (vidx, p) if label > 0 else (eidx, m)
        if len(bits) != len(idx):
            return []
        out = []
        for cand in _all_bitstrings(width):
            if all(cand[i] == bits[j] for j, i in enumerate(idx)):
                out.append(("leaf", label, cand))
        return out

    injective = sorted(vidx) == list(range(p)) and sorted(eidx) == list(range(m))
    return SymbolMap(
        forward,
        preimage,
        source=Signature(p, m),
        target=Signature(len(vidx), len(eidx)),
        injective=injective,
        name=f"bits{vidx}{eidx}",
    )


def drop_last_bit(sort: str, source_widths: tuple[int, int]) -> SymbolMap:
    """Forget the last annotation variable of ``sort`` ('vertex' or 'edge')."""
    p, m = source_widths
    if sort == "vertex":
        if p == 0:
            raise SignatureError("no vertex variable to project")
        return select_bits(range(p - 1), None, source_widths)
    if sort == "edge":
        if m == 0:
            raise SignatureError("no edge variable to project")
        return select_bits(None, range(m - 1), source_widths)
    raise ValueError(f"sort must be 'vertex' or 'edge', got {sort!r}")


def selection_map(vertices: bool = True, edges: bool = True, labels: Iterable[int] | None = None) -> SymbolMap:
    """Leaves annotated 1 keep their label, leaves annotated 0 become empty.

    Applies to the sorts whose flag is set; leaves of the other sort carry
    no bits and pass through. The inverse of the empty symbol needs a
    finite label universe, given by ``labels``.
    """
    universe = None if labels is None else frozenset(labels)

    def selected(label: int) -> bool:
        return vertices if label > 0 else edges

    def forward(sym: Symbol) -> Symbol:
        if sym[0] != "leaf" or not selected(sym[1]):
            return sym
        if sym[2] == "1":
            return ("leaf", sym[1], "")
        if sym[2] == "0":
            return ("empty",)
        raise SignatureError(f"selection expects a single annotation bit, got {sym!r}")

    def preimage(sym: Symbol) -> list[Symbol]:
        if sym[0] == "leaf":
            return [("leaf", sym[1], "1")] if selected(sym[1]) else [sym]
        if sym[0] == "empty":
            if universe is None:
                raise SignatureError("preimage of the empty symbol needs a finite label set")
            return [("empty",)] + [("leaf", a, "0") for a in sorted(universe) if selected(a)]
        return [sym]

    return SymbolMap(
        forward,
        preimage,
        source=Signature(1 if vertices else 0, 1 if edges else 0, universe),
        target=Signature(0, 0, universe),
        name="select",
    )


# ---------------------------------------------------------------- image / inverse image


class Image(FlyAutomaton):
    def __init__(self, base: FlyAutomaton, h: SymbolMap, signature: Signature | None = None):
        det = base.deterministic and h.injective
        super().__init__(f"{h.name}({base.name})", signature or h.target, deterministic=det)
        self.base, self.h = base, h

    def compute(self, symbol: Symbol, *states: State) -> tuple:
        out: dict = {}
        for f in self.h.preimage(symbol):
            for q in self.base.transitions(f, *states):
                out[q] = None
        return tuple(out)

    def accepting(self, q: State) -> bool:
        return self.base.accepting(q)

    def is_sink(self, q: State) -> bool:
        return self.base.is_sink(q)

    def is_valid_state(self, q: State) -> bool:
        return self.base.is_valid_state(q)


def image(a: FlyAutomaton, h: SymbolMap, signature: Signature | None = None) -> Image:
    return Image(a, h, signature)


class InverseImage(FlyAutomaton):
    def __init__(self, base: FlyAutomaton, h: SymbolMap, signature: Signature | None = None):
        super().__init__(f"{h.name}^-1({base.name})", signature or h.source, deterministic=base.deterministic)
        self.base, self.h = base, h

    def compute(self, symbol: Symbol, *states: State) -> tuple:
        return self.base.transitions(self.h(symbol), *states)

    def next_state(self, symbol: Symbol, *states: State) -> State:
        return self.base.next_state(self.h(symbol), *states)

    def accepting(self, q: State) -> bool:
        return self.base.accepting(q)

    def is_sink(self, q: State) -> bool:
        return self.base.is_sink(q)

    def is_valid_state(self, q: State) -> bool:
        return self.base.is_valid_state(q)

    def enumerate_states_over(self, vertex_labels: frozenset, edge_labels: frozenset) -> Iterator[State]:
        return self.base.enumerate_states_over(vertex_labels, edge_labels)


def inverse_image(a: FlyAutomaton, h: SymbolMap, signature: Signature | None = None) -> InverseImage:
    return InverseImage(a, h, signature)


# ---------------------------------------------------------------- restriction / projection


class Restricted(FlyAutomaton):
    """Same automaton on the smaller signature using only ``labels``."""

    def __init__(self, base: FlyAutomaton, labels: Iterable[int]):
        labels = frozenset(labels)
        if base.signature.labels is not None and not labels <= base.signature.labels:
            raise SignatureError("restriction labels are not a subset of the automaton's labels")
        sig = Signature(base.signature.vertex_width, base.signature.edge_width, labels)
        super().__init__(f"{base.name}|{len(labels)}", sig, deterministic=base.deterministic)
        self.base = base

    def compute(self, symbol: Symbol, *states: State) -> tuple:
        if not self.signature.admits(symbol):
            return ()
        return self.base.transitions(symbol, *states)

    def next_state(self, symbol: Symbol, *states: State) -> State:
        if not self.signature.admits(symbol):
            raise SignatureError(f"symbol {symbol!r} is outside {self.signature.describe()}")
        return self.base.next_state(symbol, *states)

    def accepting(self, q: State) -> bool:
        return self.base.accepting(q)

    def is_sink(self, q: State) -> bool:
        return self.base.is_sink(q)

    def is_valid_state(self, q: State) -> bool:
        return self.base.is_valid_state(q) and self.state_labels(q) <= self.signature.labels

    def enumerate_states_over(self, vertex_labels: frozenset, edge_labels: frozenset) -> Iterator[State]:
        lab = self.signature.labels
        return self.base.enumerate_states_over(vertex_labels & lab, edge_labels & lab)


def restrict_signature(a: FlyAutomaton, labels: Iterable[int]) -> Restricted:
    return Restricted(a, labels)


def exists_project(a: FlyAutomaton, which: str) -> Determinized:
    """Existentially quantify the last annotation variable of sort ``which``."""
    p, m = a.signature.vertex_width, a.signature.edge_width
    if p is None or m is None:
        raise SignatureError(f"{a.name} does not fix its annotation widths")
    h = drop_last_bit(which, (p, m))
    sig = Signature(h.target.vertex_width, h.target.edge_width, a.signature.labels)
    return determinize(image(a, h, sig))


def relativize(a: FlyAutomaton, vertices: bool = True, edges: bool = True) -> InverseImage:
    """Automaton reading one selection bit per leaf of the chosen sorts.

    It accepts an annotated term iff ``a`` accepts the term in which the
    unselected leaves are replaced by the empty graph.
    """
    sig = a.signature
    if vertices and sig.vertex_width not in (None, 0):
        raise SignatureError("relativize expects an automaton without vertex annotations")
    if edges and sig.edge_width not in (None, 0):
        raise SignatureError("relativize expects an automaton without edge annotations")
    h = selection_map(vertices, edges, sig.labels)
    source = Signature(
        1 if vertices else (0 if sig.vertex_width is None else sig.vertex_width),
        1 if edges else (0 if sig.edge_width is None else sig.edge_width),
        sig.labels,
    )
    return inverse_image(a, h, source)
