"""Finite ordered sets: axiom checking, cover relations, linear extensions
and the lattice operations needed by the readability metrics.

Element ids are opaque strings.  Internally everything runs against dense
boolean matrices indexed by the canonically sorted element tuple, so relation
queries are O(1) and the derived structures (strict order, covers,
comparability masks) are computed once at construction.  All types are
immutable after construction and safe to share across concurrent layout runs;
the operations are pure.
"""

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np


class AxiomViolation(ValueError):
    """The supplied relation is not reflexive, antisymmetric or transitive."""

    def __init__(self, axiom: str, witness: tuple[str, ...]):
        self.axiom = axiom
        self.witness = witness
        super().__init__(f"{axiom} violated at {witness!r}")


class CycleDetected(ValueError):
    """Cover input contains a directed cycle among distinct elements."""

    def __init__(self, cycle: list[str]):
        self.cycle = list(cycle)
        super().__init__("cycle: " + " -> ".join(self.cycle))


class NotALattice(ValueError):
    pass


@dataclass(frozen=True)
class CoverRelation:
    """Pairs (a, b) with a strictly below b and nothing in between."""

    pairs: tuple[tuple[str, str], ...]


@dataclass(frozen=True)
class LinearExtension:
    """A total ordering of the elements compatible with the partial order."""

    sequence: tuple[str, ...]

    def position(self, element: str) -> int:
        return self.sequence.index(element)


@dataclass(frozen=True, eq=False)
class OrderedSet:
    """A finite order (elements, leq) with precomputed derived matrices.

    ``leq[i, j]`` means ``elements[i] <= elements[j]``.  The constructor
    trusts its input; use :func:`validate_order` to build from unchecked
    pair sets.
    """

    elements: tuple[str, ...]
    leq: np.ndarray

    strict: np.ndarray = field(init=False, repr=False)
    covers: np.ndarray = field(init=False, repr=False)
    comparable: np.ndarray = field(init=False, repr=False)
    incomparable: np.ndarray = field(init=False, repr=False)
    cover_index_pairs: np.ndarray = field(init=False, repr=False)
    _index: dict = field(init=False, repr=False)
    _upper_covers: list = field(init=False, repr=False)
    _lower_covers: list = field(init=False, repr=False)

    def __post_init__(self):
        elements = tuple(self.elements)
        n = len(elements)
        leq = np.array(self.leq, dtype=bool)
        if leq.shape != (n, n):
            raise ValueError(f"relation matrix shape {leq.shape} does not match {n} elements")
        diag = np.eye(n, dtype=bool)
        strict = leq & ~diag
        covers = strict & ~(strict @ strict)
        comparable = strict | strict.T
        incomparable = ~(comparable | diag)
        for arr in (leq, strict, covers, comparable, incomparable):
            arr.setflags(write=False)
        object.__setattr__(self, "elements", elements)
        object.__setattr__(self, "leq", leq)
        object.__setattr__(self, "strict", strict)
        object.__setattr__(self, "covers", covers)
        object.__setattr__(self, "comparable", comparable)
        object.__setattr__(self, "incomparable", incomparable)
        object.__setattr__(self, "cover_index_pairs", np.argwhere(covers))
        object.__setattr__(self, "_index", {e: i for i, e in enumerate(elements)})
        object.__setattr__(self, "_upper_covers", [np.flatnonzero(covers[i]) for i in range(n)])
        object.__setattr__(self, "_lower_covers", [np.flatnonzero(covers[:, i]) for i in range(n)])

    @property
    def n(self) -> int:
        return len(self.elements)

    def index(self, element: str) -> int:
        return self._index[element]

    def is_leq(self, a: str, b: str) -> bool:
        return bool(self.leq[self._index[a], self._index[b]])

    def is_lt(self, a: str, b: str) -> bool:
        return a != b and self.is_leq(a, b)

    def is_comparable(self, a: str, b: str) -> bool:
        return bool(self.comparable[self._index[a], self._index[b]]) or a == b

    def leq_pairs(self) -> set[tuple[str, str]]:
        return {(self.elements[i], self.elements[j]) for i, j in np.argwhere(self.leq)}

    def minimal_elements(self) -> tuple[str, ...]:
        mask = ~self.strict.any(axis=0)
        return tuple(e for e, m in zip(self.elements, mask) if m)

    def maximal_elements(self) -> tuple[str, ...]:
        mask = ~self.strict.any(axis=1)
        return tuple(e for e, m in zip(self.elements, mask) if m)


def validate_order(elements: Iterable[str], leq: Iterable[tuple[str, str]]) -> OrderedSet:
    """Check the three order axioms and build an :class:`OrderedSet`.

    Raises :class:`AxiomViolation` naming the first axiom that fails, in the
    order reflexivity, antisymmetry, transitivity, with a witness pair or
    triple.
    """
    elements = tuple(sorted(set(elements)))
    index = {e: i for i, e in enumerate(elements)}
    n = len(elements)
    matrix = np.zeros((n, n), dtype=bool)
    for a, b in leq:
        if a not in index or b not in index:
            raise ValueError(f"pair ({a!r}, {b!r}) mentions an unknown element")
        matrix[index[a], index[b]] = True

    for i in range(n):
        if not matrix[i, i]:
            raise AxiomViolation("reflexivity", (elements[i], elements[i]))
    both = matrix & matrix.T & ~np.eye(n, dtype=bool)
    if both.any():
        i, j = np.argwhere(both)[0]
        raise AxiomViolation("antisymmetry", (elements[i], elements[j]))
    missing = (matrix @ matrix) & ~matrix
    if missing.any():
        i, k = np.argwhere(missing)[0]
        j = int(np.flatnonzero(matrix[i] & matrix[:, k])[0])
        raise AxiomViolation("transitivity", (elements[i], elements[j], elements[k]))
    return OrderedSet(elements, matrix)


def transitive_closure(
    pairs: Iterable[tuple[str, str]], elements: Iterable[str] = ()
) -> frozenset[tuple[str, str]]:
    """Smallest reflexive and transitive superset of ``pairs``.

    Raises :class:`CycleDetected` with a witness path if the pairs induce a
    directed cycle among distinct elements.
    """
    pairs = set(pairs)
    names = sorted(set(elements) | {a for a, _ in pairs} | {b for _, b in pairs})
    index = {e: i for i, e in enumerate(names)}
    n = len(names)
    adj = np.zeros((n, n), dtype=bool)
    for a, b in pairs:
        if a != b:
            adj[index[a], index[b]] = True

    reach = adj.copy()
    while True:
        nxt = reach | (reach @ reach)
        if (nxt == reach).all():
            break
        reach = nxt
    mutual = reach & reach.T & ~np.eye(n, dtype=bool)
    if mutual.any():
        i, j = np.argwhere(mutual)[0]
        raise CycleDetected(_witness_path(adj, names, i, j) + _witness_path(adj, names, j, i)[1:-1])

    closure = reach | np.eye(n, dtype=bool)
    return frozenset((names[i], names[j]) for i, j in np.argwhere(closure))


def _witness_path(adj: np.ndarray, names: list[str], src: int, dst: int) -> list[str]:
    """Shortest path src -> dst (src != dst) in the pair digraph."""
    prev = {src: None}
    queue = deque([src])
    while queue and dst not in prev:
        u = queue.popleft()
        for v in np.flatnonzero(adj[u]):
            v = int(v)
            if v not in prev:
                prev[v] = u
                queue.append(v)
    path = [dst]
    while prev[path[-1]] is not None:
        path.append(prev[path[-1]])
    return [names[i] for i in reversed(path)]


def order_from_covers(elements: Iterable[str], pairs: Iterable[tuple[str, str]]) -> OrderedSet:
    """Build a validated order from cover (or any acyclic) pairs."""
    elements = set(elements)
    pairs = set(pairs)
    closure = transitive_closure(pairs, elements)
    names = elements | {a for a, _ in pairs} | {b for _, b in pairs}
    return validate_order(names, closure)


def cover_relation(order: OrderedSet) -> CoverRelation:
    """Pairs a < c whose open interval is empty; the diagram's edges."""
    pairs = tuple(
        sorted((order.elements[i], order.elements[j]) for i, j in order.cover_index_pairs)
    )
    return CoverRelation(pairs)


def random_linear_extension(order: OrderedSet, rng: np.random.Generator) -> LinearExtension:
    """Draw a linear extension by repeated uniform choice among the current
    minimal elements.  Every extension has nonzero probability."""
    n = order.n
    remaining = np.ones(n, dtype=bool)
    # predecessor counts over the strict order restricted to remaining elements
    preds = order.strict.sum(axis=0).astype(int)
    sequence = []
    for _ in range(n):
        candidates = np.flatnonzero(remaining & (preds == 0))
        pick = int(candidates[rng.integers(len(candidates))])
        sequence.append(order.elements[pick])
        remaining[pick] = False
        preds[order.strict[pick]] -= 1
        preds[pick] = -1
    return LinearExtension(tuple(sequence))


def _glb_index(order: OrderedSet, i: int, j: int) -> int | None:
    candidates = np.flatnonzero(order.leq[:, i] & order.leq[:, j])
    if len(candidates) == 0:
        return None
    sub = order.leq[np.ix_(candidates, candidates)]
    greatest = np.flatnonzero(sub.sum(axis=0) == len(candidates))
    return int(candidates[greatest[0]]) if len(greatest) else None


def _lub_index(order: OrderedSet, i: int, j: int) -> int | None:
    candidates = np.flatnonzero(order.leq[i] & order.leq[j])
    if len(candidates) == 0:
        return None
    sub = order.leq[np.ix_(candidates, candidates)]
    least = np.flatnonzero(sub.sum(axis=1) == len(candidates))
    return int(candidates[least[0]]) if len(least) else None


def meet(order: OrderedSet, a: str, b: str) -> str | None:
    """Greatest lower bound of a and b, or None if it does not exist."""
    k = _glb_index(order, order.index(a), order.index(b))
    return order.elements[k] if k is not None else None


def join(order: OrderedSet, a: str, b: str) -> str | None:
    """Least upper bound of a and b, or None if it does not exist."""
    k = _lub_index(order, order.index(a), order.index(b))
    return order.elements[k] if k is not None else None


def is_lattice(order: OrderedSet) -> bool:
    """True iff every element pair has both a meet and a join."""
    for i in range(order.n):
        for j in range(i, order.n):
            if _glb_index(order, i, j) is None or _lub_index(order, i, j) is None:
                return False
    return True


def bottom(order: OrderedSet) -> str | None:
    """The unique minimum, if there is one."""
    mins = order.minimal_elements()
    return mins[0] if len(mins) == 1 else None


def top(order: OrderedSet) -> str | None:
    """The unique maximum, if there is one."""
    maxs = order.maximal_elements()
    return maxs[0] if len(maxs) == 1 else None
