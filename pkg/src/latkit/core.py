"""Finite bounded lattices with exact table-based arithmetic.

A lattice is stored as a dense boolean order matrix ``leq`` together with
precomputed join and meet tables, so every lattice operation after
construction is a constant-time lookup.  Construction validates everything:
the order axioms, existence of all binary joins and meets, and the presence
of a bottom and a top.  Instances are immutable.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from typing import Iterable, Sequence

import numpy as np


class LatticeError(Exception):
    """Base class for every structural error raised by this package."""


class NotAPoset(LatticeError):
    """The input relation is not reflexive, antisymmetric and transitive."""


class NotALattice(LatticeError):
    """Some pair of elements has no least upper bound or no greatest lower bound."""


class NotBounded(LatticeError):
    """The order has no minimum or no maximum element."""


class EmptyInterval(LatticeError):
    """An interval [a, b] was requested with a not below b."""


class NotInjective(LatticeError):
    """A map that must be injective identifies two elements."""


class PreconditionFailed(LatticeError):
    """An operation was applied to a lattice outside its stated domain."""


def _ensure(condition: bool, message: str) -> None:
    # Internal consistency checks; these guard invariants, not user input.
    if not condition:
        raise LatticeError(message)


def _bool_closure(rel: np.ndarray) -> np.ndarray:
    """Reflexive-transitive closure by repeated boolean matrix squaring."""
    n = rel.shape[0]
    closure = rel | np.eye(n, dtype=bool)
    while True:
        nxt = closure | (closure @ closure)
        if np.array_equal(nxt, closure):
            return closure
        closure = nxt


class FiniteLattice:
    """A finite bounded lattice on elements ``0 .. n-1``.

    ``leq[i, j]`` holds iff element ``i`` is below element ``j``.  Every
    element carries a distinct string label; constructions derive fresh
    labels from the labels of the inputs.
    """

    __slots__ = ("n", "leq", "join_table", "meet_table", "bottom", "top", "labels")

    def __init__(self, leq: np.ndarray, labels: Sequence[str] | None = None):
        leq = np.array(leq, dtype=bool)
        if leq.ndim != 2 or leq.shape[0] != leq.shape[1]:
            raise NotAPoset("order matrix must be square")
        n = leq.shape[0]
        if n == 0:
            raise NotBounded("a bounded lattice cannot be empty")
        self.n = n
        _check_partial_order(leq)
        if labels is None:
            labels = tuple(str(i) for i in range(n))
        else:
            labels = tuple(str(x) for x in labels)
            if len(labels) != n:
                raise LatticeError("label count does not match element count")
            if len(set(labels)) != n:
                raise LatticeError("labels must be pairwise distinct")
        self.labels = labels

        bottoms = np.flatnonzero(leq.all(axis=1))
        tops = np.flatnonzero(leq.all(axis=0))
        if len(bottoms) != 1 or len(tops) != 1:
            raise NotBounded("order must have a unique minimum and maximum")
        self.bottom = int(bottoms[0])
        self.top = int(tops[0])

        self.join_table = _lub_table(leq)
        self.meet_table = _lub_table(leq.T).T
        for arr in (leq, self.join_table, self.meet_table):
            arr.setflags(write=False)
        self.leq = leq

    # -- constructors -----------------------------------------------------

    @classmethod
    def from_order(cls, leq, labels: Sequence[str] | None = None) -> "FiniteLattice":
        """Build and fully validate a lattice from an order matrix."""
        return cls(leq, labels)

    @classmethod
    def from_covers(
        cls, labels: Sequence[str], covers: Iterable[tuple[str, str]]
    ) -> "FiniteLattice":
        """Build a lattice from labels and a cover list of (lower, upper) pairs.

        Element order in ``labels`` fixes the indices.  The cover relation is
        closed reflexively and transitively; a cycle raises :class:`NotAPoset`.
        """
        labels = [str(x) for x in labels]
        if len(set(labels)) != len(labels):
            raise LatticeError("labels must be pairwise distinct")
        index = {lab: i for i, lab in enumerate(labels)}
        n = len(labels)
        rel = np.zeros((n, n), dtype=bool)
        for low, high in covers:
            low, high = str(low), str(high)
            if low not in index or high not in index:
                raise LatticeError(f"cover ({low!r}, {high!r}) names an unknown element")
            if low == high:
                raise NotAPoset(f"cover ({low!r}, {high!r}) is a loop")
            rel[index[low], index[high]] = True
        leq = _bool_closure(rel)
        cyc = leq & leq.T & ~np.eye(n, dtype=bool)
        if cyc.any():
            i, j = map(int, np.argwhere(cyc)[0])
            raise NotAPoset(f"cover cycle through {labels[i]!r} and {labels[j]!r}")
        return cls(leq, labels)

    @classmethod
    def from_json(cls, text: str) -> "FiniteLattice":
        """Parse the lattice interchange format (``elements`` + ``covers``)."""
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise LatticeError(f"invalid JSON: {exc}") from None
        if not isinstance(data, dict) or "elements" not in data or "covers" not in data:
            raise LatticeError("lattice JSON needs 'elements' and 'covers' keys")
        covers = [(str(a), str(b)) for a, b in data["covers"]]
        return cls.from_covers([str(x) for x in data["elements"]], covers)

    def to_json(self) -> str:
        data = {
            "elements": list(self.labels),
            "covers": [[self.labels[i], self.labels[j]] for i, j in self.covers()],
        }
        return json.dumps(data, sort_keys=True)

    # -- basic queries -----------------------------------------------------

    def __len__(self) -> int:
        return self.n

    def __eq__(self, other) -> bool:
        if not isinstance(other, FiniteLattice):
            return NotImplemented
        return (
            self.n == other.n
            and self.labels == other.labels
            and np.array_equal(self.leq, other.leq)
        )

    __hash__ = None  # mutable-free but not hashable; compare structurally

    def __repr__(self) -> str:
        return f"FiniteLattice(n={self.n})"

    def le(self, x: int, y: int) -> bool:
        return bool(self.leq[x, y])

    def lt(self, x: int, y: int) -> bool:
        return x != y and bool(self.leq[x, y])

    def join(self, x: int, y: int) -> int:
        return int(self.join_table[x, y])

    def meet(self, x: int, y: int) -> int:
        return int(self.meet_table[x, y])

    def join_all(self, elements: Iterable[int]) -> int:
        """Join of any finite family; the empty join is the bottom."""
        out = self.bottom
        for x in elements:
            out = int(self.join_table[out, x])
        return out

    def meet_all(self, elements: Iterable[int]) -> int:
        """Meet of any finite family; the empty meet is the top."""
        out = self.top
        for x in elements:
            out = int(self.meet_table[out, x])
        return out

    def label(self, x: int) -> str:
        return self.labels[x]

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise LatticeError(f"no element labelled {label!r}") from None

    def atoms(self) -> tuple[int, ...]:
        """Elements covering the bottom."""
        above_bottom = self.leq[self.bottom] & ~_eye_row(self.n, self.bottom)
        out = []
        for x in np.flatnonzero(above_bottom):
            below_x = self.leq[:, x] & above_bottom
            if below_x.sum() == 1:  # only x itself sits strictly above bottom
                out.append(int(x))
        return tuple(out)

    def covers(self) -> list[tuple[int, int]]:
        """All cover pairs (lower, upper), sorted."""
        strict = self.leq & ~np.eye(self.n, dtype=bool)
        cov = strict & ~(strict @ strict)
        return [(int(i), int(j)) for i, j in np.argwhere(cov)]

    def lower_covers(self, x: int) -> tuple[int, ...]:
        strict = self.leq[:, x].copy()
        strict[x] = False
        out = []
        for y in np.flatnonzero(strict):
            between = self.leq[y] & strict
            if between.sum() == 1:
                out.append(int(y))
        return tuple(out)

    def join_irreducibles(self) -> tuple[int, ...]:
        """Elements with exactly one lower cover."""
        return tuple(x for x in range(self.n) if len(self.lower_covers(x)) == 1)

    def interval(self, a: int, b: int) -> tuple[int, ...]:
        """All x with a <= x <= b; raises if the interval is empty."""
        if not self.leq[a, b]:
            raise EmptyInterval(
                f"interval [{self.labels[a]}, {self.labels[b]}] is empty"
            )
        return tuple(int(x) for x in np.flatnonzero(self.leq[a] & self.leq[:, b]))

    def filter(self, a: int) -> tuple[int, ...]:
        """The principal filter: all x above a."""
        return tuple(int(x) for x in np.flatnonzero(self.leq[a]))

    def complement_filter(self, a: int) -> tuple[int, ...]:
        """All x not above a."""
        return tuple(int(x) for x in np.flatnonzero(~self.leq[a]))

    def is_meet_subsemilattice(self, subset: Iterable[int]) -> bool:
        """True iff the subset is closed under binary meets."""
        elems = sorted(set(int(x) for x in subset))
        members = set(elems)
        return all(
            int(self.meet_table[x, y]) in members for x in elems for y in elems
        )

    def is_sublattice(self, subset: Iterable[int]) -> bool:
        """True iff the subset is closed under binary meets and joins."""
        elems = sorted(set(int(x) for x in subset))
        members = set(elems)
        return all(
            int(self.meet_table[x, y]) in members
            and int(self.join_table[x, y]) in members
            for x in elems
            for y in elems
        )

    def restrict(self, subset: Iterable[int], relabel=None) -> "FiniteLattice":
        """The induced order on a subset, revalidated as a lattice.

        Meets and joins are recomputed inside the subset, so this is the
        right primitive both for sublattices and for join-closed subsets
        whose meets differ from the ambient ones.
        """
        elems = sorted(set(int(x) for x in subset))
        sub = self.leq[np.ix_(elems, elems)]
        labels = [self.labels[i] for i in elems] if relabel is None else relabel
        return FiniteLattice(sub, labels)


def _eye_row(n: int, i: int) -> np.ndarray:
    row = np.zeros(n, dtype=bool)
    row[i] = True
    return row


def _check_partial_order(leq: np.ndarray) -> None:
    n = leq.shape[0]
    if not leq.diagonal().all():
        raise NotAPoset("order is not reflexive")
    sym = leq & leq.T & ~np.eye(n, dtype=bool)
    if sym.any():
        i, j = map(int, np.argwhere(sym)[0])
        raise NotAPoset(f"order is not antisymmetric at ({i}, {j})")
    if ((leq @ leq) & ~leq).any():
        raise NotAPoset("order is not transitive")


def _lub_table(leq: np.ndarray) -> np.ndarray:
    """Least upper bounds of all pairs, or NotALattice.

    The common upper bounds of x and y form the up-set of their join when
    the join exists, so the table can be read off a signature index of rows.
    """
    n = leq.shape[0]
    row_of = {leq[i].tobytes(): i for i in range(n)}
    table = np.empty((n, n), dtype=np.int32)
    for x in range(n):
        for y in range(x, n):
            bounds = leq[x] & leq[y]
            z = row_of.get(bounds.tobytes())
            if z is None:
                raise NotALattice(f"elements {x} and {y} have no least upper bound")
            table[x, y] = table[y, x] = z
    return table


# -- embeddings -----------------------------------------------------------


@dataclass(frozen=True)
class Preservation:
    """Which operations a map is verified to preserve.

    ``atoms`` means the atom predicate is both preserved and reflected:
    x is an atom of the source iff its image is an atom of the target.
    """

    join: bool
    meet: bool
    zero: bool
    one: bool
    atoms: bool

    def all_flags(self) -> bool:
        return self.join and self.meet and self.zero and self.one and self.atoms

    def as_dict(self) -> dict[str, bool]:
        return {
            "join": self.join,
            "meet": self.meet,
            "zero": self.zero,
            "one": self.one,
            "atoms": self.atoms,
        }


@dataclass(frozen=True)
class EmbeddingMap:
    """An injective map between lattices with verified preservation flags."""

    source: FiniteLattice
    target: FiniteLattice
    map: tuple[int, ...]
    preserved: Preservation

    def __call__(self, x: int) -> int:
        return self.map[x]


def verify_embedding(
    source: FiniteLattice,
    target: FiniteLattice,
    mapping: Sequence[int],
) -> EmbeddingMap:
    """Check a candidate embedding exhaustively and record what it preserves.

    The map must be total and injective; each preservation flag is computed
    over every element (or pair of elements) of the source.
    """
    mapping = tuple(int(x) for x in mapping)
    if len(mapping) != source.n:
        raise LatticeError("embedding map must be total on the source")
    if any(x < 0 or x >= target.n for x in mapping):
        raise LatticeError("embedding map leaves the target")
    if len(set(mapping)) != source.n:
        raise NotInjective("embedding map identifies two source elements")

    arr = np.array(mapping)
    join_ok = bool(
        np.array_equal(
            target.join_table[np.ix_(arr, arr)], arr[source.join_table]
        )
    )
    meet_ok = bool(
        np.array_equal(
            target.meet_table[np.ix_(arr, arr)], arr[source.meet_table]
        )
    )
    zero_ok = mapping[source.bottom] == target.bottom
    one_ok = mapping[source.top] == target.top
    src_atoms = set(source.atoms())
    tgt_atoms = set(target.atoms())
    atoms_ok = all(
        (x in src_atoms) == (mapping[x] in tgt_atoms) for x in range(source.n)
    )
    return EmbeddingMap(
        source,
        target,
        mapping,
        Preservation(join_ok, meet_ok, zero_ok, one_ok, atoms_ok),
    )
