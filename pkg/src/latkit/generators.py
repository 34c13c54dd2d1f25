"""Witness-lattice generators and exhaustive small-lattice enumeration."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from typing import Iterable, Iterator, Sequence

import numpy as np

from .core import FiniteLattice, LatticeError, NotALattice, _check_partial_order


class TooLarge(LatticeError):
    """A generator was asked for more than its documented size bound."""


# -- named families ----------------------------------------------------------


def boolean(n: int) -> FiniteLattice:
    """The boolean lattice of all subsets of an n-element set."""
    if n < 0:
        raise TooLarge("boolean(n) needs n >= 0")
    if n > 16:
        raise TooLarge("boolean(n) is bounded at n = 16")
    size = 1 << n
    masks = np.arange(size, dtype=np.int64)
    leq = (masks[:, None] & ~masks[None, :]) == 0
    labels = ["{" + ",".join(str(i) for i in range(n) if m >> i & 1) + "}" for m in masks]
    return FiniteLattice(leq, labels)


def chain(n: int) -> FiniteLattice:
    """The n-element chain 0 < 1 < ... < n-1."""
    if n < 1:
        raise TooLarge("chain(n) needs n >= 1")
    leq = np.triu(np.ones((n, n), dtype=bool))
    return FiniteLattice(leq, [str(i) for i in range(n)])


def co_chain(n: int) -> FiniteLattice:
    """Order-convex subsets of the n-element chain, ordered by inclusion.

    The elements are the empty set plus the intervals [i, j] with
    1 <= i <= j <= n, so the lattice has 1 + n(n+1)/2 elements.
    """
    if n < 1:
        raise TooLarge("co_chain(n) needs n >= 1")
    intervals = [None] + sorted(
        ((i, j) for i in range(1, n + 1) for j in range(i, n + 1)),
        key=lambda ij: (ij[1] - ij[0], ij[0]),
    )
    k = len(intervals)
    leq = np.zeros((k, k), dtype=bool)
    for s, low in enumerate(intervals):
        for t, high in enumerate(intervals):
            if low is None:
                leq[s, t] = True
            elif high is None:
                leq[s, t] = False
            else:
                leq[s, t] = high[0] <= low[0] and low[1] <= high[1]
    labels = ["{}"] + [f"[{i},{j}]" for i, j in intervals[1:]]
    return FiniteLattice(leq, labels)


# -- meet-semilattices --------------------------------------------------------


class NotAMeetSemilattice(LatticeError):
    """The input order is missing some binary meet."""


class MeetSemilattice:
    """A finite poset in which every pair has a greatest lower bound.

    Only meets are required to be total; joins may be missing.  This is the
    input shape for :func:`sub_meet_semilattice`.
    """

    __slots__ = ("n", "leq", "meet_table", "labels")

    def __init__(self, leq: np.ndarray, labels: Sequence[str] | None = None):
        leq = np.array(leq, dtype=bool)
        if leq.ndim != 2 or leq.shape[0] != leq.shape[1] or leq.shape[0] == 0:
            raise NotAMeetSemilattice("order matrix must be square and nonempty")
        _check_partial_order(leq)
        n = leq.shape[0]
        col_of = {leq[:, i].tobytes(): i for i in range(n)}
        table = np.empty((n, n), dtype=np.int32)
        for x in range(n):
            for y in range(x, n):
                bounds = leq[:, x] & leq[:, y]
                z = col_of.get(bounds.tobytes())
                if z is None:
                    raise NotAMeetSemilattice(
                        f"elements {x} and {y} have no greatest lower bound"
                    )
                table[x, y] = table[y, x] = z
        self.n = n
        if labels is None:
            labels = tuple(str(i) for i in range(n))
        else:
            labels = tuple(str(x) for x in labels)
            if len(labels) != n or len(set(labels)) != n:
                raise LatticeError("labels must be distinct and match the size")
        self.labels = labels
        self.meet_table = table
        leq.setflags(write=False)
        table.setflags(write=False)
        self.leq = leq

    @classmethod
    def from_lattice(cls, L: FiniteLattice) -> "MeetSemilattice":
        return cls(L.leq, L.labels)

    @classmethod
    def from_covers(cls, labels, covers) -> "MeetSemilattice":
        # reuse the lattice cover parser for the order, then revalidate meets
        from .core import _bool_closure

        labels = [str(x) for x in labels]
        index = {lab: i for i, lab in enumerate(labels)}
        if len(index) != len(labels):
            raise LatticeError("labels must be pairwise distinct")
        n = len(labels)
        rel = np.zeros((n, n), dtype=bool)
        for low, high in covers:
            rel[index[str(low)], index[str(high)]] = True
        return cls(_bool_closure(rel), labels)

    def meet(self, x: int, y: int) -> int:
        return int(self.meet_table[x, y])

    def __len__(self) -> int:
        return self.n


def sub_meet_semilattice(P) -> FiniteLattice:
    """The lattice of all meet-closed subsets of P, ordered by inclusion.

    The empty set is meet-closed, so it is the bottom.  The input may be a
    :class:`MeetSemilattice` or any :class:`FiniteLattice`.
    """
    if isinstance(P, FiniteLattice):
        P = MeetSemilattice.from_lattice(P)
    if P.n > 5:
        raise TooLarge("sub_meet_semilattice is bounded at 5 generators")
    meets = P.meet_table
    closed_masks = []
    for mask in range(1 << P.n):
        members = [i for i in range(P.n) if mask >> i & 1]
        if all(mask >> meets[x, y] & 1 for x in members for y in members):
            closed_masks.append(mask)
    closed_masks.sort(key=lambda m: (bin(m).count("1"), m))
    k = len(closed_masks)
    leq = np.zeros((k, k), dtype=bool)
    for s, low in enumerate(closed_masks):
        for t, high in enumerate(closed_masks):
            leq[s, t] = (low & ~high) == 0
    labels = [
        "{" + ",".join(P.labels[i] for i in range(P.n) if m >> i & 1) + "}"
        for m in closed_masks
    ]
    return FiniteLattice(leq, labels)


# -- exhaustive enumeration ----------------------------------------------------


def canonical_key(L: FiniteLattice) -> bytes:
    """A label-independent fingerprint: two lattices share it iff isomorphic.

    Computed as the minimum, over structure-respecting relabelings, of the
    flattened cover matrix.  Candidate relabelings are restricted by an
    iteratively refined coloring, which keeps the search tiny at these sizes.
    """
    n = L.n
    strict = L.leq & ~np.eye(n, dtype=bool)
    cov = strict & ~(strict @ strict)

    colors = [
        (int(L.leq[:, x].sum()), int(L.leq[x].sum()), int(cov[:, x].sum()), int(cov[x].sum()))
        for x in range(n)
    ]
    while True:
        palette = {c: i for i, c in enumerate(sorted(set(colors)))}
        coded = [palette[c] for c in colors]
        refined = [
            (
                coded[x],
                tuple(sorted(coded[y] for y in range(n) if cov[x, y])),
                tuple(sorted(coded[y] for y in range(n) if cov[y, x])),
            )
            for x in range(n)
        ]
        if len(set(refined)) == len(set(colors)):
            colors = refined
            break
        colors = refined

    palette = {c: i for i, c in enumerate(sorted(set(colors)))}
    coded = [palette[c] for c in colors]
    classes: dict[int, list[int]] = {}
    for x in range(n):
        classes.setdefault(coded[x], []).append(x)
    ordered_classes = [classes[c] for c in sorted(classes)]

    best = None
    for perm_parts in _product_permutations(ordered_classes):
        order = [x for part in perm_parts for x in part]
        # order[i] = source element placed at position i
        arr = np.array(order)
        candidate = cov[np.ix_(arr, arr)].tobytes()
        if best is None or candidate < best:
            best = candidate
    return bytes([n]) + best


def _product_permutations(class_lists):
    if not class_lists:
        yield []
        return
    head, *rest = class_lists
    for perm in permutations(head):
        for tail in _product_permutations(rest):
            yield [list(perm)] + tail


def _bounded_meet_semilattices_linear(n: int) -> Iterator[tuple[int, ...]]:
    """All down-set vectors of lattices on 0..n-1 in linear-extension order.

    ``down[k]`` is the bitmask of elements below-or-equal to k.  Element 0 is
    the bottom, element n-1 the top, and every binary meet is checked as soon
    as both elements exist, so each completed vector describes a lattice.
    """

    def extend(down: list[int]) -> Iterator[tuple[int, ...]]:
        k = len(down)
        if k == n:
            yield tuple(down)
            return
        if k == 0:
            yield from extend([1])
            return
        full = (1 << k) - 1
        choices = [full] if k == n - 1 else _downward_closed_masks(down, full)
        for mask in choices:
            ok = True
            newdown = mask | (1 << k)
            for j in range(k):
                common = newdown & down[j]
                if not _has_maximum(common, down):
                    ok = False
                    break
            if ok:
                yield from extend(down + [newdown])

    yield from extend([])


def _downward_closed_masks(down: list[int], full: int) -> list[int]:
    k = len(down)
    out = []
    for mask in range(1, full + 1):
        if not mask & 1:  # must contain the bottom
            continue
        closed = True
        m = mask
        while m:
            i = (m & -m).bit_length() - 1
            if down[i] & ~mask:
                closed = False
                break
            m &= m - 1
        if closed:
            out.append(mask)
    return out


def _has_maximum(common: int, down: list[int]) -> bool:
    m = common
    while m:
        i = m.bit_length() - 1
        if common & ~down[i] == 0:
            return True
        m &= ~(1 << i)
        # only elements that could dominate all of common matter; scanning
        # from the top bit down exits quickly in practice
    return False


def enumerate_lattices(n: int) -> Iterator[FiniteLattice]:
    """Every lattice with exactly n elements, one per isomorphism class.

    Output order is deterministic: ascending canonical cover-matrix key.
    Bounded at n = 7.
    """
    if n < 1:
        raise TooLarge("enumerate_lattices(n) needs n >= 1")
    if n > 7:
        raise TooLarge("enumerate_lattices is bounded at n = 7")
    if n == 1:
        yield FiniteLattice(np.ones((1, 1), dtype=bool), ["e0"])
        return
    seen: dict[bytes, FiniteLattice] = {}
    for down in _bounded_meet_semilattices_linear(n):
        leq = np.zeros((n, n), dtype=bool)
        for j in range(n):
            for i in range(n):
                leq[i, j] = bool(down[j] >> i & 1)
        L = FiniteLattice(leq, [f"e{i}" for i in range(n)])
        key = canonical_key(L)
        if key not in seen:
            seen[key] = L
    for key in sorted(seen):
        yield seen[key]


def meet_semilattices(n: int) -> Iterator[MeetSemilattice]:
    """Every meet-semilattice with exactly n elements, up to isomorphism.

    Adding a fresh top to a meet-semilattice gives a lattice, and removing
    the top of a lattice gives a meet-semilattice; the two moves are inverse
    on isomorphism classes, so the enumeration rides on enumerate_lattices.
    """
    for L in enumerate_lattices(n + 1):
        keep = [x for x in range(L.n) if x != L.top]
        sub = L.leq[np.ix_(keep, keep)]
        yield MeetSemilattice(sub, [f"m{i}" for i in range(n)])


def small_lattices(max_n: int) -> Iterator[FiniteLattice]:
    """All lattices with at most max_n elements, one per isomorphism class."""
    for n in range(1, max_n + 1):
        yield from enumerate_lattices(n)
