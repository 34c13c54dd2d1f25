"""Structural analyzers for finite lattices.

Predicates (atomic, atomistic, biatomic, join-semidistributive, lower
bounded), the join-dependency relation with its closures, minimal join
decompositions into atoms, and the enumeration of biatomicity problems.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .core import FiniteLattice, LatticeError, PreconditionFailed, _bool_closure


class NoLeastDecomposition(LatticeError):
    """The two characterizations of the minimal decomposition disagree."""


# -- basic predicates -------------------------------------------------------


def is_atomic(L: FiniteLattice) -> bool:
    """True iff every nonzero element lies above an atom."""
    atoms = L.atoms()
    if not atoms:
        return L.n == 1
    covered = np.zeros(L.n, dtype=bool)
    for p in atoms:
        covered |= L.leq[p]
    covered[L.bottom] = True
    return bool(covered.all())


def atomistic_violation(L: FiniteLattice) -> int | None:
    """Least element that is not the join of the atoms below it."""
    atoms = L.atoms()
    for x in range(L.n):
        if L.join_all(p for p in atoms if L.leq[p, x]) != x:
            return x
    return None


def is_atomistic(L: FiniteLattice) -> bool:
    """True iff every element is the join of the atoms below it."""
    return atomistic_violation(L) is None


def biatomic_by_splitting(L: FiniteLattice) -> bool:
    """Biatomicity checked against its definition.

    For every atom p and nonzero a, b with p <= a v b there must be atoms
    x <= a and y <= b with p <= x v y.
    """
    if not is_atomic(L):
        return False
    atoms = np.array(L.atoms(), dtype=np.int64)
    if len(atoms) == 0:
        return True  # singleton
    nonzero = np.arange(L.n) != L.bottom
    # below[e, i]: atom i lies below element e
    below = L.leq[atoms, :].T
    atom_join = L.join_table[np.ix_(atoms, atoms)]
    for p in atoms:
        # need[a, b]: p <= a v b for nonzero a, b
        need = L.leq[p][L.join_table] & nonzero[:, None] & nonzero[None, :]
        # reach[x, y]: p <= x v y over atom pairs
        reach = L.leq[p][atom_join]
        solvable = (below @ reach) @ below.T  # any x <= a, y <= b with p <= x v y
        if (need & ~solvable).any():
            return False
    return True


def biatomic_by_single_atom(L: FiniteLattice) -> bool:
    """Biatomicity checked through the one-sided atom criterion.

    Equivalent reduction: L is atomic, and whenever an atom p satisfies
    p <= a v b with p not below a and not below b, some atom q <= a
    already has p <= q v b.
    """
    if not is_atomic(L):
        return False
    atoms = np.array(L.atoms(), dtype=np.int64)
    if len(atoms) == 0:
        return True
    nonzero = np.arange(L.n) != L.bottom
    below = L.leq[atoms, :].T
    for p in atoms:
        need = (
            L.leq[p][L.join_table]
            & ~L.leq[p][:, None]
            & ~L.leq[p][None, :]
            & nonzero[:, None]
            & nonzero[None, :]
        )
        # reach[q, b]: p <= q v b for atom q, element b
        reach = L.leq[p][L.join_table[atoms, :]]
        solvable = below @ reach
        if (need & ~solvable).any():
            return False
    return True


def is_biatomic(L: FiniteLattice) -> bool:
    """Biatomicity, computed by two independent routes that must agree."""
    a = biatomic_by_splitting(L)
    b = biatomic_by_single_atom(L)
    if a != b:
        raise LatticeError("biatomicity implementations disagree")
    return a


def jsd_violation(L: FiniteLattice) -> tuple[int, int, int] | None:
    """Lexicographically first (x, y, z) with x v y = x v z but x v y != x v (y ^ z)."""
    for x in range(L.n):
        jx = L.join_table[x]
        merged = jx[:, None] == jx[None, :]
        collapsed = jx[:, None] == jx[L.meet_table]
        bad = merged & ~collapsed
        if bad.any():
            y, z = map(int, np.argwhere(bad)[0])
            return (x, y, z)
    return None


def is_join_semidistributive(L: FiniteLattice) -> bool:
    """True iff x v y = x v z always forces x v y = x v (y ^ z)."""
    return jsd_violation(L) is None


# -- join-dependency --------------------------------------------------------


@dataclass(frozen=True)
class DependencyRelation:
    """The join-dependency relation on atoms or join-irreducible elements.

    ``d[i, j]`` says elements[i] depends on elements[j]; ``witnesses[i, j]``
    stores one witnessing u (or -1).  ``strict_tc`` is the transitive
    closure of ``d`` and ``refl_tc`` its reflexive-transitive closure.
    """

    lattice: FiniteLattice
    on: str
    elements: tuple[int, ...]
    d: np.ndarray
    d_bar: np.ndarray
    strict_tc: np.ndarray
    refl_tc: np.ndarray
    witnesses: np.ndarray

    def index_of(self, element: int) -> int:
        return self.elements.index(element)


def join_dependency(L: FiniteLattice, on: str = "atoms") -> DependencyRelation:
    """Compute join-dependency with one witness per related pair.

    For atoms x, y: x depends on y iff x != y and some u has x <= y v u
    with x not below u.  On join-irreducibles the lower cover y_* of y
    replaces the bottom: x <= y v u with x not below y_* v u.  The two
    shapes coincide on atoms.
    """
    if on == "atoms":
        elements = L.atoms()
    elif on == "join_irreducibles":
        elements = L.join_irreducibles()
    else:
        raise ValueError(f"unknown carrier {on!r}")
    k = len(elements)
    d = np.zeros((k, k), dtype=bool)
    witnesses = np.full((k, k), -1, dtype=np.int32)
    for j, y in enumerate(elements):
        if on == "atoms":
            star_row = L.leq  # y_* = bottom, so x <= y_* v u is just x <= u
        else:
            (y_star,) = L.lower_covers(y)
            star_row = L.leq[:, L.join_table[y_star]]
        join_y = L.join_table[y]
        for i, x in enumerate(elements):
            if x == y:
                continue
            hits = L.leq[x][join_y] & ~star_row[x]
            if hits.any():
                d[i, j] = True
                witnesses[i, j] = int(np.argmax(hits))
    d_bar = d | np.eye(k, dtype=bool)
    refl_tc = _bool_closure(d)
    strict_tc = _strict_closure(d)
    d.setflags(write=False)
    d_bar.setflags(write=False)
    strict_tc.setflags(write=False)
    refl_tc.setflags(write=False)
    witnesses.setflags(write=False)
    return DependencyRelation(L, on, elements, d, d_bar, strict_tc, refl_tc, witnesses)


def _strict_closure(rel: np.ndarray) -> np.ndarray:
    """Transitive (not reflexive) closure by repeated squaring."""
    closure = rel.copy()
    while True:
        nxt = closure | (closure @ closure)
        if np.array_equal(nxt, closure):
            return closure
        closure = nxt


def is_lower_bounded(L: FiniteLattice) -> bool:
    """Finite characterization: no cycle in join-dependency on join-irreducibles."""
    rel = join_dependency(L, on="join_irreducibles")
    return not bool(rel.strict_tc.diagonal().any())


# -- decompositions ----------------------------------------------------------


def _require_atomistic_jsd(L: FiniteLattice, who: str) -> None:
    if not is_atomistic(L):
        raise PreconditionFailed(f"{who} needs an atomistic lattice")
    if not is_join_semidistributive(L):
        raise PreconditionFailed(f"{who} needs a join-semidistributive lattice")


def minimal_decomposition(L: FiniteLattice, a: int) -> tuple[int, ...]:
    """The containment-least set of atoms joining to a.

    Two characterizations are computed and must agree: the unique
    irredundant decomposition (obtained greedily, which is sound because
    irredundant decompositions are unique here), and the atoms below a that
    are join-prime within the ideal [0, a].
    """
    _require_atomistic_jsd(L, "minimal_decomposition")
    below = [p for p in L.atoms() if L.leq[p, a]]

    kept = list(below)
    changed = True
    while changed:
        changed = False
        for p in list(kept):
            rest = [x for x in kept if x != p]
            if L.join_all(rest) == a:
                kept.remove(p)
                changed = True
    irredundant = tuple(sorted(kept))

    ideal = [x for x in range(L.n) if L.leq[x, a]]
    primes = []
    for p in below:
        prime = all(
            not L.leq[p, L.join_table[x, y]] or L.leq[p, x] or L.leq[p, y]
            for x in ideal
            for y in ideal
        )
        if prime:
            primes.append(p)
    primes = tuple(sorted(primes))

    if irredundant != primes:
        raise NoLeastDecomposition(
            f"decomposition characterizations disagree at {L.labels[a]!r}"
        )
    if L.join_all(irredundant) != a:
        raise NoLeastDecomposition(f"no atom set joins to {L.labels[a]!r}")
    return irredundant


def ell(L: FiniteLattice, x: int) -> int:
    """Least cardinality of a set of atoms joining to x."""
    if not is_atomistic(L):
        raise PreconditionFailed("ell needs an atomistic lattice")
    below = [p for p in L.atoms() if L.leq[p, x]]
    for k in range(len(below) + 1):
        for subset in combinations(below, k):
            if L.join_all(subset) == x:
                return k
    raise LatticeError("unreachable: atomistic lattice decomposes every element")


def separates(L: FiniteLattice, probes, among) -> bool:
    """True iff for every x not below y in `among` some probe is below x, not y."""
    probes = list(probes)
    among = list(among)
    for x in among:
        for y in among:
            if not L.leq[x, y]:
                if not any(L.leq[p, x] and not L.leq[p, y] for p in probes):
                    return False
    return True


# -- biatomicity problems ----------------------------------------------------


@dataclass(frozen=True)
class BiatomicityProblem:
    """An instance p <= a v b with the atom p below neither a nor b.

    ``solution`` holds atoms (x, y) with x <= a, y <= b, p <= x v y when
    one exists in the ambient lattice; otherwise the problem is open.
    """

    p: int
    a: int
    b: int
    solved: bool
    solution: tuple[int, int] | None


def solve_problem_instance(
    L: FiniteLattice, p: int, a: int, b: int
) -> tuple[int, int] | None:
    """First atom pair (x, y), x <= a, y <= b, with p <= x v y, if any."""
    atoms = L.atoms()
    for x in atoms:
        if not L.leq[x, a]:
            continue
        for y in atoms:
            if L.leq[y, b] and L.leq[p, L.join_table[x, y]]:
                return (int(x), int(y))
    return None


def biatomicity_problems(L: FiniteLattice) -> list[BiatomicityProblem]:
    """All problems p <= a v b, deduplicated to a <= b by index, sorted."""
    out = []
    for p in L.atoms():
        for a in range(L.n):
            if a == L.bottom or L.leq[p, a]:
                continue
            for b in range(a, L.n):
                if b == L.bottom or L.leq[p, b]:
                    continue
                if not L.leq[p, L.join_table[a, b]]:
                    continue
                solution = solve_problem_instance(L, p, a, b)
                out.append(
                    BiatomicityProblem(int(p), a, b, solution is not None, solution)
                )
    out.sort(key=lambda pr: (pr.p, pr.a, pr.b))
    return out
