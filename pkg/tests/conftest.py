"""Shared fixtures and brute-force reference implementations.

The oracles here recompute everything from first principles with plain
loops so that the vectorized library code is checked against an
independent route.
"""

from itertools import combinations, permutations, product

import pytest

from latkit.core import FiniteLattice


# -- well-known small lattices ----------------------------------------------------


@pytest.fixture
def m3() -> FiniteLattice:
    return FiniteLattice.from_covers(
        ["0", "p", "q", "r", "1"],
        [("0", "p"), ("0", "q"), ("0", "r"), ("p", "1"), ("q", "1"), ("r", "1")],
    )


@pytest.fixture
def n5() -> FiniteLattice:
    return FiniteLattice.from_covers(
        ["0", "a", "b", "c", "1"],
        [("0", "a"), ("a", "b"), ("b", "1"), ("0", "c"), ("c", "1")],
    )


# -- order-theoretic oracles -------------------------------------------------------


def oracle_lub(L: FiniteLattice, x: int, y: int) -> int | None:
    uppers = [z for z in range(L.n) if L.leq[x, z] and L.leq[y, z]]
    least = [z for z in uppers if all(L.leq[z, w] for w in uppers)]
    return least[0] if least else None


def oracle_glb(L: FiniteLattice, x: int, y: int) -> int | None:
    lowers = [z for z in range(L.n) if L.leq[z, x] and L.leq[z, y]]
    greatest = [z for z in lowers if all(L.leq[w, z] for w in lowers)]
    return greatest[0] if greatest else None


def oracle_atoms(L: FiniteLattice) -> list[int]:
    out = []
    for x in range(L.n):
        if x == L.bottom:
            continue
        strictly_below = [y for y in range(L.n) if L.leq[y, x] and y != x]
        if strictly_below == [L.bottom]:
            out.append(x)
    return out


def oracle_join_all(L: FiniteLattice, xs) -> int:
    out = L.bottom
    for x in xs:
        out = oracle_lub(L, out, x)
    return out


def oracle_atomistic(L: FiniteLattice) -> bool:
    atoms = oracle_atoms(L)
    for x in range(L.n):
        if oracle_join_all(L, [p for p in atoms if L.leq[p, x]]) != x:
            return False
    return True


def oracle_biatomic(L: FiniteLattice) -> bool:
    atoms = oracle_atoms(L)
    for p in atoms:
        for a in range(L.n):
            for b in range(L.n):
                if a == L.bottom or b == L.bottom:
                    continue
                if not L.leq[p, oracle_lub(L, a, b)]:
                    continue
                if any(
                    L.leq[x, a] and L.leq[y, b] and L.leq[p, oracle_lub(L, x, y)]
                    for x in atoms
                    for y in atoms
                ):
                    continue
                return False
    return True


def oracle_jsd(L: FiniteLattice) -> bool:
    for x in range(L.n):
        for y in range(L.n):
            for z in range(L.n):
                if oracle_lub(L, x, y) != oracle_lub(L, x, z):
                    continue
                if oracle_lub(L, x, y) != oracle_lub(L, x, oracle_glb(L, y, z)):
                    return False
    return True


def oracle_join_irreducibles(L: FiniteLattice) -> list[int]:
    out = []
    for x in range(L.n):
        below = [y for y in range(L.n) if L.leq[y, x] and y != x]
        covers = [y for y in below if not any(L.leq[y, z] and z != y for z in below)]
        if len(covers) == 1:
            out.append(x)
    return out


def oracle_lower_bounded(L: FiniteLattice) -> bool:
    """No cycle in the dependency relation on join-irreducibles.

    x D y iff x != y and some u has x <= y v u, x <= y* v u fails, where
    y* is the unique lower cover of the join-irreducible y.
    """
    ji = oracle_join_irreducibles(L)
    star = {}
    for y in ji:
        below = [z for z in range(L.n) if L.leq[z, y] and z != y]
        star[y] = [z for z in below if all(not (L.leq[z, w] and z != w) for w in below)][0]
    d = {(x, y): False for x in ji for y in ji}
    for x in ji:
        for y in ji:
            if x == y:
                continue
            for u in range(L.n):
                if L.leq[x, oracle_lub(L, y, u)] and not L.leq[x, oracle_lub(L, star[y], u)]:
                    d[(x, y)] = True
                    break
    # transitive closure, then look for a cycle through any element
    reach = dict(d)
    for k in ji:
        for i in ji:
            for j in ji:
                if reach[(i, k)] and reach[(k, j)]:
                    reach[(i, j)] = True
    return not any(reach[(x, x)] for x in ji)


def oracle_decompositions(L: FiniteLattice, a: int) -> list[frozenset[int]]:
    """All atom sets joining to a."""
    atoms = [p for p in oracle_atoms(L) if L.leq[p, a]]
    out = []
    for r in range(len(atoms) + 1):
        for sub in combinations(atoms, r):
            if oracle_join_all(L, sub) == a:
                out.append(frozenset(sub))
    return out


def oracle_least_decomposition(L: FiniteLattice, a: int) -> frozenset[int] | None:
    """The decomposition contained in every other one, if it exists."""
    decs = oracle_decompositions(L, a)
    meet = frozenset.intersection(*decs) if decs else frozenset()
    if decs and oracle_join_all(L, sorted(meet)) == a:
        return meet
    return None


def oracle_ell(L: FiniteLattice, x: int) -> int | None:
    atoms = [p for p in oracle_atoms(L) if L.leq[p, x]]
    for r in range(len(atoms) + 1):
        for sub in combinations(atoms, r):
            if oracle_join_all(L, sub) == x:
                return r
    return None


# -- isomorphism and exhaustive enumeration ----------------------------------------


def leq_matrix(L: FiniteLattice) -> tuple[tuple[bool, ...], ...]:
    return tuple(tuple(bool(v) for v in row) for row in L.leq)


def oracle_isomorphic(A, B) -> bool:
    ma, mb = leq_matrix(A), leq_matrix(B)
    if len(ma) != len(mb):
        return False
    n = len(ma)
    for perm in permutations(range(n)):
        if all(ma[i][j] == mb[perm[i]][perm[j]] for i in range(n) for j in range(n)):
            return True
    return False


def _all_labelled_lattice_orders(n: int):
    """Every lattice order on {0..n-1} where i <= j implies i <= j as ints."""
    if n == 0:
        return
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    for bits in product([False, True], repeat=len(pairs)):
        rel = [[i == j for j in range(n)] for i in range(n)]
        for (i, j), bit in zip(pairs, bits):
            if bit:
                rel[i][j] = True
        if any(
            rel[i][k] and rel[k][j] and not rel[i][j]
            for i in range(n)
            for k in range(n)
            for j in range(n)
        ):
            continue
        good = True
        for i in range(n):
            for j in range(n):
                uppers = [z for z in range(n) if rel[i][z] and rel[j][z]]
                if not any(all(rel[z][w] for w in uppers) for z in uppers):
                    good = False
                    break
                lowers = [z for z in range(n) if rel[z][i] and rel[z][j]]
                if not any(all(rel[w][z] for w in lowers) for z in lowers):
                    good = False
                    break
            if not good:
                break
        if good:
            yield tuple(tuple(row) for row in rel)


def oracle_lattice_count(n: int) -> int:
    """Lattices with n elements up to isomorphism, by brute force."""
    classes: list[tuple[tuple[bool, ...], ...]] = []

    def iso(ma, mb) -> bool:
        return any(
            all(ma[i][j] == mb[p[i]][p[j]] for i in range(n) for j in range(n))
            for p in permutations(range(n))
        )

    for rel in _all_labelled_lattice_orders(n):
        if not any(iso(rel, seen) for seen in classes):
            classes.append(rel)
    return len(classes)
