"""Atom-preserving lattice extensions.

Three constructions: the one-shot atom-doubling completion that makes any
finite lattice sit inside an atomistic biatomic one; the single-atom
extension L(a; M) driven by a closure operator, together with the criterion
for when it preserves join-semidistributivity; and the iterated solver that
removes every biatomicity problem of a finite atomistic join-semidistributive
lattice while preserving join-semidistributivity, atom dependencies, and
lower-boundedness.

All constructions keep the original element indices: the result lattice
lists the image of element i of the base at index i, with fresh elements
appended after, so every embedding here is the identity on indices.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    EmbeddingMap,
    FiniteLattice,
    LatticeError,
    PreconditionFailed,
    _ensure,
    verify_embedding,
)
from .analysis import (
    is_atomistic,
    is_biatomic,
    is_join_semidistributive,
    is_lower_bounded,
    join_dependency,
    minimal_decomposition,
    separates,
    solve_problem_instance,
    biatomicity_problems,
)


class BadApex(LatticeError):
    """The distinguished element of an extension pair must be neither the
    bottom nor an atom."""


class NotMeetClosed(LatticeError):
    """The element set of an extension pair must be a meet-subsemilattice."""


class MissingFilter(LatticeError):
    """The element set of an extension pair must contain the bottom and the
    whole principal filter of the apex."""


class SeparationFailed(LatticeError):
    """The atoms do not separate the elements being re-embedded."""


class MinimalityFailed(LatticeError):
    """The apex is not minimal for its problem triple."""


class NotJsdBase(LatticeError):
    """The solver needs an atomistic join-semidistributive base."""


class BadTriple(LatticeError):
    """A problem triple must consist of two distinct atoms and a proper apex."""


class ReValidationFailed(LatticeError):
    """A derived step failed re-validation in the current lattice."""


# -- atom-doubling completion --------------------------------------------------


def biatomic_completion(L: FiniteLattice) -> tuple[FiniteLattice, EmbeddingMap]:
    """Embed L into an atomistic biatomic lattice by doubling non-atoms.

    Every element a outside {0} and the atoms receives two fresh mutually
    incomparable elements p(a), q(a) with a = p(a) v q(a); fresh elements sit
    above only 0 and below exactly the filter of a.  The result has
    |L| + 2k elements where k counts the doubled elements, and the inclusion
    preserves joins, meets, bounds and atoms in both directions.
    """
    atom_set = set(L.atoms())
    doubled = [a for a in range(L.n) if a != L.bottom and a not in atom_set]
    n = L.n
    k = n + 2 * len(doubled)
    leq = np.zeros((k, k), dtype=bool)
    leq[:n, :n] = L.leq
    labels = list(L.labels)
    used = set(labels)
    for t, a in enumerate(doubled):
        for offset, prefix in ((0, "p"), (1, "q")):
            idx = n + 2 * t + offset
            fresh = f"{prefix}({L.labels[a]})"
            while fresh in used:
                fresh += "'"
            used.add(fresh)
            labels.append(fresh)
            leq[idx, idx] = True
            leq[L.bottom, idx] = True
            leq[idx, :n] = L.leq[a]
    result = FiniteLattice(leq, labels)
    emb = verify_embedding(L, result, tuple(range(n)))
    _ensure(emb.preserved.all_flags(), "completion embedding lost structure")
    _ensure(is_atomistic(result), "completion must be atomistic")
    _ensure(is_biatomic(result), "completion must be biatomic")
    return result, emb


# -- atom restriction and re-embedding ------------------------------------------


def atom_restriction(L: FiniteLattice, a: int) -> tuple[FiniteLattice, tuple[int, ...]]:
    """The join-closure of {0} and the atoms below a, as its own lattice.

    Joins agree with L; meets are recomputed inside the restriction (the
    common lower bounds of a pair are join-closed, so their join is the
    greatest one).  Returns the lattice and the element map into L.
    """
    below = [p for p in L.atoms() if L.leq[p, a]]
    closed: set[int] = set(below)
    frontier = list(below)
    while frontier:
        nxt = []
        for x in frontier:
            for y in list(closed):
                z = L.join(x, y)
                if z not in closed:
                    closed.add(z)
                    nxt.append(z)
        frontier = nxt
    closed.add(L.bottom)
    elements = tuple(sorted(closed))
    return L.restrict(elements), elements


def separating_reembedding(M: FiniteLattice, sub) -> EmbeddingMap:
    """Re-embed a sublattice of M into the atom restriction of its top.

    M must be biatomic and join-semidistributive, and the atoms of M must
    separate the sublattice's elements; then sending x to the join of the
    atoms of M below x is a lattice embedding into atom_restriction(M, 1_L),
    where 1_L is the largest element of the sublattice.
    """
    elements = tuple(sorted(set(int(x) for x in sub)))
    if not elements:
        raise PreconditionFailed("cannot re-embed an empty set")
    if not M.is_sublattice(elements):
        raise PreconditionFailed("the element set is not a sublattice")
    if not is_join_semidistributive(M):
        raise PreconditionFailed("ambient lattice must be join-semidistributive")
    if not is_biatomic(M):
        raise PreconditionFailed("ambient lattice must be biatomic")
    if not separates(M, M.atoms(), elements):
        raise SeparationFailed("atoms do not separate the sublattice")

    one = M.join_all(elements)
    target, carrier = atom_restriction(M, one)
    position = {e: i for i, e in enumerate(carrier)}
    probe = [p for p in M.atoms() if M.leq[p, one]]
    mapping = []
    for x in elements:
        fx = M.join_all(p for p in probe if M.leq[p, x])
        mapping.append(position[fx])
    source = M.restrict(elements)
    emb = verify_embedding(source, target, mapping)
    _ensure(
        emb.preserved.join and emb.preserved.meet,
        "separating re-embedding failed to preserve lattice operations",
    )
    return emb


# -- extension pairs and closure operators ---------------------------------------


@dataclass(frozen=True)
class ExtensionPair:
    """A validated pair (apex; subsemilattice) describing a one-atom extension."""

    lattice: FiniteLattice
    apex: int
    subsemilattice: frozenset[int]


def make_extension_pair(L: FiniteLattice, apex: int, subset) -> ExtensionPair:
    """Validate apex and element set for a one-atom extension."""
    members = frozenset(int(x) for x in subset)
    if apex == L.bottom or apex in L.atoms():
        raise BadApex(f"apex {L.labels[apex]!r} is the bottom or an atom")
    if any(x < 0 or x >= L.n for x in members):
        raise LatticeError("element set leaves the lattice")
    required = set(L.filter(apex))
    required.add(L.bottom)
    if not required <= members:
        missing = sorted(required - members)
        raise MissingFilter(
            f"element set misses {[L.labels[x] for x in missing]}"
        )
    if not L.is_meet_subsemilattice(members):
        raise NotMeetClosed("element set is not closed under meets")
    return ExtensionPair(L, int(apex), members)


@dataclass(frozen=True)
class ClosureOperator:
    """An extensive, monotone, idempotent self-map with its image."""

    lattice: FiniteLattice
    image: frozenset[int]
    map: tuple[int, ...]

    def __call__(self, x: int) -> int:
        return self.map[x]


def closure_from_image(L: FiniteLattice, image) -> ClosureOperator:
    """The closure sending x to the least element of the image above x.

    The image must be meet-closed and contain the top, which makes the least
    upper element exist: the meet of all image elements above x.
    """
    members = frozenset(int(x) for x in image)
    if L.top not in members:
        raise MissingFilter("closure image must contain the top")
    if not L.is_meet_subsemilattice(members):
        raise NotMeetClosed("closure image must be closed under meets")
    mapping = []
    for x in range(L.n):
        fx = L.meet_all(y for y in members if L.leq[x, y])
        mapping.append(fx)
    out = ClosureOperator(L, members, tuple(mapping))
    _validate_closure(out)
    return out


def closure_from_map(L: FiniteLattice, mapping) -> ClosureOperator:
    """Wrap and validate an explicit closure map; its image is computed."""
    mapping = tuple(int(x) for x in mapping)
    if len(mapping) != L.n:
        raise LatticeError("closure map must be total")
    out = ClosureOperator(L, frozenset(mapping), mapping)
    _validate_closure(out)
    return out


def _validate_closure(c: ClosureOperator) -> None:
    L = c.lattice
    f = c.map
    for x in range(L.n):
        if not L.leq[x, f[x]]:
            raise LatticeError("closure must be extensive")
        if f[f[x]] != f[x]:
            raise LatticeError("closure must be idempotent")
    for x in range(L.n):
        for y in range(L.n):
            if L.leq[x, y] and not L.leq[f[x], f[y]]:
                raise LatticeError("closure must be monotone")
    if frozenset(f) != c.image:
        raise LatticeError("closure image does not match its fixed points")


# -- the one-atom extension -------------------------------------------------------


@dataclass(frozen=True)
class OneAtomExtension:
    """A base lattice extended by one fresh atom below the apex.

    ``embedding`` is the identity on base indices; ``new_atom`` is the fresh
    atom's index in the result; ``closure`` is the operator the extension was
    built from.
    """

    base: FiniteLattice
    result: FiniteLattice
    embedding: EmbeddingMap
    new_atom: int
    pair: ExtensionPair
    closure: ClosureOperator


def one_atom_extension(pair: ExtensionPair) -> OneAtomExtension:
    """Build the extension determined by a validated pair (apex; M).

    Elements are the pairs (x, 0) for x outside the apex filter and (m, 1)
    for m in M, ordered componentwise.  The base embeds by x -> (x, 0) when
    the apex is not below x and x -> (x, 1) otherwise; the fresh atom is
    (0, 1).  Verified on every call: the embedding preserves joins, meets,
    bounds and atoms; the fresh atom sits below exactly the filter of the
    apex; joining the fresh atom onto the image realizes the closure of M;
    and every new element is such a join.
    """
    L = pair.lattice
    apex = pair.apex
    members = sorted(pair.subsemilattice)
    closure = closure_from_image(L, pair.subsemilattice)
    n = L.n
    in_filter = L.leq[apex]
    fresh = [m for m in members if not in_filter[m]]
    reps = [(x, 1 if in_filter[x] else 0) for x in range(n)]
    reps += [(m, 1) for m in fresh]
    k = len(reps)

    leq = np.zeros((k, k), dtype=bool)
    for i, (x, s) in enumerate(reps):
        for j, (y, t) in enumerate(reps):
            leq[i, j] = bool(L.leq[x, y]) and s <= t

    labels = list(L.labels)
    used = set(labels)
    star, m = "p*", 2
    while star in used:
        star = f"p*{m}"
        m += 1
    used.add(star)
    for m in fresh:
        if m == L.bottom:
            labels.append(star)
        else:
            lab = f"{star} v {L.labels[m]}"
            while lab in used:
                lab += "'"
            used.add(lab)
            labels.append(lab)

    result = FiniteLattice(leq, labels)
    emb = verify_embedding(L, result, tuple(range(n)))
    _ensure(emb.preserved.all_flags(), "one-atom embedding lost structure")

    new_atom = n + fresh.index(L.bottom)
    _ensure(new_atom in result.atoms(), "fresh element is not an atom")

    # the fresh atom lies below exactly the filter of the apex
    _ensure(
        all(bool(result.leq[new_atom, x]) == bool(in_filter[x]) for x in range(n)),
        "fresh atom sits under the wrong filter",
    )
    # x <= p* v y in the result iff x <= f(y) in the base
    star_join = result.join_table[new_atom][:n]
    lhs = result.leq[:n, :][:, star_join]
    rhs = L.leq[:, closure.map]
    _ensure(bool(np.array_equal(lhs, rhs)), "closure law failed in the extension")
    # every element is an original or the join of the fresh atom with one
    for pos, m in enumerate(fresh):
        _ensure(
            int(result.join_table[new_atom, m]) == n + pos,
            "new elements must be joins with the fresh atom",
        )
    return OneAtomExtension(L, result, emb, int(new_atom), pair, closure)


# -- when the extension stays join-semidistributive --------------------------------


def jsd_extension_criteria(pair: ExtensionPair):
    """Decide from the base alone whether the extension stays
    join-semidistributive.

    For an atomistic join-semidistributive base the extension is
    join-semidistributive iff (i) every maximal element outside the apex
    filter belongs to M and (ii) the closure never merges joins with two
    distinct atoms: f(x v u) = f(x v v) forces u <= f(x).  Returns
    (verdict, witness); the witness names the violated criterion.
    """
    L = pair.lattice
    if not is_atomistic(L):
        raise PreconditionFailed("criteria need an atomistic base")
    if not is_join_semidistributive(L):
        raise PreconditionFailed("criteria need a join-semidistributive base")
    closure = closure_from_image(L, pair.subsemilattice)
    outside = L.complement_filter(pair.apex)
    outside_set = set(outside)
    for x in outside:
        if any(y in outside_set and L.lt(x, y) for y in outside):
            continue
        if x not in pair.subsemilattice:
            return False, ("maximal_outside_not_in_m", int(x))
    f = np.array(closure.map)
    atoms = np.array(L.atoms(), dtype=np.int64)
    for x in range(L.n):
        fu = f[L.join_table[x, atoms]]
        same = fu[:, None] == fu[None, :]
        ok = L.leq[atoms, f[x]]
        bad = same & ~np.eye(len(atoms), dtype=bool) & ~ok[:, None]
        if bad.any():
            i, j = map(int, np.argwhere(bad)[0])
            return False, ("closure_merges_atoms", int(x), int(atoms[i]), int(atoms[j]))
    return True, None


# -- solving one biatomicity problem ------------------------------------------------


def minimal_apex(L: FiniteLattice, p: int, q: int, bound: int) -> int:
    """The minimal x <= bound with p <= x v q, least element index on ties."""
    if not L.leq[p, L.join(bound, q)]:
        raise PreconditionFailed("p must lie below bound v q")
    candidates = [
        x for x in range(L.n) if L.leq[x, bound] and L.leq[p, L.join_table[x, q]]
    ]
    minimal = [
        x for x in candidates if not any(y != x and L.leq[y, x] for y in candidates)
    ]
    return min(minimal)


def _validate_problem_triple(L: FiniteLattice, p: int, q: int, a: int) -> None:
    if not (is_atomistic(L) and is_join_semidistributive(L)):
        raise NotJsdBase("base must be atomistic and join-semidistributive")
    atom_set = set(L.atoms())
    if p == q or p not in atom_set or q not in atom_set:
        raise BadTriple("p and q must be distinct atoms")
    if a == L.bottom or a in atom_set:
        raise BadTriple("the apex must be neither the bottom nor an atom")
    if not L.leq[p, L.join(a, q)]:
        raise BadTriple("p must lie below apex v q")
    for x in range(L.n):
        if L.lt(x, a) and L.leq[p, L.join_table[x, q]]:
            raise MinimalityFailed(
                f"p <= {L.labels[x]} v q with {L.labels[x]} < apex"
            )


def solve_one_problem(L: FiniteLattice, p: int, q: int, a: int) -> OneAtomExtension:
    """Adjoin one atom p* below a with p <= p* v q, preserving structure.

    Requires an atomistic join-semidistributive base, distinct atoms p, q
    with p below a v q, and a minimal for that property.  The closure sends
    x to x when q is not below p v x and to p v x otherwise; its image is the
    subsemilattice of the extension pair.  Postconditions asserted on every
    invocation: the extension is join-semidistributive; p < p* v q and
    p* < a; p and p* depend on every atom of the minimal decomposition of a;
    the dependency order between original atoms is unchanged; p* depends on
    itself exactly when some atom of the decomposition reaches p; and
    lower-boundedness carries over.
    """
    _validate_problem_triple(L, p, q, a)

    mapping = [
        x if not L.leq[q, L.join_table[p, x]] else int(L.join_table[p, x])
        for x in range(L.n)
    ]
    closure = closure_from_map(L, mapping)
    _ensure(
        closure.map[q] == L.join(p, q), "closure must send q to p v q"
    )
    _ensure(
        all(closure.map[x] == x for x in L.filter(a)),
        "closure must fix the apex filter",
    )
    pair = make_extension_pair(L, a, closure.image)
    ext = one_atom_extension(pair)
    R = ext.result
    star = ext.new_atom

    _ensure(is_join_semidistributive(R), "extension lost join-semidistributivity")
    _ensure(is_atomistic(R), "extension lost atomisticity")
    _ensure(R.lt(p, R.join(star, q)), "p must lie strictly below p* v q")
    _ensure(R.lt(star, a), "the fresh atom must lie strictly below the apex")

    dep_base = join_dependency(L, on="atoms")
    dep_ext = join_dependency(R, on="atoms")
    base_atoms = list(dep_base.elements)
    ext_atoms = list(dep_ext.elements)
    _ensure(ext_atoms == base_atoms + [star], "extension atoms changed unexpectedly")
    pi = base_atoms.index(p)
    si = ext_atoms.index(star)
    for u in minimal_decomposition(L, a):
        ui = base_atoms.index(u)
        _ensure(bool(dep_base.d[pi, ui]), "p must depend on the decomposition of a")
        _ensure(bool(dep_ext.d[si, ui]), "p* must depend on the decomposition of a")

    m = len(base_atoms)
    _ensure(
        bool(np.array_equal(dep_ext.strict_tc[:m, :m], dep_base.strict_tc)),
        "dependency order between original atoms changed",
    )
    reaches_p = any(
        bool(dep_base.strict_tc[base_atoms.index(u), pi])
        for u in minimal_decomposition(L, a)
    )
    _ensure(
        bool(dep_ext.strict_tc[si, si]) == reaches_p,
        "self-dependency of the fresh atom mismatches the base",
    )
    if not dep_base.strict_tc.diagonal().any():
        _ensure(
            not dep_ext.strict_tc.diagonal().any(),
            "lower-boundedness was lost",
        )
    return ext


# -- the full biatomization loop -----------------------------------------------------


@dataclass(frozen=True)
class BiatomizationStep:
    """One atom-adjoining step in the biatomization trace.

    ``decomposition`` names the split b = c v q that produced the step, or
    None when the step applied the one-problem solver directly.
    """

    problem: tuple[str, str, str]  # labels of (p, a, b) being reduced
    decomposition: tuple[str, str] | None  # labels of (q, c) with b = c v q
    apex: str
    new_atom: str
    checks: dict[str, bool]

    def as_dict(self) -> dict:
        return {
            "problem": {
                "p": self.problem[0],
                "a": self.problem[1],
                "b": self.problem[2],
            },
            "decomposition": None
            if self.decomposition is None
            else {"q": self.decomposition[0], "c": self.decomposition[1]},
            "apex": self.apex,
            "new_atom": self.new_atom,
            "checks": self.checks,
        }


def _least_atom_below(L: FiniteLattice, x: int) -> int:
    for p in L.atoms():
        if L.leq[p, x]:
            return p
    raise LatticeError("no atom below a nonzero element of an atomic lattice")


def _revalidate(L: FiniteLattice, p: int, q: int, a: int) -> None:
    try:
        _validate_problem_triple(L, p, q, a)
    except LatticeError as exc:
        raise ReValidationFailed(f"derived step failed re-validation: {exc}") from exc


def _atom_reaching(K, p, q, bound, steps, context):
    """An atom y <= bound with p <= y v q, extending K when necessary.

    Degenerate cases need no extension: when the minimal apex for (p, q)
    under the bound is the bottom (p is below q already) any atom below the
    bound works, and when it is an atom it can serve itself.
    """
    apex = minimal_apex(K, p, q, bound)
    if apex == K.bottom:
        return K, _least_atom_below(K, bound)
    if apex in K.atoms():
        return K, apex
    _revalidate(K, p, q, apex)
    ext = solve_one_problem(K, p, q, apex)
    steps.append(
        BiatomizationStep(
            problem=context["problem"],
            decomposition=context["decomposition"],
            apex=K.labels[apex],
            new_atom=ext.result.labels[ext.new_atom],
            checks={
                "join_semidistributive": True,
                "atomistic": True,
                "below_apex": True,
                "dependency_preserved": True,
            },
        )
    )
    return ext.result, ext.new_atom


def _measure(K: FiniteLattice, a: int, b: int) -> int:
    return len(minimal_decomposition(K, a)) + len(minimal_decomposition(K, b))


def _solve_instance(K, p, a, b, steps, limit):
    """Extend K until some atoms x <= a, y <= b satisfy p <= x v y.

    Returns (lattice, x, y).  ``limit`` carries the decomposition measure of
    the enclosing call; it must strictly decrease along real recursion, which
    guards termination.
    """
    _ensure(bool(K.leq[p, K.join(a, b)]), "instance lost its premise")
    atom_set = set(K.atoms())
    if K.leq[p, a]:
        return K, p, _least_atom_below(K, b)
    if K.leq[p, b]:
        return K, _least_atom_below(K, a), p
    if a in atom_set and b in atom_set:
        return K, a, b
    if b in atom_set:
        K2, y, x = _solve_instance(K, p, b, a, steps, limit)
        return K2, x, y

    mine = _measure(K, a, b)
    _ensure(mine <= limit, "decomposition measure failed to decrease")

    dec_b = minimal_decomposition(K, b)
    q = min(dec_b)
    c = K.join_all(sorted(set(dec_b) - {q}))
    context = {
        "problem": (K.labels[p], K.labels[a], K.labels[b]),
        "decomposition": (K.labels[q], K.labels[c]),
    }
    bound = K.join(a, c)
    K1, p1 = _atom_reaching(K, p, q, bound, steps, context)
    _ensure(bool(K1.leq[p, K1.join(p1, q)]), "first step failed to reach p")
    _ensure(bool(K1.leq[p1, K1.join(a, c)]), "fresh atom escaped its bound")

    K2, x, v = _solve_instance(K1, p1, a, c, steps, mine - 1)
    _ensure(bool(K2.leq[p, K2.join(x, K2.join(v, q))]), "recursion lost the cover")

    vq = K2.join(v, q)
    context3 = {
        "problem": (K2.labels[p], K2.labels[x], K2.labels[vq]),
        "decomposition": None,
    }
    K3, y = _atom_reaching(K2, p, x, vq, steps, context3)
    _ensure(bool(K3.leq[p, K3.join(x, y)]), "final step failed to solve")
    _ensure(bool(K3.leq[x, a]), "solution atom escaped a")
    _ensure(bool(K3.leq[y, b]), "solution atom escaped b")
    return K3, x, y


def partial_biatomization(
    L: FiniteLattice,
) -> tuple[FiniteLattice, EmbeddingMap, list[BiatomizationStep]]:
    """Solve every biatomicity problem of L inside one extension.

    The base must be atomistic and join-semidistributive.  Problems are the
    instances p <= a v b of the ORIGINAL lattice with p below neither side;
    they are processed in ascending (p, a, b) index order, each re-checked in
    the current extension and skipped once solvable.  Problems created by the
    added atoms are not queued.  Verified postconditions: the result is
    atomistic and join-semidistributive; the embedding (identity on indices)
    preserves joins, meets, bounds and atoms; every original problem is
    solved; the reflexive-transitive dependency order between original atoms
    is unchanged; and lower-boundedness carries over when the base has it.
    """
    if not is_atomistic(L):
        raise PreconditionFailed("partial_biatomization needs an atomistic base")
    if not is_join_semidistributive(L):
        raise PreconditionFailed(
            "partial_biatomization needs a join-semidistributive base"
        )
    base_lb = is_lower_bounded(L)
    problems = biatomicity_problems(L)
    current = L
    steps: list[BiatomizationStep] = []
    for problem in problems:
        if solve_problem_instance(current, problem.p, problem.a, problem.b):
            continue
        current, x, y = _solve_instance(
            current,
            problem.p,
            problem.a,
            problem.b,
            steps,
            _measure(current, problem.a, problem.b),
        )
        _ensure(
            bool(current.leq[problem.p, current.join(x, y)]),
            "problem remained unsolved after extension",
        )

    emb = verify_embedding(L, current, tuple(range(L.n)))
    _ensure(emb.preserved.all_flags(), "biatomization embedding lost structure")
    _ensure(is_atomistic(current), "biatomization lost atomisticity")
    _ensure(
        is_join_semidistributive(current),
        "biatomization lost join-semidistributivity",
    )
    for problem in problems:
        _ensure(
            solve_problem_instance(current, problem.p, problem.a, problem.b)
            is not None,
            "an original problem stayed open",
        )
    dep_base = join_dependency(L, on="atoms")
    dep_ext = join_dependency(current, on="atoms")
    base_atoms = list(dep_base.elements)
    positions = [dep_ext.elements.index(x) for x in base_atoms]
    _ensure(
        bool(
            np.array_equal(
                dep_ext.refl_tc[np.ix_(positions, positions)], dep_base.refl_tc
            )
        ),
        "dependency order between original atoms changed",
    )
    if base_lb:
        _ensure(is_lower_bounded(current), "lower-boundedness was lost")
    return current, emb, steps
