"""
Lattices of convex hull traces
==============================

Given finitely many labelled points in the rational plane, the sets of
the form hull(S) intersected with the configuration, ordered by
inclusion, always form an atomistic join-semidistributive lattice.
The geometry decides everything else.
"""

from fractions import Fraction

from latkit.analysis import is_biatomic, is_join_semidistributive, is_lower_bounded
from latkit.generators import boolean
from latkit.geometry import PointConfiguration, RationalPoint, co_points, convex_hull

# three points in general position: every subset is its own trace,
# so the lattice is the powerset of {a, b, c}
tri = PointConfiguration(
    ["a", "b", "c"],
    [RationalPoint.of(0, 2), RationalPoint.of(-1, 0), RationalPoint.of(1, 0)],
)
L = co_points(tri)
print(f"triangle: {L.n} elements (powerset has {boolean(3).n})")

# three collinear points: the middle one is swallowed by the endpoints
row = PointConfiguration(
    ["l", "m", "r"],
    [RationalPoint.of(0, 0), RationalPoint.of(1, 0), RationalPoint.of(2, 0)],
)
L = co_points(row)
print(f"collinear: {L.n} elements, traces:", sorted(L.label(x) for x in range(L.n)))

# coordinates may be fractions; hulls are computed exactly
skew = PointConfiguration(
    ["p", "q", "r", "s"],
    [RationalPoint(Fraction(1, 3), Fraction(1, 7)), RationalPoint.of(2, 0),
     RationalPoint.of("5/2", 3), RationalPoint.of(1, 1)],
)
hull = convex_hull(list(skew.points))
print("hull corners:", [(str(p.x), str(p.y)) for p in hull])

L = co_points(skew)
print(f"four points: {L.n} elements")
print("  jsd:          ", is_join_semidistributive(L))
print("  biatomic:     ", is_biatomic(L))
print("  lower-bounded:", is_lower_bounded(L))
