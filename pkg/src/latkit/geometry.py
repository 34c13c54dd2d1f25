"""Planar convex geometries over exact rational coordinates.

A finite point configuration in the plane induces a closure operator: the
trace of a subset is every configuration point inside its convex hull.
The hull-closed subsets ordered by inclusion form a lattice in which the
meet is intersection and the join is the trace of the union.  All predicates
are signed-area orientation tests on ``fractions.Fraction``; there is no
floating point anywhere in this module.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .core import FiniteLattice, LatticeError


class TooManyPoints(LatticeError):
    """co_points is bounded at 20 points (the element count is exponential)."""


def _parse_rational(value) -> Fraction:
    if isinstance(value, bool):
        raise LatticeError("coordinates must be integers or 'p/q' strings")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError):
            raise LatticeError(f"bad rational literal {value!r}") from None
    raise LatticeError(f"bad rational literal {value!r}")


def _fmt_rational(q: Fraction) -> str | int:
    if q.denominator == 1:
        return int(q)
    return f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True, order=True)
class RationalPoint:
    """A point of the rational plane."""

    x: Fraction
    y: Fraction

    @classmethod
    def of(cls, x, y) -> "RationalPoint":
        return cls(_parse_rational(x) if not isinstance(x, Fraction) else x,
                   _parse_rational(y) if not isinstance(y, Fraction) else y)


def orientation(o: RationalPoint, a: RationalPoint, b: RationalPoint) -> int:
    """Sign of the signed area of the triangle (o, a, b)."""
    cross = (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)
    return (cross > 0) - (cross < 0)


def on_segment(p: RationalPoint, a: RationalPoint, b: RationalPoint) -> bool:
    """True iff p lies on the closed segment from a to b."""
    if orientation(a, b, p) != 0:
        return False
    return (
        min(a.x, b.x) <= p.x <= max(a.x, b.x)
        and min(a.y, b.y) <= p.y <= max(a.y, b.y)
    )


def convex_hull(points: Sequence[RationalPoint]) -> list[RationalPoint]:
    """Hull vertices in counterclockwise order (monotone chain).

    Degenerate inputs collapse: one point gives itself, collinear points
    give the two extremes of their segment.
    """
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts

    def build(seq):
        out = []
        for p in seq:
            while len(out) >= 2 and orientation(out[-2], out[-1], p) <= 0:
                out.pop()
            out.append(p)
        return out

    lower = build(pts)
    upper = build(reversed(pts))
    hull = lower[:-1] + upper[:-1]
    if len(hull) < 2:  # all points collinear: keep the two extremes
        return [pts[0], pts[-1]]
    return hull


def point_in_hull(p: RationalPoint, points: Sequence[RationalPoint]) -> bool:
    """Exact test for membership in the closed convex hull of the points."""
    if not points:
        return False
    hull = convex_hull(points)
    if len(hull) == 1:
        return p == hull[0]
    if len(hull) == 2:
        return on_segment(p, hull[0], hull[1])
    k = len(hull)
    return all(orientation(hull[i], hull[(i + 1) % k], p) >= 0 for i in range(k))


class PointConfiguration:
    """Finitely many labelled, pairwise distinct points of the plane."""

    __slots__ = ("labels", "points")

    def __init__(self, labels: Sequence[str], points: Sequence[RationalPoint]):
        labels = tuple(str(x) for x in labels)
        points = tuple(points)
        if len(labels) != len(points):
            raise LatticeError("labels and points must pair up")
        if len(set(labels)) != len(labels):
            raise LatticeError("point labels must be pairwise distinct")
        if len(set(points)) != len(points):
            raise LatticeError("points must be pairwise distinct")
        self.labels = labels
        self.points = points

    def __len__(self) -> int:
        return len(self.points)

    @classmethod
    def from_json(cls, text: str) -> "PointConfiguration":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise LatticeError(f"invalid JSON: {exc}") from None
        if not isinstance(data, dict) or "points" not in data:
            raise LatticeError("point configuration JSON needs a 'points' list")
        labels, points = [], []
        for row in data["points"]:
            labels.append(str(row["label"]))
            points.append(
                RationalPoint(_parse_rational(row["x"]), _parse_rational(row["y"]))
            )
        return cls(labels, points)

    def to_json(self) -> str:
        rows = [
            {"label": lab, "x": _fmt_rational(p.x), "y": _fmt_rational(p.y)}
            for lab, p in zip(self.labels, self.points)
        ]
        return json.dumps({"points": rows}, sort_keys=True)

    def hull_trace(self, subset: Iterable[int]) -> frozenset[int]:
        """Indices of all configuration points inside the hull of the subset."""
        chosen = [self.points[i] for i in subset]
        if not chosen:
            return frozenset()
        return frozenset(
            i for i, p in enumerate(self.points) if point_in_hull(p, chosen)
        )


def five_point_configuration() -> PointConfiguration:
    """The built-in five-point plane configuration (CLI name ``paper5``).

    An apex over a horizontal base with two interior-height points; its
    lattice of hull-closed sets is join-semidistributive and atomistic but
    not biatomic, and separates biatomicity from the quasi-identity theta.
    """
    coords = {
        "a": (0, 3),
        "b": (-2, 0),
        "c": (2, 0),
        "u": (-1, 1),
        "v": (1, 1),
    }
    labels = sorted(coords)
    points = [RationalPoint(Fraction(coords[k][0]), Fraction(coords[k][1])) for k in labels]
    return PointConfiguration(labels, points)


def co_points(config: PointConfiguration) -> FiniteLattice:
    """The lattice of hull-closed subsets of a planar point configuration.

    Elements are exactly the subsets equal to their hull trace, ordered by
    inclusion; the bottom is the empty set and the top the full set.  Joins
    are hull traces of unions and meets are intersections, both recovered
    automatically from the inclusion order.
    """
    n = len(config)
    if n > 20:
        raise TooManyPoints("co_points is bounded at 20 points")
    closed = []
    for mask in range(1 << n):
        subset = frozenset(i for i in range(n) if mask >> i & 1)
        if config.hull_trace(subset) == subset:
            closed.append(subset)
    closed.sort(key=lambda s: (len(s), sorted(s)))
    k = len(closed)
    leq = np.zeros((k, k), dtype=bool)
    for s, low in enumerate(closed):
        for t, high in enumerate(closed):
            leq[s, t] = low <= high
    labels = ["{" + ",".join(config.labels[i] for i in sorted(s)) + "}" for s in closed]
    return FiniteLattice(leq, labels)
