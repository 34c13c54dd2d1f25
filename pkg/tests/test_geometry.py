from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from conftest import oracle_isomorphic
from latkit.analysis import (
    biatomicity_problems,
    is_atomistic,
    is_biatomic,
    is_join_semidistributive,
    is_lower_bounded,
)
from latkit.core import LatticeError
from latkit.generators import boolean, co_chain
from latkit.geometry import (
    PointConfiguration,
    RationalPoint,
    TooManyPoints,
    co_points,
    convex_hull,
    five_point_configuration,
    on_segment,
    orientation,
    point_in_hull,
)


def P(x, y) -> RationalPoint:
    return RationalPoint(Fraction(x), Fraction(y))


def config_of(coords) -> PointConfiguration:
    return PointConfiguration([str(i) for i in range(len(coords))],
                              [P(x, y) for x, y in coords])


def triangle_with_center() -> PointConfiguration:
    return PointConfiguration(
        ["a", "b", "c", "m"],
        [P(0, 3), P(-3, -3), P(3, -3), P(0, -1)],
    )


# -- rational parsing and primitives -----------------------------------------


def test_rational_point_parsing():
    p = RationalPoint.of("1/2", -3)
    assert p.x == Fraction(1, 2) and p.y == Fraction(-3)
    assert RationalPoint.of(Fraction(2, 4), "0") == P(Fraction(1, 2), 0)
    with pytest.raises(LatticeError):
        RationalPoint.of("two", 0)
    with pytest.raises(LatticeError):
        RationalPoint.of(1.5, 0)
    with pytest.raises(LatticeError):
        RationalPoint.of(True, 0)


def test_orientation_signs():
    assert orientation(P(0, 0), P(1, 0), P(0, 1)) == 1
    assert orientation(P(0, 0), P(0, 1), P(1, 0)) == -1
    assert orientation(P(0, 0), P(1, 1), P(2, 2)) == 0


def test_on_segment():
    assert on_segment(P(1, 1), P(0, 0), P(2, 2))
    assert not on_segment(P(3, 3), P(0, 0), P(2, 2))  # collinear but outside
    assert not on_segment(P(1, 0), P(0, 0), P(2, 2))
    assert on_segment(P(0, 0), P(0, 0), P(2, 2))  # endpoints included


def test_convex_hull_degenerate():
    assert convex_hull([P(1, 1)]) == [P(1, 1)]
    assert convex_hull([P(0, 0), P(2, 2), P(1, 1)]) == [P(0, 0), P(2, 2)]
    square = [P(0, 0), P(1, 0), P(1, 1), P(0, 1), P(Fraction(1, 2), Fraction(1, 2))]
    hull = convex_hull(square)
    assert len(hull) == 4
    assert P(Fraction(1, 2), Fraction(1, 2)) not in hull


def test_point_in_hull():
    tri = [P(0, 0), P(4, 0), P(0, 4)]
    assert point_in_hull(P(1, 1), tri)
    assert point_in_hull(P(2, 2), tri)  # on the hypotenuse
    assert not point_in_hull(P(3, 3), tri)
    assert not point_in_hull(P(0, 0), [])


# -- configurations -----------------------------------------------------------


def test_configuration_validation():
    with pytest.raises(LatticeError):
        PointConfiguration(["a"], [P(0, 0), P(1, 1)])
    with pytest.raises(LatticeError):
        PointConfiguration(["a", "a"], [P(0, 0), P(1, 1)])
    with pytest.raises(LatticeError):
        PointConfiguration(["a", "b"], [P(0, 0), P(0, 0)])


def test_configuration_json_roundtrip():
    cfg = five_point_configuration()
    back = PointConfiguration.from_json(cfg.to_json())
    assert back.labels == cfg.labels
    assert back.points == cfg.points
    halves = PointConfiguration(["h"], [P(Fraction(1, 2), Fraction(-2, 3))])
    again = PointConfiguration.from_json(halves.to_json())
    assert again.points == halves.points
    with pytest.raises(LatticeError):
        PointConfiguration.from_json('{"rows": []}')


def test_hull_trace_basics():
    cfg = triangle_with_center()
    m = cfg.labels.index("m")
    assert cfg.hull_trace([]) == frozenset()
    assert cfg.hull_trace([m]) == frozenset([m])
    assert cfg.hull_trace([0, 1, 2]) == frozenset([0, 1, 2, m])


# -- closure laws, property-based --------------------------------------------


point_lists = st.lists(
    st.tuples(st.integers(-4, 4), st.integers(-4, 4)),
    min_size=1, max_size=6, unique=True,
)


@settings(max_examples=60, deadline=None)
@given(point_lists, st.data())
def test_hull_trace_is_a_closure_operator(coords, data):
    cfg = config_of(coords)
    n = len(cfg)
    subset = data.draw(st.sets(st.integers(0, n - 1)))
    bigger = data.draw(st.sets(st.integers(0, n - 1)))
    tr = cfg.hull_trace(subset)
    assert subset <= tr  # extensive
    assert cfg.hull_trace(tr) == tr  # idempotent
    if subset <= bigger:
        assert tr <= cfg.hull_trace(bigger)  # monotone


@settings(max_examples=60, deadline=None)
@given(point_lists, st.data())
def test_hull_trace_anti_exchange(coords, data):
    cfg = config_of(coords)
    n = len(cfg)
    subset = data.draw(st.sets(st.integers(0, n - 1)))
    closed = cfg.hull_trace(subset)
    outside = sorted(set(range(n)) - closed)
    for p in outside:
        with_p = cfg.hull_trace(closed | {p})
        for q in outside:
            if q == p or q not in with_p:
                continue
            # q entered through p, so p must not enter through q
            assert p not in cfg.hull_trace(closed | {q})


# -- the induced lattices ------------------------------------------------------


def test_triangle_gives_powerset():
    cfg = config_of([(0, 0), (4, 0), (0, 4)])
    L = co_points(cfg)
    assert oracle_isomorphic(L, boolean(3))


def test_collinear_points_give_interval_lattice():
    cfg = config_of([(0, 0), (1, 0), (2, 0)])
    L = co_points(cfg)
    assert L.n == 7
    assert oracle_isomorphic(L, co_chain(3))


def test_single_point():
    L = co_points(config_of([(0, 0)]))
    assert L.n == 2


def test_triangle_with_center_lattice():
    L = co_points(triangle_with_center())
    assert L.n == 15
    assert is_atomistic(L)
    assert is_join_semidistributive(L)
    assert is_lower_bounded(L)
    assert not is_biatomic(L)
    open_problems = [pr for pr in biatomicity_problems(L) if not pr.solved]
    assert len(open_problems) == 6


def test_five_point_configuration_lattice():
    cfg = five_point_configuration()
    assert cfg.labels == ("a", "b", "c", "u", "v")
    L = co_points(cfg)
    assert L.n == 27
    assert is_atomistic(L)
    assert is_join_semidistributive(L)
    assert not is_biatomic(L)
    assert not is_lower_bounded(L)
    open_problems = [pr for pr in biatomicity_problems(L) if not pr.solved]
    assert len(open_problems) == 48
    # the corner triple swallows both inner points
    assert L.index("{a,b,c,u,v}") == L.top
    corner_join = L.join_all([L.index("{a}"), L.index("{b}"), L.index("{c}")])
    assert corner_join == L.top


def test_lattice_order_is_inclusion():
    cfg = triangle_with_center()
    L = co_points(cfg)
    for x in range(L.n):
        for y in range(L.n):
            sx = set(L.label(x).strip("{}").split(",")) - {""}
            sy = set(L.label(y).strip("{}").split(",")) - {""}
            assert L.le(x, y) == (sx <= sy)


def test_too_many_points():
    cfg = config_of([(i, i * i) for i in range(21)])
    with pytest.raises(TooManyPoints):
        co_points(cfg)
