import math
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from coarsefill import spaces as sp

T3 = sp.RegularTree(3)
Z1, Z2 = sp.Lattice(1), sp.Lattice(2)


# --- metrics and balls -------------------------------------------------------

def test_tree_distance_through_root():
    assert T3.distance((0, 1), (1, 0, 0)) == 5
    assert T3.distance((0, 1), (0, 0, 1)) == 3
    assert T3.distance((), ()) == 0


def test_tree_rejects_bad_vertices():
    with pytest.raises(sp.SpaceError):
        T3.distance((3,), ())
    with pytest.raises(sp.SpaceError):
        T3.distance((0, 2), ())


def test_half_plane_distance_closed_form():
    h = sp.HalfPlaneNet()
    d = h.distance((0.0, 1.0), (3.0, 1.0))
    assert d == pytest.approx(math.acosh(5.5), rel=1e-14)
    assert d == pytest.approx(2.3895264, abs=1e-7)


def test_half_space_distance_general_points():
    p, q = (0.3, 2.0), (-1.1, 0.5)
    expected = math.acosh(1 + ((p[0] - q[0]) ** 2 + (p[1] - q[1]) ** 2) / (2 * p[1] * q[1]))
    assert sp.half_space_distance(p, q) == pytest.approx(expected, rel=1e-12)


def test_product_distance_is_l2():
    prod = sp.Product([T3, T3])
    x = ((), ())
    y = ((0, 0, 0), (1, 0, 0, 0))
    assert prod.distance(x, y) == pytest.approx(5.0)


def test_ball_sizes():
    assert len(T3.ball((), 2)) == 10
    assert len(Z2.ball((0, 0), 1)) == 5
    assert [T3.ball_size(r) for r in range(4)] == [1, 4, 10, 22]


def test_product_ball_matches_brute_force():
    prod = sp.Product([T3, T3])
    ball = prod.ball(((), ()), 2)
    factor = T3.ball((), 2)
    brute = {(a, b) for a in factor for b in factor
             if math.hypot(T3.distance((), a), T3.distance((), b)) <= 2}
    assert ball == brute


def test_ball_budget():
    with pytest.raises(sp.BudgetError):
        T3.ball((), 30, budget=1000)


@given(st.lists(st.tuples(st.integers(-9, 9), st.integers(-9, 9)), min_size=3, max_size=3))
def test_lattice_metric_axioms(pts):
    for s in (Z2, sp.Lattice(2, "l2")):
        a, b, c = pts
        assert s.distance(a, b) == s.distance(b, a)
        assert s.distance(a, c) <= s.distance(a, b) + s.distance(b, c) + 1e-12


def _tree_vertex(rng, depth):
    d = rng.randint(0, depth)
    return () if d == 0 else (rng.randint(0, 2),) + tuple(rng.randint(0, 1) for _ in range(d - 1))


def test_tree_and_half_plane_metric_axioms():
    rng = random.Random(3)
    h = sp.HalfPlaneNet()
    for _ in range(200):
        a, b, c = (_tree_vertex(rng, 6) for _ in range(3))
        assert T3.distance(a, c) <= T3.distance(a, b) + T3.distance(b, c)
        p, q, r = ((rng.uniform(-5, 5), rng.uniform(0.1, 4)) for _ in range(3))
        assert h.distance(p, q) == pytest.approx(h.distance(q, p), abs=1e-9)
        assert h.distance(p, r) <= h.distance(p, q) + h.distance(q, r) + 1e-9


def test_geodesics_have_unit_steps():
    path = T3.geodesic((0, 1, 1), (2, 0))
    assert len(path) == T3.distance((0, 1, 1), (2, 0)) + 1
    assert all(T3.distance(a, b) == 1 for a, b in zip(path, path[1:]))
    path = Z2.geodesic((0, 0), (3, -2))
    assert len(path) == 6


def test_parse_space():
    assert sp.parse_space("t3").name == T3.name
    assert isinstance(sp.parse_space("z2-l2"), sp.Lattice)
    assert isinstance(sp.parse_space("t3xt3"), sp.Product)
    with pytest.raises(sp.SpaceError):
        sp.parse_space("nope")


# --- epsilon-volume ----------------------------------------------------------

def test_interval_cover():
    assert sp.epsilon_volume(Z1, Z1.ball((0,), 10), 1.0) == sp.VolumeBounds(7, 7, "exact-interval")


def test_single_point_volume():
    for s, p in [(T3, ()), (Z2, (0, 0)), (Z1, (4,))]:
        vb = sp.epsilon_volume(s, [p], 1.0)
        assert (vb.lower, vb.upper) == (1, 1)


def test_tree_ball_bounds():
    vb = sp.epsilon_volume(T3, T3.ball((), 3), 1.0)
    assert vb.lower <= vb.upper <= 2 * vb.lower
    assert sp.epsilon_volume(T3, T3.ball((), 3), 1.0, method="ilp").upper == 7


def test_ilp_agrees_with_bounds():
    rng = random.Random(5)
    for _ in range(10):
        A = {(rng.randint(-4, 4), rng.randint(-4, 4)) for _ in range(8)}
        greedy = sp.epsilon_volume(Z2, A, 1.0, method="greedy")
        exact = sp.epsilon_volume(Z2, A, 1.0, method="ilp")
        assert greedy.lower <= exact.lower == exact.upper <= greedy.upper


def test_epsilon_below_threshold():
    with pytest.raises(sp.SpaceError):
        sp.epsilon_volume(sp.HalfPlaneNet(), [(0.0, 1.0)], 0.1)


def test_z_growth_formula():
    table = sp.growth_table(Z1, 1.0, range(0, 40))
    assert table.uppers() == table.lowers() == [-(-(2 * r + 1) // 3) for r in range(40)]


def test_tree_growth_closed_form():
    table = sp.growth_table(T3, 0.5, range(0, 13))
    assert table.uppers() == [3 * 2 ** r - 2 for r in range(13)]
    rate = sp.fit_exponential_rate(range(6, 13), table.uppers()[6:])
    assert abs(rate - math.log(2)) < 0.05 * math.log(2)


@pytest.mark.parametrize("d", [3, 4, 5])
def test_regular_tree_ball_formula(d):
    t = sp.RegularTree(d)
    for r in range(6):
        assert len(t.ball(t.origin(), r)) == 1 + d * ((d - 1) ** r - 1) // (d - 2)


def test_growth_tables_are_monotone():
    table = sp.growth_table(T3, 1.0, range(0, 8))
    assert table.uppers() == sorted(table.uppers())
    assert all(row.lower <= row.upper for row in table.rows)


def test_product_volume_dominates_projection():
    prod = sp.Product([Z1, Z1])
    rng = random.Random(2)
    for _ in range(10):
        A = {((rng.randint(-8, 8),), (rng.randint(-8, 8),)) for _ in range(12)}
        whole = sp.epsilon_volume(prod, A, 1.0)
        for i in range(2):
            proj = sp.epsilon_volume(Z1, {a[i] for a in A}, 1.0)
            assert whole.upper >= proj.lower


# --- embeddings and control functions ---------------------------------------

def test_horosphere_distances():
    f1, f2 = sp.horosphere_embed(1), sp.horosphere_embed(2)
    assert f1.image_distance((5,), (5,)) == 0
    assert abs(f1.image_distance((0,), (1000,)) - 2 * math.log(1000)) < 1e-5
    assert f2.image_distance((0, 0), (3, 4)) == pytest.approx(math.acosh(13.5), rel=1e-14)


def test_horocycle_gap_bound():
    previous = math.inf
    for r in range(2, 3000):
        gap = sp.horocycle_distance(r) - 2 * math.log(r)
        assert abs(gap) <= math.log(1 + 4 / r ** 2) + 1e-9
        assert gap <= previous
        previous = gap


def test_identity_profile():
    prof = sp.control_function_profile(sp.identity_map(Z1), sp.radial_pairs(Z1, range(0, 50)))
    assert prof.rho_minus == prof.rho_plus == tuple(float(r) for r in range(50))
    assert "coarse" in prof.flags


def test_horosphere_profile():
    f = sp.horosphere_embed(1)
    radii = [1, 2, 5, 10, 100, 1000, 10_000]
    prof = sp.control_function_profile(f, sp.radial_pairs(f.source, radii))
    for r, up in zip(prof.radii, prof.rho_plus):
        assert abs(up - sp.horocycle_distance(r)) < 1e-6
    assert set(prof.flags) == {"coarse", "sublinear-compression"}
    assert all(lo <= up for lo, up in zip(prof.rho_minus, prof.rho_plus))


def test_constant_map_is_not_coarse():
    f = sp.constant_map(Z1, Z1, (0,))
    prof = sp.control_function_profile(f, sp.radial_pairs(Z1, range(0, 20)))
    assert set(prof.rho_plus) == {0.0}
    assert "not-coarse" in prof.flags


def test_identity_volume_ratio():
    f = sp.identity_map(Z1)
    prof = sp.control_function_profile(f, sp.radial_pairs(Z1, range(0, 30)))
    rep = sp.coarse_volume_report(f, [(i,) for i in range(40)], 2.0, prof)
    assert rep.ratio_low == rep.ratio_high == 1.0
    assert rep.within


def test_horosphere_volume_ratio_long_segment():
    f = sp.horosphere_embed(1)
    prof = sp.control_function_profile(f, sp.radial_pairs(f.source, range(1, 65)))
    rep = sp.coarse_volume_report(f, [(i,) for i in range(1001)], 2.0, prof)
    assert rep.within
    assert rep.alpha == pytest.approx(1 / 3) and rep.beta == 1.0
    assert (rep.vol_x.upper, rep.vol_y.upper) == (201, 126)


def test_neighborhood_bound():
    rng = random.Random(11)
    for _ in range(10):
        A = {(rng.randint(-5, 5), rng.randint(-5, 5)) for _ in range(rng.randint(1, 5))}
        assert sp.neighborhood_volume_check(Z2, A, 1, 1.0, method="ilp").holds
