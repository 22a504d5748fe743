import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coarsefill import filling as fl
from coarsefill import spaces as sp
from coarsefill.filling import CubicalChain

T3, Z2 = sp.RegularTree(3), sp.Lattice(2)


def square(i=0, j=0, c=1):
    return CubicalChain(2, 2, [(((i, j), (0, 1)), c)])


# --- cubical boundary ---------------------------------------------------------

def test_unit_square_boundary():
    b = fl.cubical_boundary(square())
    assert b.terms == {
        ((0, 0), (0,)): 1, ((1, 0), (1,)): 1, ((0, 1), (0,)): -1, ((0, 0), (1,)): -1,
    }


def test_adjacent_squares_share_an_edge():
    assert len(fl.cubical_boundary(square(0, 0) + square(1, 0))) == 6


def test_rectangle_boundary_is_a_cycle():
    assert fl.cubical_boundary(fl.rectangle_boundary(3, 2)).is_zero()


def test_cell_validation():
    with pytest.raises(fl.FillingError):
        CubicalChain(1, 2, [(((0, 0), (1, 0)), 1)])
    with pytest.raises(fl.FillingError):
        CubicalChain(2, 2, [(((0, 0), (0,)), 1)])
    with pytest.raises(fl.FillingError, match="degree too low"):
        fl.cubical_boundary(CubicalChain(0, 2, [(((0, 0), ()), 1)]))


@given(st.lists(st.tuples(st.integers(0, 4), st.integers(0, 4), st.integers(0, 4),
                          st.sampled_from([(0, 1), (0, 2), (1, 2), (0, 1, 2)]), st.integers(-2, 2)),
                max_size=12))
@settings(max_examples=50)
def test_double_boundary_vanishes_in_three_dimensions(cells):
    by_degree = {}
    for x, y, z, axes, c in cells:
        by_degree.setdefault(len(axes), []).append((((x, y, z), axes), c))
    for k, terms in by_degree.items():
        chain = CubicalChain(k, 3, terms)
        assert fl.cubical_boundary(fl.cubical_boundary(chain)).is_zero()


# --- 0-cycles -----------------------------------------------------------------

def test_tree_pair():
    x, y = (0, 1, 1), (0, 0)
    assert T3.distance(x, y) == 3
    res = fl.fill_zero_cycle(T3, {y: 1, x: -1})
    assert res.mass == 3 and res.optimality == "exact"
    assert fl.graph_chain_boundary(res.filler) == {y: 1, x: -1}


def test_tree_pair_at_distance_four():
    x, y = (0, 0), (1, 0)
    assert fl.fill_zero_cycle(T3, {y: 1, x: -1}).mass == 4


def test_split_demand_on_disjoint_geodesics():
    x, y1, y2 = (), (0, 1), (1, 0, 0)
    res = fl.fill_zero_cycle(T3, {x: 2, y1: -1, y2: -1})
    assert res.mass == T3.distance(x, y1) + T3.distance(x, y2)


def test_empty_cycle():
    assert fl.fill_zero_cycle(T3, {}).mass == 0


def test_unbalanced_cycle_rejected():
    with pytest.raises(fl.FillingError):
        fl.fill_zero_cycle(T3, {(): 1})


def test_non_graph_space_rejected():
    with pytest.raises(fl.FillingError):
        fl.fill_zero_cycle(sp.HalfPlaneNet(), {(0.0, 1.0): 1, (1.0, 1.0): -1})


def _brute_force(s, z):
    sources = [p for p, w in z.items() for _ in range(-w) if w < 0]
    sinks = [q for q, w in z.items() for _ in range(w) if w > 0]
    return min(sum(s.distance(p, q) for p, q in zip(sources, perm)) for perm in itertools.permutations(sinks))


def test_transport_matches_exhaustive_matching():
    rng = random.Random(9)
    for _ in range(40):
        pts = list({(rng.randint(-5, 5), rng.randint(-5, 5)) for _ in range(6)})
        pts = pts[: len(pts) - len(pts) % 2]
        z = {p: (1 if i % 2 else -1) for i, p in enumerate(pts)}
        assert fl.fill_zero_cycle(Z2, z).mass == (_brute_force(Z2, z) if z else 0)


@given(st.tuples(st.integers(-30, 30), st.integers(-30, 30)), st.tuples(st.integers(-30, 30), st.integers(-30, 30)))
def test_lattice_pair_mass_is_distance(x, y):
    z = {} if x == y else {y: 1, x: -1}
    assert fl.fill_zero_cycle(Z2, z).mass == Z2.distance(x, y)


# --- plane 1-cycles -----------------------------------------------------------

def _flood_winding(z: CubicalChain):
    """Independent oracle: winding number of each unit square about its centre,
    counted by the crossings of a horizontal ray going right."""
    cells = {}
    xs = [a[0] for (a, _), _ in z.items()]
    ys = [a[1] for (a, _), _ in z.items()]
    for i in range(min(xs) - 1, max(xs) + 1):
        for j in range(min(ys) - 1, max(ys) + 1):
            w = 0
            for ((a, b), axes), c in z.items():
                # upward vertical edges right of the centre count +1
                if axes == (1,) and b == j and a > i:
                    w += c
            if w:
                cells[((i, j), (0, 1))] = w
    return cells


def test_rectangle_fill():
    res = fl.fill_one_cycle_plane(fl.rectangle_boundary(3, 2))
    assert res.mass == 6
    assert res.filler.terms == {((i, j), (0, 1)): 1 for i in range(3) for j in range(2)}


def test_figure_eight():
    z = fl.rectangle_boundary(1, 1) - fl.rectangle_boundary(1, 1, corner=(1, 0))
    res = fl.fill_one_cycle_plane(z)
    assert res.mass == 2
    assert res.filler.terms == {((0, 0), (0, 1)): 1, ((1, 0), (0, 1)): -1}


def test_empty_plane_cycle():
    assert fl.fill_one_cycle_plane(CubicalChain(1, 2)).mass == 0


def test_non_cycle_rejected():
    with pytest.raises(fl.FillingError, match="not a cycle"):
        fl.fill_one_cycle_plane(CubicalChain(1, 2, [(((0, 0), (0,)), 1)]))


@given(st.lists(st.tuples(st.integers(-4, 4), st.integers(-4, 4), st.integers(-2, 2)), max_size=15))
@settings(max_examples=60)
def test_plane_filler_matches_flood_oracle(squares):
    filler = CubicalChain(2, 2, [(((i, j), (0, 1)), c) for i, j, c in squares])
    z = fl.cubical_boundary(filler)
    res = fl.fill_one_cycle_plane(z)
    assert res.filler == filler
    assert fl.cubical_boundary(res.filler) == z
    if not z.is_zero():
        assert res.filler.terms == _flood_winding(z)


@pytest.mark.parametrize("a,b", [(1, 1), (5, 2), (30, 30), (17, 29)])
def test_rectangle_masses(a, b):
    assert fl.fill_one_cycle_plane(fl.rectangle_boundary(a, b, corner=(-3, 7))).mass == a * b


# --- slicing ------------------------------------------------------------------

def test_slice_of_square_region():
    c = fl.box_chain((0, 0), (3, 3))
    s = fl.cubical_slice(c, 0, 1.5)
    assert s.mass() == 3
    assert all(axes == (1,) and anchor[0] == 1 for (anchor, axes), _ in s.items())


def test_total_slice_mass_of_square_region():
    c = fl.box_chain((0, 0), (3, 3))
    masses = dict(fl.coarea_check(c, 0).slice_masses)
    assert masses[1.5] + masses[2.5] == 6
    assert sum(masses.values()) == 9 <= c.mass()


def test_slice_beyond_support_is_empty():
    z = fl.rectangle_boundary(3, 2)
    assert fl.cubical_slice(z, 0, 10.5).is_zero()
    assert fl.cubical_slice(z, 1, -4.5).is_zero()


def test_slice_needs_half_integer():
    with pytest.raises(fl.FillingError):
        fl.cubical_slice(fl.box_chain((0, 0), (2, 2)), 0, 1.0)


@given(st.integers(0, 10_000))
@settings(max_examples=40, deadline=None)
def test_coarea_inequality(seed):
    rng = random.Random(seed)
    degree = rng.choice([1, 2])
    terms = []
    for _ in range(rng.randint(0, 30)):
        axes = tuple(sorted(rng.sample(range(2), degree)))
        terms.append((((rng.randint(0, 8), rng.randint(0, 8)), axes), rng.randint(-3, 3)))
    c = CubicalChain(degree, 2, terms)
    for axis in (0, 1):
        assert fl.coarea_check(c, axis).holds


# --- scaling --------------------------------------------------------------------

def test_plane_scaling_exponent():
    res = fl.filling_scaling_experiment("z2-rect", range(10, 101, 10))
    assert res.table[0] == (40.0, 100.0)
    assert abs(res.exponent - 2) <= 0.05


def test_tree_scaling_exponent():
    res = fl.filling_scaling_experiment("tree-endpoints", [4, 8, 16, 32, 64])
    assert all(ell == mass for ell, mass in res.table)
    assert abs(res.exponent - 1) <= 0.05


def test_single_size_has_no_exponent():
    res = fl.filling_scaling_experiment("z2-rect", [5])
    assert res.exponent is None and res.table == ((20.0, 25.0),)


def test_unknown_family():
    with pytest.raises(fl.FillingError):
        fl.filling_scaling_experiment("cubes", [2])
