import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coarsefill import _exact as ex
from coarsefill import spaces as sp
from coarsefill import weyl as wy

SYSTEMS = [("A", 1), ("A", 2), ("A", 3), ("A", 4), ("B", 2), ("B", 3), ("B", 4), ("C", 2), ("C", 3),
           ("D", 3), ("D", 4), ("G", 2), ("A", 8), ("D", 8)]

Q = st.fractions(min_value=-5, max_value=5, max_denominator=6)


def test_a2_roots():
    rs = wy.root_system("A", 2)
    expected = {ex.vec(1, -1, 0), ex.vec(0, 1, -1), ex.vec(1, 0, -1)}
    expected |= {ex.neg(r) for r in expected}
    assert set(rs.roots) == expected
    assert rs.gram()[0][1] == -1


def test_g2_roots():
    rs = wy.root_system("G", 2)
    assert len(rs.roots) == 12
    lengths = sorted({ex.norm2(r) for r in rs.roots})
    assert len(lengths) == 2 and lengths[1] / lengths[0] == 3


@pytest.mark.parametrize("t,r", SYSTEMS)
def test_roots_closed_under_negation_and_basis_obtuse(t, r):
    rs = wy.root_system(t, r)
    roots = set(rs.roots)
    assert all(ex.neg(a) in roots for a in roots)
    assert ex.rank(rs.simple_basis) == rs.rank == r
    assert rs.is_obtuse()


@pytest.mark.parametrize("t,r", SYSTEMS)
def test_generators_are_acute_and_singular(t, r):
    rs = wy.root_system(t, r)
    sg = wy.sector_generators(rs)
    assert sg.is_acute()
    for i, e in enumerate(sg.generators):
        for k, h in enumerate(rs.simple_basis):
            value = ex.dot(e, h)
            assert value > 0 if i == k else value == 0
        assert ex.primitive(e) == e


def test_a2_generators():
    sg = wy.sector_generators(wy.root_system("A", 2))
    assert sg.generators == (ex.vec(2, -1, -1), ex.vec(1, 1, -2))
    assert ex.dot(*sg.generators) == 3


def test_rank_one_generator_is_along_the_root():
    rs = wy.root_system("A", 1)
    (e,) = wy.sector_generators(rs).generators
    assert ex.rank([e, rs.simple_basis[0]]) == 1


def test_unsupported_systems():
    for t, r in [("E", 6), ("A", 9), ("G", 3), ("B", 1), ("D", 2)]:
        with pytest.raises(wy.WeylError):
            wy.root_system(t, r)


def test_product_generators_concatenate():
    rs = wy.parse_label("A1xA1")
    sg = wy.sector_generators(rs)
    assert rs.rank == 2 and rs.ambient_dim == 4
    assert ex.dot(*sg.generators) == 0


def test_dominant_vector_is_fixed():
    rs = wy.root_system("A", 2)
    e1 = wy.sector_generators(rs).generators[0]
    assert wy.dominance_project(e1, rs) == (e1, ())


def test_negated_generator_projects_to_same_length():
    rs = wy.root_system("A", 2)
    e1 = wy.sector_generators(rs).generators[0]
    w, word = wy.dominance_project(ex.neg(e1), rs)
    assert wy.is_dominant(w, rs)
    assert ex.norm2(w) == ex.norm2(e1)
    v = ex.neg(e1)
    for i in word:
        v = rs.reflect(v, i)
    assert v == w


@pytest.mark.parametrize("t,r", [("A", 3), ("B", 3), ("C", 3), ("D", 4), ("G", 2)])
@given(data=st.data())
@settings(max_examples=30, deadline=None)
def test_projection_and_coordinates(t, r, data):
    rs = wy.root_system(t, r)
    sg = wy.sector_generators(rs)
    coeffs = data.draw(st.lists(Q, min_size=r, max_size=r))
    v = ex.vsum([ex.scale(c, h) for c, h in zip(coeffs, rs.simple_basis)], rs.ambient_dim)
    w, _ = wy.dominance_project(v, rs)
    assert wy.is_dominant(w, rs)
    assert ex.norm2(w) == ex.norm2(v)
    deltas = wy.sector_coordinates(w, sg).coefficients
    assert all(d >= 0 for d in deltas) and sg.combine(deltas) == w
    for size in range(0, r + 1):
        for J in itertools.combinations(range(r), size):
            assert wy.cone_norm_inequality(w, sg, J)


@given(st.lists(st.fractions(min_value=0, max_value=6, max_denominator=5), min_size=2, max_size=2))
@settings(max_examples=40, deadline=None)
def test_coordinate_round_trip_g2(deltas):
    sg = wy.sector_generators(wy.root_system("G", 2))
    assert wy.sector_coordinates(sg.combine(deltas), sg).coefficients == tuple(deltas)


def test_sector_coordinates_examples():
    sg = wy.sector_generators(wy.root_system("A", 2))
    e1, e2 = sg.generators
    assert wy.sector_coordinates(e1, sg).coefficients == (1, 0)
    assert wy.sector_coordinates(ex.add(e1, e2), sg).coefficients == (1, 1)


def test_sector_coordinates_reports_violated_wall():
    rs = wy.root_system("A", 2)
    sg = wy.sector_generators(rs)
    with pytest.raises(wy.SectorError) as info:
        wy.sector_coordinates(ex.neg(sg.generators[1]), sg)
    assert info.value.wall == 1


def test_cone_norm_with_exact_slack():
    rs = wy.root_system("A", 3)
    sg = wy.sector_generators(rs)
    v = ex.vsum(sg.generators, 4)
    slack = wy.cone_norm_slack(v, sg, range(3))
    assert slack == ex.norm2(v) - sum(ex.norm2(e) for e in sg.generators)
    assert slack > 0
    assert wy.cone_norm_slack(v, sg, []) == ex.norm2(v)


def _euclid(a, b):
    return math.sqrt(float(ex.norm2(ex.sub(a, b))))


def test_pigeonhole_rank_one_returns_segment():
    rs = wy.root_system("A", 1)
    sg = wy.sector_generators(rs)
    a, b = ex.vec(0, 0), ex.vec(3, -3)
    res = wy.segment_pigeonhole(a, b, sg, _euclid)
    assert (res.start, res.end) == (a, b) and res.ratio == pytest.approx(1.0)


def test_pigeonhole_a2_euclidean():
    sg = wy.sector_generators(wy.root_system("A", 2))
    a = ex.zero(3)
    b = ex.add(*sg.generators)
    res = wy.segment_pigeonhole(a, b, sg, _euclid)
    assert res.ratio >= 0.5
    assert _euclid(res.start, res.end) <= _euclid(a, b)


def test_pigeonhole_with_horospherical_distance():
    rs = wy.root_system("B", 2)
    sg = wy.sector_generators(rs)
    f = sp.horosphere_embed(2)
    dist = lambda x, y: f.image_distance(tuple(int(c) for c in x), tuple(int(c) for c in y))  # noqa: E731
    a, b = ex.vec(0, 0), ex.vec(7, -3)
    res = wy.segment_pigeonhole(a, b, sg, dist)
    assert max(res.image_lengths) >= sum(res.image_lengths) / 2
    assert sum(res.image_lengths) >= dist(a, b) - 1e-12


def test_pigeonhole_zero_segment():
    sg = wy.sector_generators(wy.root_system("A", 2))
    with pytest.raises(wy.WeylError):
        wy.segment_pigeonhole(ex.zero(3), ex.zero(3), sg, _euclid)


def test_inspect_payload():
    info = wy.inspect(wy.root_system("G", 2))
    assert info["root_count"] == 12
    assert info["generator_gram"] == [["2/1", "3/1"], ["3/1", "6/1"]]
    assert info["obtuse_basis"] and info["acute_generators"]
    assert Fraction(info["basis_gram"][0][1]) < 0
