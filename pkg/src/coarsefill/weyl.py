"""Exact root systems, Weyl sector generators and sector coordinates."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Callable, List, Optional, Sequence, Tuple

from . import _exact as ex
from ._exact import Vector

MAX_RANK = 8


class WeylError(ValueError):
    pass


class SectorError(WeylError):
    """A vector lies outside the closed fundamental sector."""

    def __init__(self, wall: int, value: Fraction):
        super().__init__(f"vector violates wall {wall}: <v, h_{wall}> = {value} < 0")
        self.wall = wall
        self.value = value


@dataclass(frozen=True)
class RootSystem:
    type_label: str
    ambient_dim: int
    roots: Tuple[Vector, ...]
    simple_basis: Tuple[Vector, ...]

    @property
    def rank(self) -> int:
        return len(self.simple_basis)

    def gram(self) -> List[List[Fraction]]:
        return ex.gram(self.simple_basis)

    def is_obtuse(self) -> bool:
        g = self.gram()
        return all(g[i][j] <= 0 for i in range(self.rank) for j in range(self.rank) if i != j)

    def reflect(self, v: Vector, i: int) -> Vector:
        """Simple reflection through the wall orthogonal to ``h_i`` (0-based)."""
        h = self.simple_basis[i]
        return ex.sub(v, ex.scale(2 * ex.dot(v, h) / ex.norm2(h), h))

    def in_span(self, v: Vector) -> bool:
        return ex.rank(list(self.simple_basis) + [v]) == self.rank

    def to_json(self) -> dict:
        return {
            "type": self.type_label,
            "ambient_dim": self.ambient_dim,
            "roots": [[ex.fmt(a) for a in r] for r in self.roots],
            "simple_basis": [[ex.fmt(a) for a in h] for h in self.simple_basis],
        }


def _e(n: int, *entries: Tuple[int, int]) -> Vector:
    v = [Fraction(0)] * n
    for i, c in entries:
        v[i] += c
    return tuple(v)


def _pm_pairs(n: int) -> List[Vector]:
    out = []
    for i, j in combinations(range(n), 2):
        for si in (1, -1):
            for sj in (1, -1):
                out.append(_e(n, (i, si), (j, sj)))
    return out


def _type_a(n: int) -> RootSystem:
    d = n + 1
    roots = [_e(d, (i, 1), (j, -1)) for i in range(d) for j in range(d) if i != j]
    basis = [_e(d, (i, 1), (i + 1, -1)) for i in range(n)]
    return RootSystem(f"A{n}", d, tuple(sorted(roots)), tuple(basis))


def _type_b(n: int) -> RootSystem:
    roots = _pm_pairs(n) + [_e(n, (i, s)) for i in range(n) for s in (1, -1)]
    basis = [_e(n, (i, 1), (i + 1, -1)) for i in range(n - 1)] + [_e(n, (n - 1, 1))]
    return RootSystem(f"B{n}", n, tuple(sorted(roots)), tuple(basis))


def _type_c(n: int) -> RootSystem:
    roots = _pm_pairs(n) + [_e(n, (i, 2 * s)) for i in range(n) for s in (1, -1)]
    basis = [_e(n, (i, 1), (i + 1, -1)) for i in range(n - 1)] + [_e(n, (n - 1, 2))]
    return RootSystem(f"C{n}", n, tuple(sorted(roots)), tuple(basis))


def _type_d(n: int) -> RootSystem:
    basis = [_e(n, (i, 1), (i + 1, -1)) for i in range(n - 1)] + [_e(n, (n - 2, 1), (n - 1, 1))]
    return RootSystem(f"D{n}", n, tuple(sorted(_pm_pairs(n))), tuple(basis))


def _type_g2() -> RootSystem:
    short = [_e(3, (i, 1), (j, -1)) for i in range(3) for j in range(3) if i != j]
    long = []
    for i in range(3):
        j, k = [m for m in range(3) if m != i]
        v = _e(3, (i, 2), (j, -1), (k, -1))
        long += [v, ex.neg(v)]
    basis = [_e(3, (0, 1), (1, -1)), _e(3, (0, -2), (1, 1), (2, 1))]
    return RootSystem("G2", 3, tuple(sorted(short + long)), tuple(basis))


_MIN_RANK = {"A": 1, "B": 2, "C": 2, "D": 3}


def root_system(type_label: str, rank: int) -> RootSystem:
    """Standard exact realization of an irreducible root system.

    Supported: A1..A8, B2..B8, C2..C8, D3..D8 and G2.
    """
    t = type_label.upper()
    if t == "G":
        if rank != 2:
            raise WeylError("G has rank 2 only")
        return _type_g2()
    if t not in _MIN_RANK:
        raise WeylError(f"unsupported root system type {type_label!r}")
    if not _MIN_RANK[t] <= rank <= MAX_RANK:
        raise WeylError(f"rank {rank} outside {_MIN_RANK[t]}..{MAX_RANK} for type {t}")
    return {"A": _type_a, "B": _type_b, "C": _type_c, "D": _type_d}[t](rank)


def parse_label(label: str) -> RootSystem:
    """``"A2"``, ``"g2"``, or a product such as ``"A1xA1"``."""
    factors = [f.strip() for f in label.lower().split("x") if f.strip()]
    systems = [root_system(f[0], int(f[1:])) for f in factors]
    return systems[0] if len(systems) == 1 else product(*systems)


def product(*systems: RootSystem) -> RootSystem:
    """Direct sum: roots of each factor in orthogonal coordinate blocks."""
    dim = sum(s.ambient_dim for s in systems)
    roots, basis = [], []
    offset = 0
    for s in systems:
        pad = lambda v: (Fraction(0),) * offset + v + (Fraction(0),) * (dim - offset - s.ambient_dim)
        roots += [pad(r) for r in s.roots]
        basis += [pad(h) for h in s.simple_basis]
        offset += s.ambient_dim
    label = "x".join(s.type_label for s in systems)
    return RootSystem(label, dim, tuple(sorted(roots)), tuple(basis))


@dataclass(frozen=True)
class SectorGenerators:
    generators: Tuple[Vector, ...]
    parent: RootSystem

    def __len__(self) -> int:
        return len(self.generators)

    def gram(self) -> List[List[Fraction]]:
        return ex.gram(self.generators)

    def is_acute(self) -> bool:
        return all(x >= 0 for row in self.gram() for x in row)

    def combine(self, coefficients: Sequence[Fraction]) -> Vector:
        terms = [ex.scale(c, e) for c, e in zip(coefficients, self.generators)]
        return ex.vsum(terms, self.parent.ambient_dim)

    def to_json(self) -> dict:
        return {
            "parent": self.parent.type_label,
            "generators": [[ex.fmt(a) for a in e] for e in self.generators],
            "gram": [[ex.fmt(x) for x in row] for row in self.gram()],
        }


def sector_generators(rs: RootSystem) -> SectorGenerators:
    """Maximally singular edge directions of the fundamental sector.

    ``e_i`` is orthogonal to every ``h_k`` with ``k != i``, lies in the span of
    the roots, pairs positively with ``h_i`` and is scaled to a primitive
    integer vector.
    """
    g = rs.gram()
    try:
        ginv = ex.inverse(g)
    except ArithmeticError as exc:  # a basis never has a singular Gram matrix
        raise RuntimeError(f"singular Gram matrix for {rs.type_label}") from exc
    gens = []
    for i in range(rs.rank):
        coeffs = [ginv[j][i] for j in range(rs.rank)]
        e = ex.vsum([ex.scale(c, h) for c, h in zip(coeffs, rs.simple_basis)], rs.ambient_dim)
        gens.append(ex.primitive(e))
    return SectorGenerators(tuple(gens), rs)


def is_dominant(v: Vector, rs: RootSystem) -> bool:
    return all(ex.dot(v, h) >= 0 for h in rs.simple_basis)


def dominance_project(v: Vector, rs: RootSystem, max_steps: int = 100_000) -> Tuple[Vector, Tuple[int, ...]]:
    """Move ``v`` into the closed fundamental sector by simple reflections.

    Reflects at the lowest-index violated wall until none is violated.  The
    returned word lists the applied reflections in order (0-based indices), so
    ``w = s_{word[-1]} ... s_{word[0]} v``.
    """
    v = ex.vec(v)
    if len(v) != rs.ambient_dim:
        raise WeylError("vector has the wrong dimension")
    w = v
    word: List[int] = []
    seen = {w}
    while True:
        bad = next((i for i, h in enumerate(rs.simple_basis) if ex.dot(w, h) < 0), None)
        if bad is None:
            return w, tuple(word)
        w = rs.reflect(w, bad)
        word.append(bad)
        if w in seen or len(word) > max_steps:
            raise RuntimeError("dominance projection did not terminate")
        seen.add(w)


@dataclass(frozen=True)
class SectorCoordinates:
    coefficients: Tuple[Fraction, ...]
    basepoint: Vector


def sector_coordinates(v: Vector, sg: SectorGenerators, basepoint: Optional[Vector] = None) -> SectorCoordinates:
    """Exact ``delta_i >= 0`` with ``v = sum delta_i e_i``."""
    rs = sg.parent
    v = ex.vec(v)
    if len(v) != rs.ambient_dim:
        raise WeylError("vector has the wrong dimension")
    deltas = []
    for i, (h, e) in enumerate(zip(rs.simple_basis, sg.generators)):
        value = ex.dot(v, h)
        if value < 0:
            raise SectorError(i, value)
        deltas.append(value / ex.dot(e, h))
    if sg.combine(deltas) != v:
        raise WeylError("vector is not in the span of the roots")
    base = ex.zero(rs.ambient_dim) if basepoint is None else ex.vec(basepoint)
    return SectorCoordinates(tuple(deltas), base)


def cone_norm_slack(v: Vector, sg: SectorGenerators, subset: Sequence[int]) -> Fraction:
    """``|v|^2 - sum_{j in J} delta_j^2 |e_j|^2`` (0-based ``J``)."""
    deltas = sector_coordinates(v, sg).coefficients
    return ex.norm2(ex.vec(v)) - sum(
        (deltas[j] ** 2 * ex.norm2(sg.generators[j]) for j in subset), Fraction(0)
    )


def cone_norm_inequality(v: Vector, sg: SectorGenerators, subset: Sequence[int]) -> bool:
    return cone_norm_slack(v, sg, subset) >= 0


@dataclass(frozen=True)
class PigeonholeResult:
    start: Vector
    end: Vector
    ratio: float
    path: Tuple[Vector, ...]
    image_lengths: Tuple[float, ...]
    index: int


def segment_pigeonhole(
    a: Vector,
    b: Vector,
    sg: SectorGenerators,
    image_distance: Callable[[Vector, Vector], float],
) -> PigeonholeResult:
    """Pick the sub-segment of the sector broken path with the longest image.

    ``b - a`` is moved into the fundamental sector, written as
    ``sum delta_i e_i`` there, and the generators are carried back along the
    inverse reflection word.  The path ``a, a + delta_1 g_1, .., b`` then has
    ``p`` legs, and the leg maximizing ``image_distance`` is returned with
    ``ratio = image_distance(leg) / image_distance(a, b)``.  When
    ``image_distance`` is a pseudo-metric the ratio is at least ``1/p``.
    """
    rs = sg.parent
    a, b = ex.vec(a), ex.vec(b)
    w = ex.sub(b, a)
    if all(c == 0 for c in w):
        raise WeylError("zero-length segment")
    dominant, word = dominance_project(w, rs)
    deltas = sector_coordinates(dominant, sg).coefficients
    gens = []
    for e in sg.generators:
        for i in reversed(word):
            e = rs.reflect(e, i)
        gens.append(e)
    path = [a]
    for d, g in zip(deltas, gens):
        path.append(ex.add(path[-1], ex.scale(d, g)))
    if path[-1] != b:
        raise RuntimeError("broken path does not end at b")
    lengths = tuple(float(image_distance(path[i], path[i + 1])) for i in range(len(path) - 1))
    best = max(range(len(lengths)), key=lambda i: lengths[i])
    total = float(image_distance(a, b))
    ratio = lengths[best] / total if total > 0 else float("inf")
    return PigeonholeResult(path[best], path[best + 1], ratio, tuple(path), lengths, best)


def inspect(rs: RootSystem) -> dict:
    """Plain-data description: roots, basis Gram matrix, generators and their inner products."""
    sg = sector_generators(rs)
    return {
        "type": rs.type_label,
        "rank": rs.rank,
        "ambient_dim": rs.ambient_dim,
        "root_count": len(rs.roots),
        "roots": [[ex.fmt(a) for a in r] for r in rs.roots],
        "simple_basis": [[ex.fmt(a) for a in h] for h in rs.simple_basis],
        "basis_gram": [[ex.fmt(x) for x in row] for row in rs.gram()],
        "generators": [[ex.fmt(a) for a in e] for e in sg.generators],
        "generator_gram": [[ex.fmt(x) for x in row] for row in sg.gram()],
        "obtuse_basis": rs.is_obtuse(),
        "acute_generators": sg.is_acute(),
    }
