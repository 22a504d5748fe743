"""Discrete bounded-geometry model spaces, eps-volumes and coarse embeddings.

Points are plain tuples: trees use the sequence of child indices from the
root, lattices integer coordinates, products tuples of factor points and the
upper half-space ``(x_1, .., x_n, y)`` with ``y > 0``.
"""

from __future__ import annotations

import heapq
import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Set, Tuple

import numpy as np

Point = Tuple
DEFAULT_BALL_BUDGET = 2_000_000


class SpaceError(ValueError):
    pass


class BudgetError(SpaceError):
    def __init__(self, what: str, needed: int, budget: int):
        super().__init__(f"{what} needs about {needed} points, over the budget of {budget}")
        self.budget = budget


class ModelSpace:
    """Common interface; subclasses are frozen dataclasses."""

    name = "space"
    is_graph = False
    vertex_transitive = True

    @property
    def min_epsilon(self) -> float:
        """Bounded-geometry threshold ``R_0``: smallest admissible covering radius."""
        return 0.0

    def origin(self) -> Point:
        raise NotImplementedError

    def contains(self, x) -> bool:
        raise NotImplementedError

    def distance(self, x, y) -> float:
        raise NotImplementedError

    def ball(self, x, r: float, budget: int = DEFAULT_BALL_BUDGET) -> Set[Point]:
        raise NotImplementedError

    def _require(self, *points) -> None:
        for p in points:
            if not self.contains(p):
                raise SpaceError(f"{p!r} is not a point of {self.name}")


# --- trees ------------------------------------------------------------------

@dataclass(frozen=True)
class RegularTree(ModelSpace):
    """The regular tree ``T_d`` (every vertex has degree ``d``)."""

    degree: int = 3
    is_graph = True

    def __post_init__(self):
        if self.degree < 2:
            raise SpaceError("tree degree must be at least 2")

    @property
    def name(self) -> str:
        return f"T{self.degree}"

    def origin(self) -> Point:
        return ()

    def contains(self, x) -> bool:
        if not isinstance(x, tuple):
            return False
        for i, c in enumerate(x):
            bound = self.degree if i == 0 else self.degree - 1
            if not (isinstance(c, int) and 0 <= c < bound):
                return False
        return True

    def distance(self, x, y) -> int:
        self._require(x, y)
        common = 0
        for a, b in zip(x, y):
            if a != b:
                break
            common += 1
        return len(x) + len(y) - 2 * common

    def neighbors(self, x) -> List[Point]:
        out = [x[:-1]] if x else []
        width = self.degree if not x else self.degree - 1
        return out + [x + (i,) for i in range(width)]

    def geodesic(self, x, y) -> List[Point]:
        self._require(x, y)
        common = 0
        for a, b in zip(x, y):
            if a != b:
                break
            common += 1
        up = [x[:k] for k in range(len(x), common - 1, -1)]
        down = [y[:k] for k in range(common + 1, len(y) + 1)]
        return up + down

    def ball_size(self, r: int) -> int:
        """Closed form ``1 + d((d-1)^r - 1)/(d-2)`` (``1 + 2r`` when ``d = 2``)."""
        d = self.degree
        if d == 2:
            return 1 + 2 * r
        return 1 + d * ((d - 1) ** r - 1) // (d - 2)

    def ball(self, x, r: float, budget: int = DEFAULT_BALL_BUDGET) -> Set[Point]:
        self._require(x)
        r = int(math.floor(r))
        if r < 0:
            return set()
        if self.ball_size(r) > budget:
            raise BudgetError(f"ball of radius {r} in {self.name}", self.ball_size(r), budget)
        return _bfs_ball(self, x, r)


def _bfs_ball(space, x, r: int) -> Set[Point]:
    seen = {x}
    frontier = [x]
    for _ in range(r):
        nxt = []
        for v in frontier:
            for w in space.neighbors(v):
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
    return seen


# --- lattices ---------------------------------------------------------------

@dataclass(frozen=True)
class Lattice(ModelSpace):
    """``Z^n`` with the graph (``l1``) or Euclidean (``l2``) metric."""

    dim: int = 1
    metric: str = "l1"

    def __post_init__(self):
        if self.dim < 1:
            raise SpaceError("lattice dimension must be positive")
        if self.metric not in ("l1", "l2"):
            raise SpaceError(f"unknown lattice metric {self.metric!r}")

    @property
    def is_graph(self) -> bool:
        return self.metric == "l1" or self.dim == 1

    @property
    def name(self) -> str:
        return f"Z{self.dim}" + ("" if self.metric == "l1" else "-l2")

    def origin(self) -> Point:
        return (0,) * self.dim

    def contains(self, x) -> bool:
        return isinstance(x, tuple) and len(x) == self.dim and all(isinstance(c, int) for c in x)

    def distance(self, x, y):
        self._require(x, y)
        if self.metric == "l1" or self.dim == 1:
            return sum(abs(a - b) for a, b in zip(x, y))
        return math.sqrt(sum((a - b) ** 2 for a, b in zip(x, y)))

    def neighbors(self, x) -> List[Point]:
        out = []
        for i in range(self.dim):
            for s in (-1, 1):
                out.append(x[:i] + (x[i] + s,) + x[i + 1:])
        return out

    def geodesic(self, x, y) -> List[Point]:
        self._require(x, y)
        path = [x]
        cur = list(x)
        for i in range(self.dim):
            step = 1 if y[i] > cur[i] else -1
            while cur[i] != y[i]:
                cur[i] += step
                path.append(tuple(cur))
        return path

    def ball(self, x, r: float, budget: int = DEFAULT_BALL_BUDGET) -> Set[Point]:
        self._require(x)
        if r < 0:
            return set()
        k = int(math.floor(r))
        if (2 * k + 1) ** self.dim > budget:
            raise BudgetError(f"ball of radius {r} in {self.name}", (2 * k + 1) ** self.dim, budget)
        out = set()
        for off in itertools.product(range(-k, k + 1), repeat=self.dim):
            if self.metric == "l1" or self.dim == 1:
                ok = sum(abs(o) for o in off) <= k
            else:
                ok = sum(o * o for o in off) <= r * r
            if ok:
                out.add(tuple(a + o for a, o in zip(x, off)))
        return out


# --- products ---------------------------------------------------------------

@dataclass(frozen=True)
class Product(ModelSpace):
    """Product with the l2 combination of factor distances."""

    factors: Tuple[ModelSpace, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        if not self.factors:
            raise SpaceError("a product needs at least one factor")

    @property
    def name(self) -> str:
        return "x".join(f.name for f in self.factors)

    @property
    def min_epsilon(self) -> float:
        return max(f.min_epsilon for f in self.factors)

    @property
    def vertex_transitive(self) -> bool:
        return all(f.vertex_transitive for f in self.factors)

    def origin(self) -> Point:
        return tuple(f.origin() for f in self.factors)

    def contains(self, x) -> bool:
        return (isinstance(x, tuple) and len(x) == len(self.factors)
                and all(f.contains(c) for f, c in zip(self.factors, x)))

    def component_distances(self, x, y) -> List[float]:
        self._require(x, y)
        return [f.distance(a, b) for f, a, b in zip(self.factors, x, y)]

    def distance(self, x, y) -> float:
        return math.sqrt(sum(d * d for d in self.component_distances(x, y)))

    def ball(self, x, r: float, budget: int = DEFAULT_BALL_BUDGET) -> Set[Point]:
        self._require(x)
        parts = [sorted(f.ball(c, r, budget), key=repr) for f, c in zip(self.factors, x)]
        size = math.prod(len(p) for p in parts)
        if size > budget:
            raise BudgetError(f"ball of radius {r} in {self.name}", size, budget)
        dists = [[f.distance(c, p) for p in ps] for f, c, ps in zip(self.factors, x, parts)]
        out = set()
        for idx in itertools.product(*[range(len(p)) for p in parts]):
            if sum(dists[i][j] ** 2 for i, j in enumerate(idx)) <= r * r + 1e-12:
                out.add(tuple(parts[i][j] for i, j in enumerate(idx)))
        return out


# --- hyperbolic half-space --------------------------------------------------

def half_space_distance(p: Sequence[float], q: Sequence[float]) -> float:
    """Hyperbolic distance in the upper half-space model (last coordinate is height).

    ``arccosh(1 + |p - q|^2 / (2 p_y q_y))``, evaluated as
    ``2 asinh(|p - q| / (2 sqrt(p_y q_y)))`` for accuracy near zero.
    """
    y1, y2 = float(p[-1]), float(q[-1])
    if y1 <= 0 or y2 <= 0:
        raise SpaceError("half-space points need positive height")
    chord = math.sqrt(math.fsum((float(a) - float(b)) ** 2 for a, b in zip(p, q)))
    return 2.0 * math.asinh(chord / (2.0 * math.sqrt(y1 * y2)))


@dataclass(frozen=True)
class HalfSpaceNet(ModelSpace):
    """Upper half-space ``H^{n+1}`` sampled on a net for volume experiments.

    Net points sit at heights ``2^j`` with horizontal spacing
    ``spacing * 2^j``.  Distances are always the closed form and any point
    with positive height is accepted.
    """

    boundary_dim: int = 1
    spacing: float = 1.0
    vertex_transitive = True

    @property
    def name(self) -> str:
        return f"H{self.boundary_dim + 1}"

    @property
    def min_epsilon(self) -> float:
        return max(2 * math.asinh(self.spacing / 2), math.log(2))

    def origin(self) -> Point:
        return (0.0,) * self.boundary_dim + (1.0,)

    def contains(self, x) -> bool:
        return isinstance(x, tuple) and len(x) == self.boundary_dim + 1 and float(x[-1]) > 0

    def distance(self, x, y) -> float:
        self._require(x, y)
        return half_space_distance(x, y)

    def ball(self, x, r: float, budget: int = DEFAULT_BALL_BUDGET) -> Set[Point]:
        """Net points within hyperbolic distance ``r`` of ``x``."""
        self._require(x)
        y0 = float(x[-1])
        lo = math.floor(math.log2(y0 * math.exp(-r)))
        hi = math.ceil(math.log2(y0 * math.exp(r)))
        centre_h, rad = y0 * math.cosh(r), y0 * math.sinh(r)
        out = set()
        for j in range(lo, hi + 1):
            y = 2.0 ** j
            w2 = rad * rad - (y - centre_h) ** 2
            if w2 < 0:
                continue
            step = self.spacing * y
            w = math.sqrt(w2)
            ranges = [range(math.ceil((float(c) - w) / step), math.floor((float(c) + w) / step) + 1)
                      for c in x[:-1]]
            if math.prod(len(rg) for rg in ranges) + len(out) > budget:
                raise BudgetError(f"net ball of radius {r}", math.prod(len(rg) for rg in ranges), budget)
            for idx in itertools.product(*ranges):
                p = tuple(i * step for i in idx) + (y,)
                if half_space_distance(p, x) <= r:
                    out.add(p)
        return out


def HalfPlaneNet(spacing: float = 1.0) -> HalfSpaceNet:
    return HalfSpaceNet(1, spacing)


def distance(s: ModelSpace, x, y) -> float:
    return s.distance(x, y)


def ball(s: ModelSpace, x, r: float, budget: int = DEFAULT_BALL_BUDGET) -> Set[Point]:
    return s.ball(x, r, budget)


def parse_space(spec: str) -> ModelSpace:
    """``t3``, ``z2``, ``z2-l2``, ``h2``, ``t3xt3`` and similar."""
    factors = []
    for part in spec.lower().split("x"):
        part = part.strip()
        if part.startswith("t"):
            factors.append(RegularTree(int(part[1:])))
        elif part.startswith("z"):
            body, _, metric = part[1:].partition("-")
            factors.append(Lattice(int(body or 1), metric or "l1"))
        elif part.startswith("h"):
            factors.append(HalfSpaceNet(int(part[1:]) - 1))
        else:
            raise SpaceError(f"unknown space {part!r}")
    return factors[0] if len(factors) == 1 else Product(tuple(factors))


# --- eps-volume -------------------------------------------------------------

@dataclass(frozen=True)
class VolumeBounds:
    lower: int
    upper: int
    method: str

    @property
    def exact(self) -> bool:
        return self.lower == self.upper


def _interval_cover(xs: Iterable[float], width: float) -> int:
    count, reach = 0, -math.inf
    for x in sorted(xs):
        if x > reach:
            count += 1
            reach = x + width
    return count


def _horocycle_height(s: ModelSpace, pts: Sequence[Point]) -> Optional[float]:
    if not isinstance(s, HalfSpaceNet) or s.boundary_dim != 1:
        return None
    heights = {float(p[-1]) for p in pts}
    return heights.pop() if len(heights) == 1 else None


def _cover_sets(s: ModelSpace, pts: Sequence[Point], eps: float, budget: int) -> Dict[Point, Set[int]]:
    covers: Dict[Point, Set[int]] = {}
    if s.is_graph:
        for i, a in enumerate(pts):
            for c in s.ball(a, eps, budget):
                covers.setdefault(c, set()).add(i)
    else:
        for c in pts:
            covers[c] = {i for i, a in enumerate(pts) if s.distance(a, c) <= eps}
    return covers


def _greedy_cover(covers: Dict[Point, Set[int]], n: int) -> int:
    """Lazy greedy set cover (gains only shrink, so stale heap keys are upper bounds)."""
    uncovered = set(range(n))
    heap = [(-len(cs), i) for i, cs in enumerate(covers.values())]
    sets = list(covers.values())
    heapq.heapify(heap)
    count = 0
    while uncovered:
        neg, i = heapq.heappop(heap)
        gain = len(sets[i] & uncovered)
        if heap and gain < -heap[0][0]:
            heapq.heappush(heap, (-gain, i))
            continue
        uncovered -= sets[i]
        count += 1
    return count


def _packing(s: ModelSpace, pts: Sequence[Point], eps: float) -> int:
    """Greedy set of points pairwise more than ``2 eps`` apart."""
    chosen: List[Point] = []
    if s.is_graph:
        blocked: Set[Point] = set()
        for p in pts:
            if p not in blocked:
                chosen.append(p)
                blocked |= s.ball(p, 2 * eps)
        return len(chosen)
    for p in pts:
        if all(s.distance(p, q) > 2 * eps for q in chosen):
            chosen.append(p)
    return len(chosen)


def _ilp_cover(covers: Dict[Point, Set[int]], n: int) -> int:
    from scipy.optimize import Bounds, LinearConstraint, milp
    from scipy.sparse import lil_matrix

    centres = sorted(covers, key=repr)
    m = lil_matrix((n, len(centres)))
    for j, c in enumerate(centres):
        for i in covers[c]:
            m[i, j] = 1
    res = milp(
        c=np.ones(len(centres)),
        constraints=LinearConstraint(m.tocsr(), lb=np.ones(n), ub=np.inf),
        integrality=np.ones(len(centres)),
        bounds=Bounds(0, 1),
    )
    if not res.success:
        raise SpaceError(f"set-cover ILP failed: {res.message}")
    chosen = [centres[j] for j, v in enumerate(res.x) if v > 0.5]
    covered = set().union(*(covers[c] for c in chosen)) if chosen else set()
    if len(covered) != n:
        raise SpaceError("set-cover ILP returned a non-cover")
    return len(chosen)


def epsilon_volume(s: ModelSpace, A: Iterable[Point], eps: float, method: str = "auto",
                   budget: int = DEFAULT_BALL_BUDGET) -> VolumeBounds:
    """Bounds on the minimal number of closed ``eps``-balls covering ``A``.

    ``method``:

    * ``"auto"`` - exact where a 1-D interval argument applies (``Z`` and
      sets on one horocycle of ``H^2``; on graphs ``eps < 1`` balls are
      single vertices), otherwise greedy cover / greedy packing bounds;
    * ``"greedy"`` - always the greedy/packing pair;
    * ``"ilp"`` - exact set cover by integer programming (graph spaces).
    """
    if eps < s.min_epsilon or eps <= 0 and not s.is_graph:
        raise SpaceError(f"eps={eps} below the bounded-geometry threshold {s.min_epsilon} of {s.name}")
    pts = sorted(set(A), key=repr)
    for p in pts:
        s._require(p)
    n = len(pts)
    if n == 0:
        return VolumeBounds(0, 0, "empty")
    if method not in ("auto", "greedy", "ilp"):
        raise SpaceError(f"unknown method {method!r}")
    if method == "auto":
        if s.is_graph and eps < 1:
            return VolumeBounds(n, n, "exact-points")
        if isinstance(s, Lattice) and s.dim == 1:
            k = _interval_cover((p[0] for p in pts), 2 * math.floor(eps))
            return VolumeBounds(k, k, "exact-interval")
        height = _horocycle_height(s, pts)
        if height is not None:
            k = _interval_cover((float(p[0]) for p in pts), 2 * height * math.sinh(eps))
            return VolumeBounds(k, k, "exact-horocycle")
    covers = _cover_sets(s, pts, eps, budget)
    if method == "ilp":
        if not s.is_graph:
            raise SpaceError("exact ILP covering needs a graph space")
        k = _ilp_cover(covers, n)
        return VolumeBounds(k, k, "ilp")
    return VolumeBounds(_packing(s, pts, eps), _greedy_cover(covers, n), "greedy-packing")


@dataclass(frozen=True)
class GrowthRow:
    r: float
    lower: int
    upper: int


@dataclass(frozen=True)
class GrowthTable:
    epsilon: float
    rows: Tuple[GrowthRow, ...]
    basepoint: Point
    basepoint_policy: str

    def radii(self) -> List[float]:
        return [row.r for row in self.rows]

    def uppers(self) -> List[int]:
        return [row.upper for row in self.rows]

    def lowers(self) -> List[int]:
        return [row.lower for row in self.rows]


def growth_table(s: ModelSpace, eps: float, radii: Sequence[float], basepoint=None,
                 method: str = "auto", budget: int = DEFAULT_BALL_BUDGET) -> GrowthTable:
    """eps-volume of balls ``B(x, r)`` for one basepoint.

    Only one basepoint is used, so the sup over basepoints is exact for
    vertex-transitive spaces.  Bounds are made monotone in ``r`` (the true
    value is), which can only tighten them.
    """
    if basepoint is None:
        if not s.vertex_transitive:
            raise SpaceError(f"{s.name} is not vertex-transitive; pass a basepoint")
        basepoint = s.origin()
        policy = "single basepoint (vertex-transitive)"
    else:
        policy = "given basepoint"
    radii = sorted(radii)
    raw = [epsilon_volume(s, s.ball(basepoint, r, budget), eps, method, budget) for r in radii]
    lowers = list(itertools.accumulate((v.lower for v in raw), max))
    uppers = list(reversed(list(itertools.accumulate((v.upper for v in reversed(raw)), min))))
    rows = tuple(GrowthRow(r, lo, hi) for r, lo, hi in zip(radii, lowers, uppers))
    return GrowthTable(eps, rows, basepoint, policy)


def fit_exponential_rate(radii: Sequence[float], volumes: Sequence[float]) -> float:
    """Least-squares slope of ``log volume`` against ``r``."""
    slope, _ = np.polyfit(np.asarray(radii, float), np.log(np.asarray(volumes, float)), 1)
    return float(slope)


def fit_power_exponent(sizes: Sequence[float], values: Sequence[float]) -> float:
    """Least-squares slope of ``log value`` against ``log size``."""
    slope, _ = np.polyfit(np.log(np.asarray(sizes, float)), np.log(np.asarray(values, float)), 1)
    return float(slope)


# --- embeddings -------------------------------------------------------------

@dataclass(frozen=True)
class EmbeddingMap:
    name: str
    source: ModelSpace
    target: ModelSpace
    func: Callable[[Point], Point] = field(compare=False)
    lipschitz: Optional[float] = None

    def __call__(self, x) -> Point:
        return self.func(x)

    def image_distance(self, x, y) -> float:
        return self.target.distance(self(x), self(y))


def horosphere_embed(n: int) -> EmbeddingMap:
    """``Z^n`` (Euclidean metric) onto the horosphere ``y = 1`` of ``H^{n+1}``."""
    if n < 1:
        raise SpaceError("horosphere dimension must be positive")
    return EmbeddingMap(
        f"horo{n}", Lattice(n, "l2"), HalfSpaceNet(n),
        lambda x: tuple(float(c) for c in x) + (1.0,), lipschitz=1.0,
    )


def identity_map(s: ModelSpace) -> EmbeddingMap:
    return EmbeddingMap(f"id-{s.name}", s, s, lambda x: x, lipschitz=1.0)


def constant_map(s: ModelSpace, target: ModelSpace, value: Point) -> EmbeddingMap:
    return EmbeddingMap(f"const-{s.name}", s, target, lambda x: value, lipschitz=0.0)


def parse_map(name: str) -> EmbeddingMap:
    if name.startswith("horo"):
        return horosphere_embed(int(name[4:] or 1))
    if name.startswith("id-"):
        return identity_map(parse_space(name[3:]))
    raise SpaceError(f"unknown map {name!r}")


def horocycle_distance(r: float) -> float:
    """``arccosh(1 + r^2/2)``: distance between horocycle points ``r`` apart."""
    return math.acosh(1.0 + r * r / 2.0)


@dataclass(frozen=True)
class ControlFunctions:
    radii: Tuple[float, ...]
    lower: Tuple[float, ...]
    upper: Tuple[float, ...]
    rho_minus: Tuple[float, ...]
    rho_plus: Tuple[float, ...]
    flags: Tuple[str, ...]

    def rho_plus_at(self, r: float) -> float:
        vals = [v for q, v in zip(self.radii, self.rho_plus) if q <= r]
        if not vals:
            raise SpaceError(f"radius {r} below the sampled range")
        return vals[-1] if r <= self.radii[-1] else math.inf

    def rho_minus_inverse(self, t: float) -> float:
        """Largest sampled source distance whose lower envelope is ``<= t``."""
        vals = [q for q, v in zip(self.radii, self.rho_minus) if v <= t]
        if not vals or vals[-1] == self.radii[-1]:
            raise SpaceError(f"lower envelope does not exceed {t} on the sample")
        return vals[-1]


def radial_pairs(s: ModelSpace, radii: Iterable[int]) -> List[Tuple[Point, Point]]:
    """Pairs ``(origin, point at distance r)`` along the first axis / leftmost branch."""
    o = s.origin()
    if isinstance(s, Lattice):
        return [(o, (int(r),) + o[1:]) for r in radii]
    if isinstance(s, RegularTree):
        return [(o, (0,) * int(r)) for r in radii]
    raise SpaceError(f"no radial sampler for {s.name}")


def control_function_profile(f: EmbeddingMap, pairs: Iterable[Tuple[Point, Point]]) -> ControlFunctions:
    """Empirical envelopes of image distance against source distance.

    ``rho_minus(r) = min image distance over pairs at source distance >= r``
    and ``rho_plus(r) = max over source distance <= r``; both monotone.
    Flags: ``coarse`` when the lower envelope grows over the sample (and
    ``not-coarse`` otherwise); ``sublinear-compression`` when
    ``rho_plus(r)/r`` strictly decreases for ``r >= 1``.
    """
    by_r: Dict[float, List[float]] = {}
    for x, y in pairs:
        by_r.setdefault(f.source.distance(x, y), []).append(f.image_distance(x, y))
    radii = tuple(sorted(by_r))
    if not radii:
        raise SpaceError("empty sample")
    lower = tuple(min(by_r[r]) for r in radii)
    upper = tuple(max(by_r[r]) for r in radii)
    rho_minus = tuple(reversed(list(itertools.accumulate(reversed(lower), min))))
    rho_plus = tuple(itertools.accumulate(upper, max))
    flags = []
    mid = len(radii) // 2
    if rho_minus[-1] > 0 and rho_minus[-1] > rho_minus[mid]:
        flags.append("coarse")
    else:
        flags.append("not-coarse")
    slopes = [p / r for r, p in zip(radii, rho_plus) if r >= 1]
    if len(slopes) > 1 and all(b < a for a, b in zip(slopes, slopes[1:])):
        flags.append("sublinear-compression")
    return ControlFunctions(radii, lower, upper, rho_minus, rho_plus, tuple(flags))


def ball_volume_upper(s: ModelSpace, radius: float, eps: float, method: str = "auto") -> int:
    """Upper bound on ``Vol^eps(B(x, radius))`` for a homogeneous space."""
    if radius <= eps:
        return 1
    if isinstance(s, HalfSpaceNet):
        raise SpaceError("covering half-space balls wider than eps is not supported")
    return epsilon_volume(s, s.ball(s.origin(), radius), eps, method).upper


@dataclass(frozen=True)
class CoarseVolumeReport:
    vol_x: VolumeBounds
    vol_y: VolumeBounds
    alpha: float
    beta: float
    preimage_diameter: float
    image_radius: float
    ratio_low: float
    ratio_high: float

    @property
    def within(self) -> bool:
        """``alpha Vol_X <= Vol_Y <= beta Vol_X`` certified from the bounds."""
        return (self.alpha * self.vol_x.upper <= self.vol_y.lower
                and self.vol_y.upper <= self.beta * self.vol_x.lower)


def coarse_volume_report(f: EmbeddingMap, A: Iterable[Point], eps: float,
                         profile: ControlFunctions, method: str = "auto") -> CoarseVolumeReport:
    """Compare ``Vol^eps`` of ``A`` and ``f(A)`` with the constants of the covering argument.

    ``alpha = 1 / Vol_X(B(D))`` with ``D = rho_minus^{-1}(2 eps)`` and
    ``beta = Vol_Y(B(rho_plus(eps)))``; both from the profiled envelopes.
    """
    A = list(A)
    vx = epsilon_volume(f.source, A, eps, method)
    vy = epsilon_volume(f.target, [f(a) for a in A], eps, method)
    diameter = profile.rho_minus_inverse(2 * eps)
    gamma = ball_volume_upper(f.source, diameter, eps, method)
    image_radius = profile.rho_plus_at(eps)
    beta = ball_volume_upper(f.target, image_radius, eps, method)
    return CoarseVolumeReport(
        vx, vy, 1.0 / gamma, float(beta), diameter, image_radius,
        vy.lower / vx.upper if vx.upper else 1.0,
        vy.upper / vx.lower if vx.lower else 1.0,
    )


def neighborhood(s: ModelSpace, A: Iterable[Point], delta: float) -> Set[Point]:
    out: Set[Point] = set()
    for a in A:
        out |= s.ball(a, delta)
    return out


@dataclass(frozen=True)
class NeighborhoodCheck:
    neighborhood_volume: VolumeBounds
    growth: VolumeBounds
    volume: VolumeBounds

    @property
    def holds(self) -> bool:
        return self.neighborhood_volume.upper <= self.growth.lower * self.volume.lower


def neighborhood_volume_check(s: ModelSpace, A: Iterable[Point], delta: float, eps: float,
                              method: str = "auto") -> NeighborhoodCheck:
    """``Vol(N_delta(A)) <= beta^eps(delta + eps) * Vol(A)`` on one set."""
    A = list(A)
    growth = epsilon_volume(s, s.ball(s.origin(), delta + eps), eps, method)
    return NeighborhoodCheck(
        epsilon_volume(s, neighborhood(s, A, delta), eps, method),
        growth,
        epsilon_volume(s, A, eps, method),
    )
