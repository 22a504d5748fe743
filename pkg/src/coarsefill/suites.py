"""Seeded verification suites, one per module, assembled into a report.

Each suite is a function ``(ctx) -> list[Check]``.  Randomized checks draw
from ``ctx.rng`` only, and witnesses hold no timings, so a fixed seed gives
byte-identical reports.
"""

from __future__ import annotations

import itertools
import math
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence

from . import _exact as ex
from . import asymptotics as asy
from . import chains as ch
from . import filling as fl
from . import spaces as sp
from . import weyl as wy
from ._report import Check, status

SUITES = ("chains", "weyl", "spaces", "filling", "asym")


class Aborted(RuntimeError):
    pass


@dataclass
class Context:
    seed: int = 1
    trials: int = 200
    n_max: int = 4
    p_max: int = 3
    time_budget: Optional[float] = None
    rng: random.Random = field(init=False)
    _deadline: Optional[float] = field(init=False, default=None)

    def __post_init__(self):
        self.rng = random.Random(self.seed)
        if self.time_budget is not None:
            self._deadline = time.monotonic() + self.time_budget

    def tick(self) -> None:
        if self._deadline is not None and time.monotonic() > self._deadline:
            raise Aborted("time budget exceeded")


class Tally:
    """Counts instances of one property and keeps the first counterexample."""

    def __init__(self, name: str):
        self.name = name
        self.count = 0
        self.failures = 0
        self.counterexample: Optional[dict] = None
        self.extra: Dict = {}

    def record(self, ok: bool, witness: Callable[[], dict]) -> None:
        self.count += 1
        if not ok:
            self.failures += 1
            if self.counterexample is None:
                self.counterexample = witness()

    def check(self) -> Check:
        w = {"instances": self.count, "failures": self.failures, **self.extra}
        if self.counterexample is not None:
            w["counterexample"] = self.counterexample
        return Check(self.name, status(self.failures == 0 and self.count > 0), w)


def _rand_q(rng: random.Random, span: int = 5, den: int = 4) -> Fraction:
    return Fraction(rng.randint(-span, span), rng.randint(1, den))


def _rand_vec(rng: random.Random, dim: int) -> ex.Vector:
    return tuple(_rand_q(rng) for _ in range(dim))


def _vjson(v) -> list:
    return [ex.fmt(a) for a in v]


# --- chains -----------------------------------------------------------------

def chains_suite(ctx: Context) -> List[Check]:
    rng = ctx.rng
    dd = Tally("boundary of boundary vanishes")
    closed = Tally("parallelogram is a cycle")
    reflect = Tally("reflection identity")
    central = Tally("central reflection identity")
    faces = Tally("parallelogram face sum")
    dec = Tally("parallelogram decomposition")
    dec_cycle = Tally("decomposition residual is a cycle")
    dec_count = Tally("decomposition uses 2n(p+1) parallelepipeds")
    staircase = Tally("recursive and staircase constructions agree")
    for _ in range(ctx.trials):
        ctx.tick()
        n = rng.randint(1, ctx.n_max)
        p = rng.randint(1, ctx.p_max)
        dim = n + 1
        x = _rand_vec(rng, dim)
        u = [_rand_vec(rng, dim) for _ in range(n + 1)]
        wit = lambda: {"n": n, "x": _vjson(x), "u": [_vjson(v) for v in u]}  # noqa: E731
        cn = ch.parallelepiped(x, u[:n])
        dd.record(ch.boundary(ch.boundary(cn)).is_zero() if n >= 2 else True, wit)
        closed.record(ch.boundary(ch.parallelogram(x, u[:n])).is_zero() if n >= 2 else True, wit)
        k = rng.randint(1, n)
        reflect.record(ch.reflect_identity_check(x, u[:n], k), lambda: {**wit(), "k": k})
        central.record(ch.central_reflection_check(x, u[:n]), wit)
        faces.record(ch.parallelogram_face_sum(x, u[:n]).exact, wit)
        expected = _staircase_chain(x, u[:n])
        staircase.record(cn == expected, wit)
        parts = [_rand_vec(rng, dim) for _ in range(p - 1)]
        parts.append(ex.sub(u[n], ex.vsum(parts, dim)))
        d = ch.decompose_parallelogram(x, u, parts)
        dwit = lambda: {**wit(), "parts": [_vjson(a) for a in parts]}  # noqa: E731
        dec.record(d.terms_match, dwit)
        dec_cycle.record(d.residual_is_cycle(), dwit)
        dec_count.record(len(d.residual_terms) == 2 * n * (p + 1), dwit)
    checks = [t.check() for t in (dd, closed, reflect, central, faces, staircase, dec, dec_cycle, dec_count)]

    count = Tally("parallelepiped has n! simplices")
    mass = Tally("parallelepiped mass equals sqrt det Gram")
    worst = 0.0
    for _ in range(max(1, ctx.trials // 4)):
        ctx.tick()
        n = rng.randint(1, ctx.n_max)
        u = [_rand_vec(rng, n) for _ in range(n)]
        c = ch.parallelepiped(ex.zero(n), u)
        vol = ch.parallelepiped_volume(u)
        m = ch.chain_mass(c).total
        wit = lambda: {"u": [_vjson(v) for v in u], "mass": m, "volume": vol}  # noqa: E731
        degenerate = vol == 0
        count.record(degenerate or len(c) == math.factorial(n), wit)
        rel = abs(m - vol) / vol if vol else abs(m)
        worst = max(worst, rel)
        mass.record(rel <= 1e-9, wit)
    mass.extra["max_relative_error"] = worst
    return checks + [count.check(), mass.check()]


def _staircase_chain(x, u) -> ch.Chain:
    return ch.Chain(len(u), len(x), [(s, c) for c, s in ch.permutation_paths(x, u)])


# --- weyl -------------------------------------------------------------------

WEYL_SYSTEMS = (("A", 2), ("A", 3), ("A", 4), ("B", 2), ("B", 3), ("B", 4), ("C", 3), ("D", 4), ("G", 2))


def _random_root_vector(rng: random.Random, rs: wy.RootSystem) -> ex.Vector:
    v = ex.zero(rs.ambient_dim)
    for h in rs.simple_basis:
        v = ex.add(v, ex.scale(_rand_q(rng), h))
    return v


def weyl_suite(ctx: Context) -> List[Check]:
    rng = ctx.rng
    checks = []
    for t, r in WEYL_SYSTEMS:
        ctx.tick()
        rs = wy.root_system(t, r)
        sg = wy.sector_generators(rs)
        label = f"{t}{r}"
        checks.append(Check(f"{label}: simple basis is obtuse", status(rs.is_obtuse()),
                            {"gram": [[ex.fmt(q) for q in row] for row in rs.gram()]}))
        checks.append(Check(f"{label}: sector generators are acute", status(sg.is_acute()),
                            {"gram": [[ex.fmt(q) for q in row] for row in sg.gram()]}))
        proj = Tally(f"{label}: dominance projection is dominant")
        trip = Tally(f"{label}: sector coordinate round trip")
        cone = Tally(f"{label}: cone norm inequality")
        subsets = [J for size in range(1, min(rs.rank, 4) + 1) for J in itertools.combinations(range(rs.rank), size)]
        for _ in range(ctx.trials // 2):
            ctx.tick()
            v = _random_root_vector(rng, rs)
            w, _word = wy.dominance_project(v, rs)
            proj.record(wy.is_dominant(w, rs), lambda: {"v": _vjson(v)})
            deltas = wy.sector_coordinates(w, sg).coefficients
            trip.record(sg.combine(deltas) == w and all(d >= 0 for d in deltas), lambda: {"w": _vjson(w)})
            for J in subsets:
                cone.record(wy.cone_norm_inequality(w, sg, J), lambda: {"w": _vjson(w), "J": list(J)})
        pig = Tally(f"{label}: pigeonhole leg carries 1/p of the length")
        euclid = lambda a, b: math.sqrt(float(ex.norm2(ex.sub(a, b))))  # noqa: E731
        for _ in range(10):
            a, b = _random_root_vector(rng, rs), _random_root_vector(rng, rs)
            if a == b:
                continue
            res = wy.segment_pigeonhole(a, b, sg, euclid)
            pig.record(res.ratio >= 1 / rs.rank - 1e-12 and sum(res.image_lengths) >= euclid(a, b) - 1e-9,
                       lambda: {"a": _vjson(a), "b": _vjson(b), "ratio": res.ratio})
        checks += [proj.check(), trip.check(), cone.check(), pig.check()]
    return checks


# --- spaces -----------------------------------------------------------------

def horocycle_checks(r_max: int = 10_000) -> List[Check]:
    h = sp.HalfPlaneNet()
    worst = 0.0
    bad = None
    for r in range(1, r_max + 1):
        d = h.distance((0.0, 1.0), (float(r), 1.0))
        rel = abs(d - sp.horocycle_distance(r)) / sp.horocycle_distance(r)
        if rel > worst:
            worst = rel
        if rel > 1e-12 and bad is None:
            bad = {"r": r, "distance": d}
    far = h.distance((0.0, 1.0), (1e6, 1.0))
    gap = abs(far - 2 * math.log(1e6))
    return [
        Check("horocycle distance matches arccosh(1 + r^2/2)", status(bad is None),
              {"r_max": r_max, "max_relative_error": worst, **({"counterexample": bad} if bad else {})}),
        Check("horocycle distance ~ 2 ln r at r = 1e6", status(gap < 1e-5),
              {"distance": far, "two_ln_r": 2 * math.log(1e6), "gap": gap}),
    ]


def growth_checks() -> List[Check]:
    tree = sp.RegularTree(3)
    radii = list(range(0, 13))
    table = sp.growth_table(tree, 0.5, radii)
    cards = table.uppers()
    exact = all(c == 3 * 2 ** r - 2 for r, c in zip(radii, cards)) and table.lowers() == cards
    rate = sp.fit_exponential_rate(radii[6:], cards[6:])
    z = sp.Lattice(1)
    cover = {r: sp.epsilon_volume(z, z.ball((0,), r), 1.0).upper for r in range(0, 61)}
    cover_ok = all(v == -(-(2 * r + 1) // 3) for r, v in cover.items())
    return [
        Check("T3 ball cardinality is 3*2^r - 2", status(exact), {"cardinalities": cards}),
        Check("T3 fitted exponential rate within 5% of ln 2", status(abs(rate - math.log(2)) <= 0.05 * math.log(2)),
              {"rate": rate, "ln2": math.log(2), "radii": [6, 12]}),
        Check("Z interval cover is ceil((2r+1)/3) at eps = 1", status(cover_ok), {"r_max": 60}),
    ]


def coarse_volume_checks(ctx: Context, eps: float = 2.0, length_max: int = 1000, segments: int = 20) -> List[Check]:
    f = sp.horosphere_embed(1)
    profile = sp.control_function_profile(f, sp.radial_pairs(f.source, range(1, 65)))
    tally = Tally("horospherical map keeps eps-volume ratios within [alpha, beta]")
    lengths = sorted({length_max} | {ctx.rng.randint(1, length_max) for _ in range(segments - 1)})
    lo, hi = math.inf, 0.0
    for L in lengths:
        ctx.tick()
        start = ctx.rng.randint(-50, 50)
        A = [(start + i,) for i in range(L + 1)]
        rep = sp.coarse_volume_report(f, A, eps, profile)
        lo, hi = min(lo, rep.ratio_low), max(hi, rep.ratio_high)
        tally.record(rep.within, lambda: {"start": start, "length": L, "ratio": [rep.ratio_low, rep.ratio_high],
                                          "alpha": rep.alpha, "beta": rep.beta})
    tally.extra.update({"alpha": rep.alpha, "beta": rep.beta, "observed": [lo, hi], "eps": eps,
                        "flags": list(profile.flags)})

    z2 = sp.Lattice(2)
    nb = Tally("neighborhood volume bound on random subsets of Z^2")
    for _ in range(50):
        ctx.tick()
        size = ctx.rng.randint(1, 6)
        A = sorted({(ctx.rng.randint(-6, 6), ctx.rng.randint(-6, 6)) for _ in range(size)})
        delta = ctx.rng.randint(1, 2)
        res = sp.neighborhood_volume_check(z2, A, delta, 1.0, method="ilp")
        nb.record(res.holds, lambda: {"A": [list(a) for a in A], "delta": delta,
                                      "neighborhood": res.neighborhood_volume.upper,
                                      "growth": res.growth.lower, "volume": res.volume.lower})
    return [tally.check(), nb.check()]


def spaces_suite(ctx: Context) -> List[Check]:
    ctx.tick()
    checks = horocycle_checks()
    ctx.tick()
    checks += growth_checks()
    checks += coarse_volume_checks(ctx)
    return checks


# --- filling ----------------------------------------------------------------

def _exhaustive_transport(s: sp.ModelSpace, z: Dict) -> int:
    sources = [p for p, w in z.items() for _ in range(-w) if w < 0]
    sinks = [q for q, w in z.items() for _ in range(w) if w > 0]
    return min((sum(s.distance(p, q) for p, q in zip(sources, perm)) for perm in itertools.permutations(sinks)),
               default=0)


def _random_tree_vertex(rng: random.Random, depth: int) -> tuple:
    d = rng.randint(0, depth)
    if d == 0:
        return ()
    return (rng.randint(0, 2),) + tuple(rng.randint(0, 1) for _ in range(d - 1))


def random_cubical_chain(rng: random.Random, box: int = 20, degree: int = 2, cells: int = 60) -> fl.CubicalChain:
    terms = []
    for _ in range(cells):
        anchor = (rng.randint(0, box - 1), rng.randint(0, box - 1))
        axes = tuple(sorted(rng.sample(range(2), degree)))
        terms.append(((anchor, axes), rng.choice([-3, -2, -1, 1, 2, 3])))
    return fl.CubicalChain(degree, 2, terms)


def filling_suite(ctx: Context) -> List[Check]:
    rng = ctx.rng
    tree, z2 = sp.RegularTree(3), sp.Lattice(2)
    pair = Tally("0-cycle filling mass equals distance")
    for i in range(100):
        ctx.tick()
        if i % 2 == 0:
            s, x, y = tree, _random_tree_vertex(rng, 8), _random_tree_vertex(rng, 8)
        else:
            s = z2
            x = (rng.randint(-20, 20), rng.randint(-20, 20))
            y = (rng.randint(-20, 20), rng.randint(-20, 20))
        z = {} if x == y else {y: 1, x: -1}
        res = fl.fill_zero_cycle(s, z)
        pair.record(res.mass == s.distance(x, y), lambda: {"space": s.name, "x": list(x), "y": list(y),
                                                            "mass": res.mass})
    match = Tally("transport filling equals exhaustive matching")
    for _ in range(30):
        ctx.tick()
        k = rng.randint(1, 3)
        pts = list({_random_tree_vertex(rng, 5) for _ in range(2 * k)})
        if len(pts) % 2:
            pts.pop()
        z = {p: (1 if i % 2 else -1) for i, p in enumerate(pts)}
        res = fl.fill_zero_cycle(tree, z)
        best = _exhaustive_transport(tree, z)
        match.record(res.mass == best, lambda: {"z": [[list(p), w] for p, w in z.items()], "mass": res.mass,
                                               "exhaustive": best})
    rect = Tally("rectangle boundary filling mass is a*b")
    for a in range(1, 31):
        ctx.tick()
        for b in range(1, 31):
            res = fl.fill_one_cycle_plane(fl.rectangle_boundary(a, b))
            rect.record(res.mass == a * b, lambda: {"a": a, "b": b, "mass": res.mass})
    dd = Tally("cubical boundary of boundary vanishes")
    coarea = Tally("co-area inequality for random 2-chains")
    for _ in range(100):
        ctx.tick()
        c = random_cubical_chain(rng)
        dd.record(fl.cubical_boundary(fl.cubical_boundary(c)).is_zero(), lambda: c.to_json())
        for axis in (0, 1):
            rep = fl.coarea_check(c, axis)
            coarea.record(rep.holds, lambda: {"chain": c.to_json(), "axis": axis,
                                              "slice_mass": rep.total_slice_mass, "mass": rep.mass})
    ctx.tick()
    plane = fl.filling_scaling_experiment("z2-rect", range(10, 101, 10))
    trees = fl.filling_scaling_experiment("tree-endpoints", range(10, 101, 10))
    return [
        pair.check(), match.check(), rect.check(), dd.check(), coarea.check(),
        Check("Z^2 filling exponent is 2", status(abs(plane.exponent - 2) <= 0.05),
              {"exponent": plane.exponent, "ell_range": [plane.table[0][0], plane.table[-1][0]]}),
        Check("tree 0-cycle filling exponent is 1", status(abs(trees.exponent - 1) <= 0.05),
              {"exponent": trees.exponent, "ell_range": [trees.table[0][0], trees.table[-1][0]]}),
    ]


# --- asymptotics ------------------------------------------------------------

def asym_suite(ctx: Context) -> List[Check]:
    ctx.tick()
    b4 = asy.beta_sequence(4)
    checks = [Check("beta_sequence(4) is (10, 9, 7, 1)", status(b4.raw == (10, 9, 7, 1)),
                    {"raw": [ex.fmt(b) for b in b4.raw]})]
    cond = Tally("beta sequences: positivity, monotonicity, recursion, admissibility")
    ext = Tally("beta gaps follow (beta_2 - beta_1) n! and increase strictly")
    for k in range(2, 11):
        seq = asy.beta_sequence(k)
        for variant in (seq, asy.BetaSequence(seq.normalized)):
            bad = [c.name for c in asy.verify_beta_conditions(variant) if not c.ok]
            cond.record(not bad, lambda: {"k": k, "failed": bad})
        rep = asy.extension_impossibility(seq)
        ext.record(rep.factorial_pattern and rep.strictly_increasing and rep.remark_holds,
                   lambda: {"k": k, **rep.to_json()})
    harm = Tally("harmonic exponent identity (H_k - 1)/(k - 1) < 1")
    for k in range(2, 11):
        led = asy.harmonic_alpha_check(k)
        harm.record(led.identity_holds and led.below_one, lambda: led.to_json())
    checks += [cond.check(), ext.check(), harm.check(),
               Check("a(d) >= 1/d at perfect squares", status(asy.base_a_dominates_inverse(1000)), {"m_max": 1000})]

    grid = asy.parse_grid("log:1e2:1e6:9")
    beta_fam = asy.PhiFamily.from_beta(asy.beta_sequence(4))
    rep = asy.phi_family_report(beta_fam, 4, grid)
    checks += [Check(f"beta family: {c.name}", c.status, c.witness) for c in rep.checks]
    alpha = asy.phi_family_report(asy.PhiFamily.harmonic(3), 3, grid)
    checks += [Check(f"alpha family: {c.name}", c.status, c.witness)
               for c in alpha.checks if not c.name.startswith("product condition p=3")]
    # the harmonic family is known to break the product condition at p = 3
    p3 = next(c for c in alpha.checks if c.name == "product condition p=3")
    checks.append(Check("alpha family violates the product condition at p=3",
                        status(p3.status == "fail" and not p3.witness["exponent_form"]), p3.witness))
    return checks


SUITE_FUNCS: Dict[str, Callable[[Context], List[Check]]] = {
    "chains": chains_suite,
    "weyl": weyl_suite,
    "spaces": spaces_suite,
    "filling": filling_suite,
    "asym": asym_suite,
}


def run_suites(names: Sequence[str], ctx: Context) -> List[tuple]:
    """Run suites in fixed order; returns ``(suite, Check)`` pairs.

    On budget exhaustion the checks gathered so far are kept and a final
    ``aborted`` record is appended.
    """
    out: List[tuple] = []
    for name in names:
        if name not in SUITE_FUNCS:
            raise KeyError(name)
        try:
            out += [(name, c) for c in SUITE_FUNCS[name](ctx)]
        except Aborted as exc:
            out.append((name, Check("time budget", "aborted", {"reason": str(exc)})))
            break
    return out
