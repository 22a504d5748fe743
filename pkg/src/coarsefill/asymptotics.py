"""Exponent sequences and control-function families for product embeddings.

Everything algebraic is exact (``Fraction``).  Statements of the form
``f << g`` can only be demonstrated on a finite grid; those verdicts carry
the status ``"demonstrated"`` rather than ``"pass"``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ._exact import fmt
from ._report import Check
from ._report import status as _status


class AsymptoticsError(ValueError):
    pass


def _partial_sums(xs: Sequence[Fraction]) -> Tuple[Fraction, ...]:
    out, s = [], Fraction(0)
    for x in xs:
        s += x
        out.append(s)
    return tuple(out)


@dataclass(frozen=True)
class BetaSequence:
    raw: Tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "raw", tuple(Fraction(b) for b in self.raw))
        if not self.raw:
            raise AsymptoticsError("empty sequence")
        if self.raw[0] == 0:
            raise AsymptoticsError("beta_1 must be nonzero")

    @property
    def k(self) -> int:
        return len(self.raw)

    @property
    def normalized(self) -> Tuple[Fraction, ...]:
        return tuple(b / self.raw[0] for b in self.raw)

    @property
    def partial_sums(self) -> Tuple[Fraction, ...]:
        return _partial_sums(self.raw)

    @property
    def unit(self) -> Fraction:
        """Scale of the recursion constant: ``beta_1 - beta_2`` (1 when not positive)."""
        if self.k >= 2 and self.raw[0] - self.raw[1] > 0:
            return self.raw[0] - self.raw[1]
        return Fraction(1)

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "raw": [fmt(b) for b in self.raw],
            "normalized": [fmt(b) for b in self.normalized],
            "partial_sums": [fmt(s) for s in self.partial_sums],
        }


def beta_sequence(k: int) -> BetaSequence:
    """Sequence from ``beta_{n+1} = (n+1) beta_n - S_n - 1`` with the least integer
    ``beta_1`` keeping ``beta_k >= 1``; closed form ``beta_n = beta_1 - sum_{j<n} j!``.
    """
    if not 2 <= k <= 10:
        raise AsymptoticsError(f"k={k} outside 2..10")
    beta1 = 1 + sum(math.factorial(j) for j in range(1, k))
    seq = [Fraction(beta1)]
    s = seq[0]
    for n in range(1, k):
        nxt = (n + 1) * seq[-1] - s - 1
        seq.append(nxt)
        s += nxt
    closed = [beta1 - sum(math.factorial(j) for j in range(1, n)) for n in range(1, k + 1)]
    if seq != closed:
        raise RuntimeError("recursion and closed form disagree")
    return BetaSequence(tuple(seq))


def verify_beta_conditions(seq: BetaSequence) -> List[Check]:
    """Exact per-index checks: positivity, strict monotonicity, recursion, admissibility.

    The recursion constant is measured in units of ``beta_1 - beta_2`` so that the
    checks are invariant under rescaling; admissibility ``S_p/p < beta_{p-1}`` is
    scale-invariant on its own.
    """
    b, S, u = seq.raw, seq.partial_sums, seq.unit
    checks = []
    for i, x in enumerate(b, 1):
        checks.append(Check(f"positive[{i}]", _status(x > 0), {"beta": fmt(x)}))
    for i in range(1, seq.k):
        checks.append(Check(f"decreasing[{i}]", _status(b[i] < b[i - 1]),
                            {"beta_i": fmt(b[i - 1]), "beta_next": fmt(b[i])}))
    for n in range(1, seq.k):
        expected = (n + 1) * b[n - 1] - S[n - 1] - u
        checks.append(Check(f"recursion[{n + 1}]", _status(b[n] == expected),
                            {"beta": fmt(b[n]), "expected": fmt(expected), "unit": fmt(u)}))
    for p in range(2, seq.k + 1):
        lhs = S[p - 1] / p
        checks.append(Check(f"admissible[p={p}]", _status(lhs < b[p - 2]),
                            {"S_p/p": fmt(lhs), "beta_p-1": fmt(b[p - 2])}))
        slack = p * b[p - 2] - S[p - 1]
        checks.append(Check(f"strictness[p={p}]", _status(slack == u),
                            {"p*beta_p-1 - S_p": fmt(slack), "unit": fmt(u)}))
    return checks


@dataclass(frozen=True)
class ExtensionReport:
    differences: Tuple[Fraction, ...]  # beta_n - beta_{n+1}
    strictly_increasing: bool
    factorial_pattern: bool
    remark_terms: Tuple[Fraction, ...]  # (beta_{n-1}-beta_n) + (beta_{n+1}-beta_n)
    remark_holds: bool

    def to_json(self) -> dict:
        return {
            "differences": [fmt(d) for d in self.differences],
            "strictly_increasing": self.strictly_increasing,
            "factorial_pattern": self.factorial_pattern,
            "remark_terms": [fmt(t) for t in self.remark_terms],
            "remark_holds": self.remark_holds,
        }


def extension_impossibility(seq: BetaSequence) -> ExtensionReport:
    """Why the sequence cannot be continued forever, checked on the finite data.

    The gaps ``beta_n - beta_{n+1}`` grow strictly, so the first gap is a positive
    lower bound that any infinite decreasing positive sequence would have to
    violate.
    """
    b = seq.raw
    diffs = tuple(b[n] - b[n + 1] for n in range(seq.k - 1))
    increasing = all(x < y for x, y in zip(diffs, diffs[1:]))
    # beta_{n+1} - beta_n = (beta_2 - beta_1) n!, with 0-based b[n] = beta_{n+1}
    pattern = all(b[n] - b[n - 1] == (b[1] - b[0]) * math.factorial(n) for n in range(1, seq.k))
    # 0-based n here is the 1-based n+1 of the inequality
    terms = tuple((b[n - 1] - b[n]) + (b[n + 1] - b[n]) for n in range(1, seq.k - 1))
    return ExtensionReport(diffs, increasing, pattern, terms, all(t < 0 for t in terms))


# --- harmonic exponents -----------------------------------------------------

def harmonic(n: int) -> Fraction:
    return sum((Fraction(1, i) for i in range(1, n + 1)), Fraction(0))


@dataclass(frozen=True)
class HarmonicLedger:
    k: int
    H_k: Fraction
    S_k: Fraction
    S_prev: Fraction
    gap: Fraction  # S_k - k/(k-1) S_{k-1}
    expected: Fraction  # (H_k - 1)/(k - 1)

    @property
    def identity_holds(self) -> bool:
        return self.gap == self.expected

    @property
    def below_one(self) -> bool:
        return self.gap < 1

    def to_json(self) -> dict:
        return {"k": self.k, "H_k": fmt(self.H_k), "S_k": fmt(self.S_k), "gap": fmt(self.gap),
                "expected": fmt(self.expected), "identity_holds": self.identity_holds,
                "below_one": self.below_one}


def harmonic_alpha_check(k: int) -> HarmonicLedger:
    """Exponent gap for ``alpha_i = 1 - 1/i`` computed from the partial sums directly."""
    if k < 2:
        raise AsymptoticsError("k must be at least 2")
    alphas = [1 - Fraction(1, i) for i in range(1, k + 1)]
    S = _partial_sums(alphas)
    H = harmonic(k)
    if S[-1] != k - H:
        raise RuntimeError("S_k != k - H_k")
    gap = S[k - 1] - Fraction(k, k - 1) * S[k - 2]
    return HarmonicLedger(k, H, S[k - 1], S[k - 2], gap, (H - 1) / (k - 1))


# --- control-function families ----------------------------------------------

def base_a(d: float) -> float:
    """Default slowly decreasing base ``a(d) = max(1, d)^(-1/2)``."""
    return max(1.0, float(d)) ** -0.5


def base_a_exact_at_square(m: int) -> Fraction:
    """``a(m^2) = 1/m`` exactly."""
    if m < 1:
        raise AsymptoticsError("m must be positive")
    return Fraction(1, m)


def base_a_dominates_inverse(max_m: int = 1000) -> bool:
    """Exact check of ``a(d) >= 1/d`` at the perfect squares ``d = m^2``, ``m <= max_m``."""
    return all(base_a_exact_at_square(m) >= Fraction(1, m * m) for m in range(1, max_m + 1))


@dataclass(frozen=True)
class PhiFamily:
    """``phi_i(d) = a(d)^(1 - gamma_i) * d`` for a decreasing sequence ``gamma`` with
    ``gamma_1 = 1``; ``gamma_i = 1/i`` gives the harmonic family ``a^{alpha_i} d``.
    """

    kind: str
    gammas: Tuple[Fraction, ...]
    a_kind: str = "max(1,d)^(-1/2)"

    @classmethod
    def harmonic(cls, k: int) -> "PhiFamily":
        return cls("alpha", tuple(Fraction(1, i) for i in range(1, k + 1)))

    @classmethod
    def from_beta(cls, seq: BetaSequence) -> "PhiFamily":
        return cls("beta", seq.normalized)

    @property
    def k(self) -> int:
        return len(self.gammas)

    def exponent(self, i: int) -> Fraction:
        """Power of ``a`` in ``phi_i`` (1-based)."""
        return 1 - self.gammas[i - 1]

    def log_phi(self, i: int, d: float) -> float:
        return float(self.exponent(i)) * math.log(base_a(d)) + math.log(d)

    def phi(self, i: int, d: float) -> float:
        return math.exp(self.log_phi(i, d))

    def log_product_ratio(self, p: int, d: float) -> float:
        """log of ``(prod_{i<=p, i!=p-1} phi_i)^{p/(p-1)} / prod_{i<=p} phi_i``."""
        logs = [self.log_phi(i, d) for i in range(1, p + 1)]
        return p / (p - 1) * (sum(logs) - logs[p - 2]) - sum(logs)

    def product_condition_exact(self, p: int) -> bool:
        """``S_p/p < gamma_{p-1}``, the exponent form of the product condition."""
        return sum(self.gammas[:p]) / p < self.gammas[p - 2]


def parse_grid(spec: str) -> List[float]:
    """``log:LO:HI:N`` (log-spaced) or ``lin:LO:HI:N`` or a comma list."""
    parts = spec.split(":")
    if parts[0] in ("log", "lin") and len(parts) == 4:
        lo, hi, n = float(parts[1]), float(parts[2]), int(parts[3])
        if not (0 < lo < hi) or n < 2:
            raise AsymptoticsError(f"bad grid {spec!r}")
        pts = np.geomspace(lo, hi, n) if parts[0] == "log" else np.linspace(lo, hi, n)
        return [float(x) for x in pts]
    try:
        pts = [float(x) for x in spec.split(",")]
    except ValueError:
        raise AsymptoticsError(f"bad grid {spec!r}") from None
    if any(x <= 0 for x in pts) or any(x >= y for x, y in zip(pts, pts[1:])):
        raise AsymptoticsError("grid must be positive and increasing")
    return pts


def _tail_decreasing(values: Sequence[float]) -> bool:
    tail = values[len(values) // 2:]
    return all(y < x for x, y in zip(tail, tail[1:]))


@dataclass(frozen=True)
class PhiReport:
    family: PhiFamily
    grid: Tuple[float, ...]
    phi: Dict[int, Tuple[float, ...]]
    ratios: Dict[int, Tuple[float, ...]]  # i -> phi_{i+1}/phi_i
    product_ratios: Dict[int, Tuple[float, ...]]  # p -> product-condition ratio
    checks: Tuple[Check, ...]

    def to_json(self) -> dict:
        return {
            "kind": self.family.kind,
            "a": self.family.a_kind,
            "gammas": [str(g) for g in self.family.gammas],
            "grid": list(self.grid),
            "phi": {str(i): list(v) for i, v in self.phi.items()},
            "ratios": {str(i): list(v) for i, v in self.ratios.items()},
            "product_ratios": {str(p): list(v) for p, v in self.product_ratios.items()},
            "checks": [c.to_json() for c in self.checks],
        }


def phi_family_report(fam: PhiFamily, k: Optional[int] = None, grid: Sequence[float] = ()) -> PhiReport:
    """Tabulate ``phi_i`` and the monitored ratios; verdicts are tail-monotonicity
    demonstrations on the grid, never proofs.
    """
    k = fam.k if k is None else k
    if not 1 <= k <= fam.k:
        raise AsymptoticsError(f"k={k} outside 1..{fam.k}")
    grid = tuple(float(d) for d in (grid or parse_grid("log:1e2:1e6:9")))
    if any(d <= 0 for d in grid) or any(x >= y for x, y in zip(grid, grid[1:])):
        raise AsymptoticsError("grid must be positive and increasing")
    phi = {i: tuple(fam.phi(i, d) for d in grid) for i in range(1, k + 1)}
    ratios = {i: tuple(math.exp(fam.log_phi(i + 1, d) - fam.log_phi(i, d)) for d in grid)
              for i in range(1, k)}
    prods = {p: tuple(math.exp(fam.log_product_ratio(p, d)) for d in grid) for p in range(2, k + 1)}

    def verdict(values):
        return "demonstrated" if _tail_decreasing(values) else "fail"

    checks = [Check("phi_1 = d", _status(fam.exponent(1) == 0), {"exponent": str(fam.exponent(1))})]
    checks += [Check(f"phi_{i} unbounded", verdict([-v for v in phi[i]]), {"last": phi[i][-1]})
               for i in range(2, k + 1)]
    checks += [Check(f"phi_{i + 1}/phi_{i} -> 0", verdict(r), {"tail": list(r[len(r) // 2:])})
               for i, r in ratios.items()]
    checks += [Check(f"product condition p={p}", verdict(r),
                     {"tail": list(r[len(r) // 2:]), "exponent_form": fam.product_condition_exact(p)})
               for p, r in prods.items()]
    return PhiReport(fam, grid, phi, ratios, prods, tuple(checks))
