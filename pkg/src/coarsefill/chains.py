"""Signed simplicial chains with rational vertices.

Chains are formal integer combinations of *ordered* simplices.  Two kinds of
equality are available:

* ``a == b`` compares canonical term maps, so ``[x, y]`` and ``-[y, x]`` are
  different chains (no permutation identification).
* :func:`same_current` decides whether two chains define the same polyhedral
  current, i.e. the same integration functional on smooth forms.  This is the
  equality under which the parallelepiped identities hold: reflecting one edge
  vector of ``C^n`` re-triangulates the parallelepiped along another diagonal,
  so those identities are never true term by term for ``n >= 2``.

Deciding current equality is done exactly.  Group a k-chain by the affine
k-plane carrying each nondegenerate simplex; the chain vanishes iff every
group does, and a compactly supported polyhedral k-chain inside a k-plane
vanishes iff its boundary does (constancy theorem).  Recursing on the
boundary reaches 0-chains, where vanishing is a coefficient check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import Dict, Iterable, Iterator, List, Mapping, Sequence, Tuple

from . import _exact as ex
from ._exact import Vector

Simplex = Tuple[Vector, ...]


class ChainError(ValueError):
    """Raised for malformed chains or operations outside their domain."""


class Point(tuple):
    """Exact coordinate tuple that caches its hash.

    ``Fraction.__hash__`` costs a modular exponentiation per call, and chain
    algebra hashes the same vertices over and over.
    """

    def __hash__(self):
        try:
            return self._h
        except AttributeError:
            self._h = h = tuple.__hash__(self)
            return h


def point(v) -> Point:
    if isinstance(v, Point):
        return v
    if isinstance(v, tuple) and all(isinstance(a, Fraction) for a in v):
        return Point(v)
    return Point(ex.vec(v))


def _simplex(vertices: Iterable) -> Simplex:
    return tuple(point(v) for v in vertices)


class Chain:
    """Integer-weighted formal sum of ordered simplices of a common degree."""

    __slots__ = ("degree", "dim", "_terms", "_hash")

    def __init__(self, degree: int, dim: int, terms: Iterable[Tuple[Simplex, int]] = ()):
        merged: Dict[Simplex, int] = {}
        for simplex, coeff in terms:
            if len(simplex) != degree + 1:
                raise ChainError(f"simplex with {len(simplex)} vertices in a degree-{degree} chain")
            for v in simplex:
                if len(v) != dim:
                    raise ChainError(f"vertex of dimension {len(v)} in a chain of dimension {dim}")
            if not all(type(v) is Point for v in simplex):
                simplex = _simplex(simplex)
            merged[simplex] = merged.get(simplex, 0) + int(coeff)
        self.degree = degree
        self.dim = dim
        self._terms = {s: c for s, c in merged.items() if c != 0}
        self._hash = None

    @classmethod
    def simplex(cls, *vertices, coeff: int = 1) -> "Chain":
        s = _simplex(vertices)
        if not s:
            raise ChainError("a simplex needs at least one vertex")
        return cls(len(s) - 1, len(s[0]), [(s, coeff)])

    @classmethod
    def zero(cls, degree: int, dim: int) -> "Chain":
        return cls(degree, dim)

    @property
    def terms(self) -> Mapping[Simplex, int]:
        return dict(self._terms)

    def items(self) -> Iterator[Tuple[Simplex, int]]:
        return iter(self._terms.items())

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def _compatible(self, other: "Chain") -> None:
        if not isinstance(other, Chain):
            raise TypeError(f"cannot combine Chain with {type(other).__name__}")
        if (self.degree, self.dim) != (other.degree, other.dim):
            raise ChainError(
                f"mixed chains: degree/dim {self.degree}/{self.dim} vs {other.degree}/{other.dim}"
            )

    def __add__(self, other: "Chain") -> "Chain":
        self._compatible(other)
        return Chain(self.degree, self.dim, list(self.items()) + list(other.items()))

    def __neg__(self) -> "Chain":
        return Chain(self.degree, self.dim, [(s, -c) for s, c in self.items()])

    def __sub__(self, other: "Chain") -> "Chain":
        return self + (-other)

    def __mul__(self, k: int) -> "Chain":
        return Chain(self.degree, self.dim, [(s, k * c) for s, c in self.items()])

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, Chain):
            return NotImplemented
        return (self.degree, self.dim) == (other.degree, other.dim) and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.degree, self.dim, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"Chain(degree={self.degree}, dim={self.dim}, terms={len(self)})"

    def sorted_items(self) -> List[Tuple[Simplex, int]]:
        return sorted(self._terms.items(), key=lambda t: t[0])

    def to_json(self) -> dict:
        """Canonical JSON form: terms sorted lexicographically by vertex tuple."""
        return {
            "degree": self.degree,
            "dim": self.dim,
            "terms": [
                {"coefficient": c, "vertices": [[ex.fmt(a) for a in v] for v in s]}
                for s, c in self.sorted_items()
            ],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "Chain":
        terms = [
            (tuple(tuple(Fraction(a) for a in v) for v in t["vertices"]), int(t["coefficient"]))
            for t in data["terms"]
        ]
        return cls(int(data["degree"]), int(data["dim"]), terms)


def canonicalize(terms: Iterable[Tuple[int, Sequence]]) -> Chain:
    """Build a canonical chain from raw ``(coefficient, vertices)`` pairs.

    Terms with identical ordered vertex tuples are merged and zero
    coefficients dropped.  Odd permutations are *not* identified.
    """
    raw = [(c, _simplex(vs)) for c, vs in terms]
    if not raw:
        raise ChainError("cannot infer degree and dimension of an empty term list")
    degrees = {len(s) - 1 for _, s in raw}
    dims = {len(v) for _, s in raw for v in s}
    if len(degrees) != 1:
        raise ChainError(f"mixed degrees {sorted(degrees)}")
    if len(dims) != 1:
        raise ChainError(f"mixed dimensions {sorted(dims)}")
    return Chain(degrees.pop(), dims.pop(), [(s, c) for c, s in raw])


def _faces(simplex: Simplex) -> Iterator[Tuple[Simplex, int]]:
    # sign (-1)^(k+1) for 1-based k: +1 on the face omitting the first vertex
    for k in range(len(simplex)):
        yield simplex[:k] + simplex[k + 1:], (1 if k % 2 == 0 else -1)


def boundary(c: Chain) -> Chain:
    if c.degree < 1:
        raise ChainError("degree too low: the boundary of a 0-chain is not modeled")
    terms = []
    for s, coeff in c.items():
        for face, sign in _faces(s):
            terms.append((face, sign * coeff))
    return Chain(c.degree - 1, c.dim, terms)


def cone(x: Vector, c: Chain) -> Chain:
    """``[x, c]``: prepend ``x`` to every simplex of ``c``."""
    if len(x) != c.dim:
        raise ChainError("cone point has the wrong dimension")
    return Chain(c.degree + 1, c.dim, [((x,) + s, k) for s, k in c.items()])


def _check_vectors(x: Vector, u: Sequence[Vector]) -> None:
    for v in u:
        if len(v) != len(x):
            raise ChainError(f"dimension mismatch: base point has {len(x)} coordinates, vector {len(v)}")


def parallelepiped(x: Vector, u: Sequence[Vector]) -> Chain:
    """``C^n(x; u_1..u_n)`` as the alternating sum of cones over opposite faces."""
    x = point(x)
    u = [ex.vec(v) for v in u]
    _check_vectors(x, u)
    return _parallelepiped(x, tuple(u))


def _parallelepiped(x: Vector, u: Tuple[Vector, ...]) -> Chain:
    n = len(u)
    if n == 0:
        return Chain(0, len(x), [((x,), 1)])
    terms: List[Tuple[Simplex, int]] = []
    for k in range(n):
        sign = 1 if k % 2 == 0 else -1
        face = _parallelepiped(Point(ex.add(x, u[k])), u[:k] + u[k + 1:])
        terms.extend(((x,) + s, sign * c) for s, c in face.items())
    return Chain(n, len(x), terms)


def parallelogram(x: Vector, u: Sequence[Vector]) -> Chain:
    """``P^{n-1}(x; u) = boundary of C^n(x; u)``; always a cycle."""
    if len(u) < 1:
        raise ChainError("a parallelogram needs at least one vector")
    return boundary(parallelepiped(x, u))


# --- current equality -------------------------------------------------------

def _perm_sign(seq: Sequence) -> int:
    inversions = 0
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                inversions += 1
    return -1 if inversions % 2 else 1


_PLANE_CACHE: Dict[Simplex, object] = {}


def _plane_key(simplex: Simplex):
    """Canonical key of the affine span, or ``None`` for a degenerate simplex."""
    try:
        return _PLANE_CACHE[simplex]
    except KeyError:
        pass
    if len(_PLANE_CACHE) > 200_000:
        _PLANE_CACHE.clear()
    key = _PLANE_CACHE[simplex] = _compute_plane_key(simplex)
    return key


def _compute_plane_key(simplex: Simplex):
    v0 = simplex[0]
    k = len(simplex) - 1
    if k == 0:
        return v0
    rows, pivots = ex.rref([ex.sub(v, v0) for v in simplex[1:]])
    if len(rows) < k:
        return None
    base = list(v0)
    for row, p in zip(rows, pivots):
        f = base[p]
        if f:
            base = [b - f * r for b, r in zip(base, row)]
    return rows, tuple(base)


def _oriented_merge(terms: Iterable[Tuple[Simplex, int]]) -> Dict[Simplex, int]:
    merged: Dict[Simplex, int] = {}
    for s, c in terms:
        if len(set(s)) < len(s):
            continue
        key = tuple(sorted(s))
        merged[key] = merged.get(key, 0) + _perm_sign(s) * c
    return {s: c for s, c in merged.items() if c}


def _null_current(terms: Iterable[Tuple[Simplex, int]], k: int) -> bool:
    merged = _oriented_merge(terms)
    if k == 0:
        return not merged
    groups: Dict[object, List[Tuple[Simplex, int]]] = {}
    for s, c in merged.items():
        key = _plane_key(s)
        if key is None:
            continue
        groups.setdefault(key, []).append((s, c))
    for group in groups.values():
        faces = [(f, sign * c) for s, c in group for f, sign in _faces(s)]
        if not _null_current(faces, k - 1):
            return False
    return True


def is_null_current(c: Chain) -> bool:
    """Exact test that ``c`` integrates every smooth form to zero."""
    return _null_current(c.items(), c.degree)


def same_current(a: Chain, b: Chain) -> bool:
    return is_null_current(a - b)


# --- identities -------------------------------------------------------------

def reflect_identity_check(y: Vector, u: Sequence[Vector], k: int) -> bool:
    """``C^n(y; u) = -C^n(y + u_k; u_1, .., -u_k, .., u_n)`` (1-based ``k``)."""
    y = ex.vec(y)
    u = [ex.vec(v) for v in u]
    if not 1 <= k <= len(u):
        raise ChainError(f"index {k} outside 1..{len(u)}")
    flipped = list(u)
    flipped[k - 1] = ex.neg(u[k - 1])
    lhs = parallelepiped(y, u)
    rhs = -parallelepiped(ex.add(y, u[k - 1]), flipped)
    return same_current(lhs, rhs)


def central_reflection_check(y: Vector, u: Sequence[Vector]) -> bool:
    """``C^n(y; u) = (-1)^n C^n(y + sum u; -u)``."""
    y = ex.vec(y)
    u = [ex.vec(v) for v in u]
    far = ex.vsum(u, len(y))
    rhs = parallelepiped(ex.add(y, far), [ex.neg(v) for v in u]) * (-1) ** len(u)
    return same_current(parallelepiped(y, u), rhs)


@dataclass(frozen=True)
class Parallelepiped:
    """A signed parallelepiped term ``sign * C^n(base; vectors)``."""

    sign: int
    base: Vector
    vectors: Tuple[Vector, ...]

    def chain(self) -> Chain:
        return parallelepiped(self.base, self.vectors) * self.sign

    def volume_bound(self) -> float:
        """Hadamard bound: product of edge lengths."""
        return math.prod(math.sqrt(float(ex.norm2(v))) for v in self.vectors)


def chain_of(terms: Sequence[Parallelepiped], degree: int, dim: int) -> Chain:
    return Chain(degree, dim, [item for t in terms for item in t.chain().items()])


@dataclass(frozen=True)
class FaceSum:
    faces: Tuple[Parallelepiped, ...]
    parallelogram: Chain
    face_chain: Chain
    exact: bool


def parallelogram_face_sum(x: Vector, u: Sequence[Vector]) -> FaceSum:
    """Write ``P^{n-1}(x; u)`` as 2n signed ``(n-1)``-parallelepipeds.

    n faces sit at ``x`` with one vector omitted; n sit at the far corner
    ``x + sum u`` with the negated vectors, again one omitted.
    """
    x = ex.vec(x)
    u = tuple(ex.vec(v) for v in u)
    _check_vectors(x, u)
    n = len(u)
    if n < 1:
        raise ChainError("need at least one vector")
    far = ex.add(x, ex.vsum(u, len(x)))
    faces = []
    for k in range(1, n + 1):
        faces.append(Parallelepiped((-1) ** k, x, u[:k - 1] + u[k:]))
    for k in range(1, n + 1):
        rest = u[:k - 1] + u[k:]
        faces.append(Parallelepiped((-1) ** (n + k), far, tuple(ex.neg(v) for v in rest)))
    p = parallelogram(x, u)
    face_chain = chain_of(faces, n - 1, len(x))
    return FaceSum(tuple(faces), p, face_chain, same_current(p, face_chain))


@dataclass(frozen=True)
class Decomposition:
    """Result of splitting ``P^n(x; u_1..u_{n+1})`` along ``u_{n+1} = a_1 + .. + a_p``."""

    whole: Chain
    pieces: Tuple[Chain, ...]
    residual: Chain
    residual_terms: Tuple[Parallelepiped, ...]
    terms_match: bool

    @property
    def n(self) -> int:
        return self.whole.degree

    @property
    def p(self) -> int:
        return len(self.pieces)

    def residual_is_cycle(self) -> bool:
        return boundary(self.residual).is_zero()

    def volume_bound(self) -> float:
        """Term count times the largest Hadamard bound among residual terms."""
        worst = max((t.volume_bound() for t in self.residual_terms), default=0.0)
        return len(self.residual_terms) * worst


def decompose_parallelogram(x: Vector, u: Sequence[Vector], parts: Sequence[Vector]) -> Decomposition:
    """Decompose a parallelogram along a splitting of its last vector.

    Returns the ``p`` translated parallelograms
    ``P^n(x + a_1 + .. + a_{i-1}; u_1..u_n, a_i)``, the residual
    ``R = P^n(x; u) - sum_i P_i`` and an explicit list of ``2n(p+1)``
    parallelepipeds whose sum is ``R`` as a current.
    """
    x = ex.vec(x)
    u = tuple(ex.vec(v) for v in u)
    a = tuple(ex.vec(v) for v in parts)
    _check_vectors(x, u + a)
    if len(u) < 2:
        raise ChainError("need at least two vectors (n >= 1)")
    if not a:
        raise ChainError("need at least one part")
    dim = len(x)
    n = len(u) - 1
    head, last = u[:n], u[n]
    if ex.vsum(a, dim) != last:
        raise ChainError("parts do not sum to the last vector")

    whole = parallelogram(x, u)
    pieces = []
    offsets = [x]
    for ai in a:
        offsets.append(ex.add(offsets[-1], ai))
    for i, ai in enumerate(a):
        pieces.append(parallelogram(offsets[i], head + (ai,)))
    residual = Chain(n, dim, list(whole.items())
                     + [(s, -c) for piece in pieces for s, c in piece.items()])

    def omit(vectors, s):
        return vectors[:s - 1] + vectors[s:]

    head_sum = ex.vsum(head, dim)
    neg_head = tuple(ex.neg(v) for v in head)
    terms: List[Parallelepiped] = []
    far = ex.add(x, ex.add(head_sum, last))
    for k in range(1, n + 1):
        terms.append(Parallelepiped((-1) ** k, x, omit(head, k) + (last,)))
    for k in range(1, n + 1):
        terms.append(Parallelepiped((-1) ** (n + 1 + k), far, omit(neg_head, k) + (ex.neg(last),)))
    for i, ai in enumerate(a):
        for s in range(1, n + 1):
            terms.append(Parallelepiped(-((-1) ** s), offsets[i], omit(head, s) + (ai,)))
    for i, ai in enumerate(a):
        top = ex.add(offsets[i + 1], head_sum)
        for s in range(1, n + 1):
            terms.append(Parallelepiped(-((-1) ** (n + 1 + s)), top, omit(neg_head, s) + (ex.neg(ai),)))
    assembled = chain_of(terms, n, dim)
    return Decomposition(whole, tuple(pieces), residual, tuple(terms), same_current(assembled, residual))


# --- mass -------------------------------------------------------------------

@dataclass(frozen=True)
class ChainMass:
    exact_sq_terms: Tuple[Tuple[Simplex, Fraction], ...]
    total: float


def simplex_volume_sq(s: Simplex) -> Fraction:
    """Squared k-volume: Gram determinant of edge vectors over (k!)^2."""
    k = len(s) - 1
    if k == 0:
        return Fraction(1)
    edges = [ex.sub(v, s[0]) for v in s[1:]]
    return ex.det(ex.gram(edges)) / math.factorial(k) ** 2


def _sqrt(q: Fraction) -> float:
    if q <= 0:
        return 0.0
    return math.sqrt(q.numerator) / math.sqrt(q.denominator)


def chain_mass(c: Chain) -> ChainMass:
    sq = tuple((s, simplex_volume_sq(s)) for s, _ in c.sorted_items())
    coeffs = c.terms
    total = math.fsum(abs(coeffs[s]) * _sqrt(v) for s, v in sq)
    return ChainMass(sq, total)


def parallelepiped_volume(u: Sequence[Vector]) -> float:
    """sqrt(det Gram(u)), the n-volume spanned by ``u``."""
    return _sqrt(ex.det(ex.gram([ex.vec(v) for v in u])))


def permutation_paths(x: Vector, u: Sequence[Vector]) -> List[Tuple[int, Simplex]]:
    """Staircase simplices ``[x, x+u_s1, x+u_s1+u_s2, ..]`` with permutation signs.

    An independent closed description of ``C^n``; used as a cross-check of
    the recursive construction.
    """
    x = ex.vec(x)
    u = [ex.vec(v) for v in u]
    out = []
    for perm in permutations(range(len(u))):
        pts = [x]
        for i in perm:
            pts.append(ex.add(pts[-1], u[i]))
        out.append((_perm_sign(perm), tuple(pts)))
    return out
