"""Exact rational vector helpers shared by the chain and root-system code."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence, Tuple

Vector = Tuple[Fraction, ...]


def vec(*coords) -> Vector:
    """Build an exact vector; accepts ints, Fractions or "p/q" strings.

    A single iterable argument is unpacked, so ``vec(1, 2)`` and
    ``vec([1, 2])`` are the same vector.
    """
    if len(coords) == 1 and not isinstance(coords[0], (int, Fraction, str)):
        coords = tuple(coords[0])
    return tuple(Fraction(c) for c in coords)


def zero(dim: int) -> Vector:
    return (Fraction(0),) * dim


def unit(dim: int, i: int) -> Vector:
    return tuple(Fraction(int(j == i)) for j in range(dim))


def _check(u: Vector, v: Vector) -> None:
    if len(u) != len(v):
        raise ValueError(f"dimension mismatch: {len(u)} != {len(v)}")


def add(u: Vector, v: Vector) -> Vector:
    _check(u, v)
    return tuple(a + b for a, b in zip(u, v))


def sub(u: Vector, v: Vector) -> Vector:
    _check(u, v)
    return tuple(a - b for a, b in zip(u, v))


def neg(u: Vector) -> Vector:
    return tuple(-a for a in u)


def scale(c, u: Vector) -> Vector:
    c = Fraction(c)
    return tuple(c * a for a in u)


def dot(u: Vector, v: Vector) -> Fraction:
    _check(u, v)
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def norm2(u: Vector) -> Fraction:
    return dot(u, u)


def vsum(vectors: Iterable[Vector], dim: int) -> Vector:
    total = zero(dim)
    for v in vectors:
        total = add(total, v)
    return total


def fmt(q: Fraction) -> str:
    """Serialize as a "p/q" string (denominator always present)."""
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def parse(s) -> Fraction:
    return Fraction(s)


def rref(rows: Sequence[Sequence[Fraction]]) -> Tuple[Tuple[Vector, ...], Tuple[int, ...]]:
    """Reduced row echelon form over Q.

    Returns the nonzero rows and their pivot columns; the result is unique for
    a given row space, which makes it usable as a dictionary key.
    """
    m = [list(map(Fraction, r)) for r in rows]
    ncols = len(m[0]) if m else 0
    pivots = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return tuple(tuple(row) for row in m[:r]), tuple(pivots)


def rank(rows: Sequence[Sequence[Fraction]]) -> int:
    return len(rref(rows)[0]) if rows else 0


def det(matrix: Sequence[Sequence[Fraction]]) -> Fraction:
    """Determinant by fraction-exact Gaussian elimination."""
    m = [list(map(Fraction, r)) for r in matrix]
    n = len(m)
    if n == 0:
        return Fraction(1)
    result = Fraction(1)
    for c in range(n):
        pr = next((i for i in range(c, n) if m[i][c] != 0), None)
        if pr is None:
            return Fraction(0)
        if pr != c:
            m[c], m[pr] = m[pr], m[c]
            result = -result
        result *= m[c][c]
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] / m[c][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return result


def gram(vectors: Sequence[Vector]) -> list:
    return [[dot(u, v) for v in vectors] for u in vectors]


def solve(matrix: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]) -> Vector:
    """Solve a square nonsingular system exactly."""
    n = len(matrix)
    aug = [list(map(Fraction, row)) + [Fraction(b)] for row, b in zip(matrix, rhs)]
    rows, pivots = rref(aug)
    if len(rows) != n or pivots != tuple(range(n)):
        raise ArithmeticError("singular system")
    return tuple(row[-1] for row in rows)


def inverse(matrix: Sequence[Sequence[Fraction]]) -> list:
    n = len(matrix)
    aug = [list(map(Fraction, row)) + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(matrix)]
    rows, pivots = rref(aug)
    if len(rows) != n or pivots != tuple(range(n)):
        raise ArithmeticError("singular matrix")
    return [list(row[n:]) for row in rows]


def primitive(v: Vector) -> Vector:
    """Scale a nonzero rational vector to the primitive integer vector on its ray."""
    from math import gcd

    lcm = 1
    for a in v:
        lcm = lcm * a.denominator // gcd(lcm, a.denominator)
    ints = [int(a * lcm) for a in v]
    g = 0
    for a in ints:
        g = gcd(g, a)
    if g == 0:
        raise ValueError("zero vector has no primitive representative")
    return tuple(Fraction(a // g) for a in ints)
