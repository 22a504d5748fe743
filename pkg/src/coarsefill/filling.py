"""Cubical chains, exact filling oracles and the cubical co-area slice."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

import networkx as nx

from .spaces import ModelSpace, RegularTree, fit_power_exponent

Cell = Tuple[Tuple[int, ...], Tuple[int, ...]]  # (anchor, sorted axes)


class FillingError(ValueError):
    pass


class CubicalChain:
    """Integer combination of axis-aligned unit k-cells of ``Z^n``.

    A cell is ``(anchor, axes)``: the cube ``anchor + [0,1]^axes``.
    """

    __slots__ = ("degree", "dim", "_terms")

    def __init__(self, degree: int, dim: int, terms: Iterable[Tuple[Cell, int]] = ()):
        merged: Dict[Cell, int] = {}
        for (anchor, axes), c in terms:
            anchor, axes = tuple(anchor), tuple(axes)
            if len(axes) != degree or len(anchor) != dim:
                raise FillingError(f"cell {(anchor, axes)} does not fit degree {degree}, dim {dim}")
            if list(axes) != sorted(set(axes)) or any(not 0 <= a < dim for a in axes):
                raise FillingError(f"axes {axes} must be distinct, sorted and in range")
            merged[(anchor, axes)] = merged.get((anchor, axes), 0) + int(c)
        self.degree = degree
        self.dim = dim
        self._terms = {k: v for k, v in merged.items() if v}

    def items(self) -> Iterator[Tuple[Cell, int]]:
        return iter(self._terms.items())

    @property
    def terms(self) -> Mapping[Cell, int]:
        return dict(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def mass(self) -> int:
        return sum(abs(c) for c in self._terms.values())

    def __eq__(self, other) -> bool:
        if not isinstance(other, CubicalChain):
            return NotImplemented
        return (self.degree, self.dim, self._terms) == (other.degree, other.dim, other._terms)

    def __add__(self, other: "CubicalChain") -> "CubicalChain":
        if (self.degree, self.dim) != (other.degree, other.dim):
            raise FillingError("mixed cubical chains")
        return CubicalChain(self.degree, self.dim, list(self.items()) + list(other.items()))

    def __neg__(self) -> "CubicalChain":
        return CubicalChain(self.degree, self.dim, [(k, -c) for k, c in self.items()])

    def __sub__(self, other: "CubicalChain") -> "CubicalChain":
        return self + (-other)

    def __repr__(self) -> str:
        return f"CubicalChain(degree={self.degree}, dim={self.dim}, cells={len(self)})"

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "dim": self.dim,
            "cells": [{"anchor": list(a), "axes": list(x), "coefficient": c}
                      for (a, x), c in sorted(self._terms.items())],
        }


def cell_faces(cell: Cell) -> Iterator[Tuple[Cell, int]]:
    """Signed faces; the face in direction ``+e_a`` gets ``(-1)^(pos(a)+1)``, 1-based."""
    anchor, axes = cell
    for pos, a in enumerate(axes):
        rest = axes[:pos] + axes[pos + 1:]
        front = anchor[:a] + (anchor[a] + 1,) + anchor[a + 1:]
        sign = 1 if pos % 2 == 0 else -1
        yield (front, rest), sign
        yield (anchor, rest), -sign


def cubical_boundary(c: CubicalChain) -> CubicalChain:
    if c.degree < 1:
        raise FillingError("degree too low")
    return CubicalChain(c.degree - 1, c.dim,
                        [(f, s * k) for cell, k in c.items() for f, s in cell_faces(cell)])


def box_chain(lo: Sequence[int], hi: Sequence[int], axes: Optional[Sequence[int]] = None) -> CubicalChain:
    """Sum of all unit cells filling the box ``[lo, hi]`` along ``axes`` (default: all)."""
    dim = len(lo)
    axes = tuple(range(dim)) if axes is None else tuple(sorted(axes))
    ranges = [range(lo[i], hi[i]) if i in axes else range(lo[i], lo[i] + 1) for i in range(dim)]
    cells = [(tuple(p), axes) for p in itertools.product(*ranges)]
    return CubicalChain(len(axes), dim, [(cell, 1) for cell in cells])


def rectangle_boundary(a: int, b: int, corner: Tuple[int, int] = (0, 0)) -> CubicalChain:
    x, y = corner
    return cubical_boundary(box_chain((x, y), (x + a, y + b)))


# --- slicing ----------------------------------------------------------------

def _extent_max(cell: Cell, axis: int) -> int:
    anchor, axes = cell
    return anchor[axis] + (1 if axis in axes else 0)


def restrict(c: CubicalChain, axis: int, t: float) -> CubicalChain:
    """Cells lying entirely in ``{x_axis <= t}``."""
    return CubicalChain(c.degree, c.dim, [(cell, k) for cell, k in c.items() if _extent_max(cell, axis) <= t])


def _check_threshold(t: float) -> None:
    if (2 * t) % 2 != 1:
        raise FillingError(f"slice threshold {t} must be a half-integer")


def cubical_slice(c: CubicalChain, axis: int, t: float) -> CubicalChain:
    """``boundary(c restricted to {x <= t}) - (boundary c) restricted to {x <= t}``.

    Cells crossing the plane ``x = t`` are left out of the restriction, so the
    slice is carried by the back faces of those cells, on the lattice plane just
    below ``t``.  Each cell crosses exactly one half-integer plane per axis,
    which gives the co-area bound.
    """
    if c.degree < 1:
        raise FillingError("degree too low")
    if not 0 <= axis < c.dim:
        raise FillingError(f"axis {axis} out of range")
    _check_threshold(t)
    return cubical_boundary(restrict(c, axis, t)) - restrict(cubical_boundary(c), axis, t)


def slice_thresholds(c: CubicalChain, axis: int) -> List[float]:
    """Half-integer thresholds covering the support of ``c`` (slices are empty elsewhere)."""
    if c.is_zero():
        return []
    lo = min(cell[0][axis] for cell, _ in c.items())
    hi = max(_extent_max(cell, axis) for cell, _ in c.items())
    return [k + 0.5 for k in range(lo - 1, hi + 1)]


@dataclass(frozen=True)
class CoareaReport:
    axis: int
    slice_masses: Tuple[Tuple[float, int], ...]
    total_slice_mass: int
    mass: int

    @property
    def holds(self) -> bool:
        return self.total_slice_mass <= self.mass


def coarea_check(c: CubicalChain, axis: int) -> CoareaReport:
    masses = tuple((t, cubical_slice(c, axis, t).mass()) for t in slice_thresholds(c, axis))
    return CoareaReport(axis, masses, sum(m for _, m in masses), c.mass())


# --- filling oracles --------------------------------------------------------

@dataclass(frozen=True)
class FillingResult:
    filler: object
    mass: int
    optimality: str  # "exact" | "upper-bound"


def _check_zero_cycle(z: Mapping) -> Dict:
    z = {p: int(w) for p, w in z.items() if int(w)}
    if sum(z.values()) != 0:
        raise FillingError(f"weights sum to {sum(z.values())}, not 0")
    return z


def graph_chain_boundary(filler: Mapping[Tuple, int]) -> Dict:
    """Boundary of a 1-chain of oriented edges ``(u, v)``: ``[v] - [u]`` per edge."""
    out: Dict = {}
    for (u, v), c in filler.items():
        out[v] = out.get(v, 0) + c
        out[u] = out.get(u, 0) - c
    return {p: c for p, c in out.items() if c}


def fill_zero_cycle(s: ModelSpace, z: Mapping) -> FillingResult:
    """Minimal 1-chain in a graph space whose boundary is the 0-cycle ``z``.

    Solved as a min-cost transportation from the negative to the positive
    part of ``z`` with graph distances as costs; each unit of flow is routed
    along a geodesic.  Edges are stored with sorted endpoints.
    """
    if not getattr(s, "is_graph", False) or not hasattr(s, "geodesic"):
        raise FillingError(f"{getattr(s, 'name', s)} is not a graph space")
    z = _check_zero_cycle(z)
    for p in z:
        s._require(p)
    if not z:
        return FillingResult({}, 0, "exact")
    sources = sorted((p for p, w in z.items() if w < 0), key=repr)
    sinks = sorted((p for p, w in z.items() if w > 0), key=repr)
    g = nx.DiGraph()
    for p in sources:
        g.add_node(("s", p), demand=z[p])
    for q in sinks:
        g.add_node(("t", q), demand=z[q])
    for p in sources:
        for q in sinks:
            g.add_edge(("s", p), ("t", q), weight=int(s.distance(p, q)))
    try:
        flow = nx.min_cost_flow(g)
    except nx.NetworkXUnfeasible as exc:
        raise FillingError("supports cannot be connected") from exc
    cost = 0
    filler: Dict[Tuple, int] = {}
    for p in sources:
        for (_, q), amount in sorted(flow[("s", p)].items(), key=repr):
            if not amount:
                continue
            cost += amount * int(s.distance(p, q))
            path = s.geodesic(p, q)
            for u, v in zip(path, path[1:]):
                key, sign = ((u, v), 1) if repr(u) <= repr(v) else ((v, u), -1)
                filler[key] = filler.get(key, 0) + sign * amount
    filler = {k: c for k, c in filler.items() if c}
    if graph_chain_boundary(filler) != z:
        raise RuntimeError("filler boundary mismatch")
    mass = sum(abs(c) for c in filler.values())
    if mass != cost:
        raise RuntimeError(f"filler mass {mass} differs from transport cost {cost}")
    return FillingResult(filler, mass, "exact")


def fill_one_cycle_plane(z: CubicalChain) -> FillingResult:
    """The unique compactly supported 2-chain of ``Z^2`` with boundary ``z``.

    The coefficient of square ``(i, j)`` is its winding number, accumulated
    from the horizontal edges below it.
    """
    if z.dim != 2 or z.degree != 1:
        raise FillingError("expected a 1-chain in Z^2")
    if not cubical_boundary(z).is_zero():
        raise FillingError("input is not a cycle")
    columns: Dict[int, List[Tuple[int, int]]] = {}
    for ((i, j), axes), c in z.items():
        if axes == (0,):
            columns.setdefault(i, []).append((j, c))
    cells = []
    for i, edges in columns.items():
        edges.sort()
        w = 0
        for (j, c), nxt in zip(edges, edges[1:] + [(None, 0)]):
            w += c
            if w and nxt[0] is not None:
                cells.extend((((i, k), (0, 1)), w) for k in range(j, nxt[0]))
    filler = CubicalChain(2, 2, cells)
    if cubical_boundary(filler) != z:
        raise RuntimeError("winding filler does not bound the input")
    return FillingResult(filler, filler.mass(), "exact")


@dataclass(frozen=True)
class ScalingResult:
    family: str
    table: Tuple[Tuple[float, float], ...]  # (cycle size ell, filling mass)
    exponent: Optional[float]


def filling_scaling_experiment(family: str, sizes: Sequence[int]) -> ScalingResult:
    """Filling mass against cycle size, with a log-log least-squares exponent.

    ``z2-rect``: boundaries of ``L x L`` squares in ``Z^2`` (``ell = 4L``).
    ``tree-endpoints``: 0-cycles ``[y] - [x]`` in ``T_3`` at distance ``D``
    (``ell = D``).
    """
    rows = []
    for size in sorted(set(int(s) for s in sizes)):
        if size < 1:
            raise FillingError("sizes must be positive")
        if family == "z2-rect":
            result = fill_one_cycle_plane(rectangle_boundary(size, size))
            rows.append((4.0 * size, float(result.mass)))
        elif family == "tree-endpoints":
            tree = RegularTree(3)
            # endpoints on two different branches at the root, distance ``size``
            half = size // 2
            x = (0,) * (size - half)
            y = (1,) + (0,) * (half - 1) if half else ()
            result = fill_zero_cycle(tree, {y: 1, x: -1})
            rows.append((float(tree.distance(x, y)), float(result.mass)))
        else:
            raise FillingError(f"unknown family {family!r}")
    exponent = fit_power_exponent(*zip(*rows)) if len(rows) > 1 else None
    return ScalingResult(family, tuple(rows), exponent)
