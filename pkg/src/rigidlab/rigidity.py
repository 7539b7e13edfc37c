"""Rigidity matrices, rank tests, and squared-distance rank checks.

Exact rational arithmetic is the default for rank certification: rank
results at random rational points are theorems about the generic rank, not
floating-point heuristics.  A thresholded floating mode exists for
embeddings produced by the numeric solvers.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

import numpy as np

from .graphs import Graph

FLOAT_PIVOT_TOL = 1e-8

RATIONAL_NUMERATOR_BOUND = 10**6
RATIONAL_DENOMINATOR_BOUND = 10**3


@dataclass(frozen=True)
class Embedding:
    """Points for vertices 0..n-1 in R^dim; coordinates rational or float."""

    dim: int
    points: tuple[tuple, ...]

    def __post_init__(self) -> None:
        for p in self.points:
            if len(p) != self.dim:
                raise ValueError(f"point {p} does not have {self.dim} coordinates")
        object.__setattr__(self, "points", tuple(tuple(p) for p in self.points))

    @property
    def n(self) -> int:
        return len(self.points)

    def is_exact(self) -> bool:
        return all(isinstance(c, (Fraction, int)) for p in self.points for c in p)


@dataclass(frozen=True)
class RigidityMatrix:
    """m x (d*n) matrix: row for edge (i,j) holds p_i-p_j and p_j-p_i blocks."""

    rows: int
    cols: int
    entries: tuple[tuple, ...]


def rigidity_matrix(g: Graph, e: Embedding) -> RigidityMatrix:
    if e.n != g.n:
        raise ValueError(f"embedding has {e.n} points for a graph on {g.n} vertices")
    d = e.dim
    rows = []
    for i, j in g.edges:
        row = [0] * (d * g.n)
        for k in range(d):
            diff = e.points[i][k] - e.points[j][k]
            row[i * d + k] = diff
            row[j * d + k] = -diff
        rows.append(tuple(row))
    return RigidityMatrix(rows=g.m, cols=d * g.n, entries=tuple(rows))


def _as_rows(mat) -> list[list]:
    if isinstance(mat, RigidityMatrix):
        return [list(r) for r in mat.entries]
    if isinstance(mat, np.ndarray):
        return [list(r) for r in mat]
    return [list(r) for r in mat]


def _rank_exact(rows: list[list[Fraction]]) -> int:
    if not rows:
        return 0
    ncols = len(rows[0])
    rank = 0
    for col in range(ncols):
        pivot_row = None
        for r in range(rank, len(rows)):
            if rows[r][col] != 0:
                pivot_row = r
                break
        if pivot_row is None:
            continue
        rows[rank], rows[pivot_row] = rows[pivot_row], rows[rank]
        pivot = rows[rank][col]
        for r in range(rank + 1, len(rows)):
            factor = rows[r][col] / pivot
            if factor == 0:
                continue
            for c in range(col, ncols):
                rows[r][c] -= factor * rows[rank][c]
        rank += 1
        if rank == len(rows):
            break
    return rank


def _rank_float(a: np.ndarray) -> int:
    a = np.array(a, dtype=float)
    if a.size == 0:
        return 0
    scale = np.max(np.abs(a))
    if scale == 0.0:
        return 0
    thresh = FLOAT_PIVOT_TOL * scale
    nrows, ncols = a.shape
    rank = 0
    for col in range(ncols):
        pivot_row = rank + int(np.argmax(np.abs(a[rank:, col])))
        if abs(a[pivot_row, col]) <= thresh:
            continue
        a[[rank, pivot_row]] = a[[pivot_row, rank]]
        a[rank + 1 :, col:] -= np.outer(a[rank + 1 :, col] / a[rank, col], a[rank, col:])
        rank += 1
        if rank == nrows:
            break
    return rank


def matrix_rank(mat, mode: str = "exact") -> int:
    """Rank by Gaussian elimination; exact rational or thresholded float pivots."""
    rows = _as_rows(mat)
    if mode == "exact":
        return _rank_exact([[Fraction(x) for x in row] for row in rows])
    if mode == "float":
        return _rank_float(np.array(rows, dtype=float))
    raise ValueError(f"unknown rank mode {mode!r}")


def rank_mode_for(e: Embedding) -> str:
    return "exact" if e.is_exact() else "float"


def infinitesimally_rigid(g: Graph, e: Embedding, mode: str | None = None) -> bool:
    """True iff the rigidity matrix has rank d*n - C(d+1,2)."""
    d = e.dim
    if g.n < d + 1:
        raise ValueError(f"need n >= d+1, got n={g.n}, d={d}")
    mode = mode or rank_mode_for(e)
    a = rigidity_matrix(g, e)
    return matrix_rank(a, mode) == d * g.n - math.comb(d + 1, 2)


def random_rational_embedding(n: int, d: int, seed: int) -> Embedding:
    """Seeded rational points: numerators in [-10^6, 10^6], denominators in 1..10^3."""
    rng = random.Random(seed)
    pts = tuple(
        tuple(
            Fraction(
                rng.randint(-RATIONAL_NUMERATOR_BOUND, RATIONAL_NUMERATOR_BOUND),
                rng.randint(1, RATIONAL_DENOMINATOR_BOUND),
            )
            for _ in range(d)
        )
        for _ in range(n)
    )
    return Embedding(dim=d, points=pts)


def generically_rigid(g: Graph, d: int, seed: int = 0) -> bool:
    """Exact rank test at a seeded random rational embedding.

    A True answer holds on the complement of an algebraic subvariety, so it
    certifies d-minimal rigidity when the edge count also matches.
    """
    e = random_rational_embedding(g.n, d, seed)
    a = rigidity_matrix(g, e)
    return matrix_rank(a, "exact") == d * g.n - math.comb(d + 1, 2)


def generic_rank(g: Graph, d: int, seed: int = 0) -> int:
    """Exact rigidity-matrix rank at a seeded random rational embedding."""
    e = random_rational_embedding(g.n, d, seed)
    return matrix_rank(rigidity_matrix(g, e), "exact")


def trivial_motions(e: Embedding) -> list[tuple]:
    """The d translations plus C(d,2) infinitesimal rotations at these points.

    Each motion is a d*n vector lying in the kernel of any rigidity matrix
    built at the same embedding.
    """
    d = e.dim
    motions = []
    for k in range(d):
        vec = []
        for _ in e.points:
            unit = [0] * d
            unit[k] = 1
            vec.extend(unit)
        motions.append(tuple(vec))
    for a in range(d):
        for b in range(a + 1, d):
            vec = []
            for p in e.points:
                rot = [0] * d
                rot[a] = -p[b]
                rot[b] = p[a]
                vec.extend(rot)
            motions.append(tuple(vec))
    return motions


class SquaredDistanceRanks(NamedTuple):
    rank_bordered: int
    rank_gram: int
    ok: bool


def cayley_menger_rank_check(e: Embedding, mode: str | None = None) -> SquaredDistanceRanks:
    """Rank relation between the bordered squared-distance and Gram matrices.

    Builds the (n+1)x(n+1) bordered matrix of pairwise squared distances and
    the (n-1)x(n-1) Gram matrix obtained by the cosine rule with point 0 as
    origin.  ok iff rank(bordered) = rank(gram) + 2 and rank(bordered) <= d+2.
    """
    n = e.n
    if n < 2:
        raise ValueError("need at least two points")
    mode = mode or rank_mode_for(e)
    half = Fraction(1, 2) if mode == "exact" else 0.5

    def sqdist(i: int, j: int):
        return sum((a - b) ** 2 for a, b in zip(e.points[i], e.points[j]))

    x = [[0] * (n + 1) for _ in range(n + 1)]
    for j in range(1, n + 1):
        x[0][j] = 1
        x[j][0] = 1
    for i in range(n):
        for j in range(i + 1, n):
            val = sqdist(i, j)
            x[i + 1][j + 1] = val
            x[j + 1][i + 1] = val

    y = [[0] * (n - 1) for _ in range(n - 1)]
    for i in range(1, n):
        for j in range(1, n):
            y[i - 1][j - 1] = half * (sqdist(0, i) + sqdist(0, j) - sqdist(i, j))

    rank_x = matrix_rank(x, mode)
    rank_y = matrix_rank(y, mode)
    ok = rank_x == rank_y + 2 and rank_x <= e.dim + 2
    return SquaredDistanceRanks(rank_x, rank_y, ok)
