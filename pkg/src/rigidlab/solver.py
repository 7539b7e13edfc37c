"""Planar embedding enumeration for frameworks under the pinned convention.

A solution is a pinned embedding: vertex a at the origin, vertex b on the
positive x-axis.  That quotients out translations and rotations but not the
reflection, so mirror images count as distinct and generic counts are even.

Two solvers: an exact branch enumeration along a type-I construction order
(complete), and a multi-start damped Newton counter for arbitrary Laman
frameworks (a validated lower bound, never a completeness claim).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .graphs import Framework, canonical_edge, laman_check
from .henneberg import HennebergSequence, TypeI, replay

Point = tuple[float, float]


class DegenerateGeometryError(ValueError):
    """Concentric circles or a coincident curve: no discrete answer exists."""


@dataclass(frozen=True)
class SolverConfig:
    tol_res: float = 1e-9
    tol_dedup: float = 1e-6
    starts: int = 10000
    max_iter: int = 100
    seed: int = 0
    threads: int = 1

    def __post_init__(self) -> None:
        if self.tol_res <= 0 or self.tol_dedup <= 0:
            raise ValueError("tolerances must be positive")
        if self.starts < 1 or self.max_iter < 1 or self.threads < 1:
            raise ValueError("starts, max_iter and threads must be >= 1")


@dataclass(frozen=True)
class PinnedEmbedding:
    """Points with vertex pin[0] at (0,0) and pin[1] at (l, 0), l > 0."""

    points: tuple[Point, ...]
    pin: tuple[int, int]

    def reflected(self) -> "PinnedEmbedding":
        return PinnedEmbedding(points=tuple((x, -y) for x, y in self.points), pin=self.pin)

    def max_distance(self, other: "PinnedEmbedding") -> float:
        return max(
            math.hypot(p[0] - q[0], p[1] - q[1])
            for p, q in zip(self.points, other.points)
        )


@dataclass
class SolutionSet:
    solutions: list[PinnedEmbedding]
    method: str
    complete: bool
    degenerate: bool = False
    nongeneric: list[PinnedEmbedding] = field(default_factory=list)

    @property
    def count(self) -> int:
        return len(self.solutions)


def edge_residuals(fw: Framework, emb: PinnedEmbedding) -> dict[tuple[int, int], float]:
    """Per-edge defect |p_i - p_j|^2 - d_ij."""
    out = {}
    for (i, j), l in fw.lengths.items():
        pi, pj = emb.points[i], emb.points[j]
        out[(i, j)] = (pi[0] - pj[0]) ** 2 + (pi[1] - pj[1]) ** 2 - l * l
    return out


def residuals_ok(fw: Framework, emb: PinnedEmbedding, tol_res: float) -> bool:
    return all(
        abs(r) <= tol_res * max(1.0, fw.squared(i, j))
        for (i, j), r in edge_residuals(fw, emb).items()
    )


def circle_circle(c1: Point, r1: float, c2: Point, r2: float, tol: float = 1e-12) -> list[Point]:
    """Intersection points of two circles; tangency collapses to one point.

    Concentric centers (within tol relative to the radii) are an error: the
    intersection is then either empty or a whole circle, never discrete.
    """
    if r1 <= 0 or r2 <= 0:
        raise ValueError("radii must be positive")
    dx = c2[0] - c1[0]
    dy = c2[1] - c1[1]
    d2 = dx * dx + dy * dy
    d = math.sqrt(d2)
    if d <= tol * max(r1, r2, 1.0):
        raise DegenerateGeometryError(f"concentric circles at {c1}")
    a = (d2 + r1 * r1 - r2 * r2) / (2.0 * d)
    h2 = r1 * r1 - a * a
    thresh = tol * max(r1 * r1, r2 * r2, d2)
    if h2 < -thresh:
        return []
    ux, uy = dx / d, dy / d
    fx, fy = c1[0] + a * ux, c1[1] + a * uy
    if h2 <= thresh:
        return [(fx, fy)]
    h = math.sqrt(h2)
    return [(fx - h * uy, fy + h * ux), (fx + h * uy, fy - h * ux)]


def _grid_key(emb: PinnedEmbedding, tol_dedup: float) -> tuple[int, ...]:
    grid = 10.0 * tol_dedup
    return tuple(int(round(c / grid)) for p in emb.points for c in p)


def canonical_order(sols: list[PinnedEmbedding], tol_dedup: float = 1e-6) -> list[PinnedEmbedding]:
    """Sort lexicographically by coordinates rounded to a 10*tol_dedup grid.

    Raw coordinates break grid ties, so the output is a total order
    independent of the input order.
    """
    flat = lambda e: tuple(c for p in e.points for c in p)
    return sorted(sols, key=lambda e: (_grid_key(e, tol_dedup), flat(e)))


def dedup(sols: list[PinnedEmbedding], tol_dedup: float = 1e-6) -> list[PinnedEmbedding]:
    """Keep canonical-first representatives under the max-vertex-distance metric."""
    kept: list[PinnedEmbedding] = []
    kept_arr: list[np.ndarray] = []
    for emb in canonical_order(sols, tol_dedup):
        arr = np.asarray(emb.points)
        distinct = True
        for other in kept_arr:
            if float(np.max(np.hypot(*(arr - other).T))) <= tol_dedup:
                distinct = False
                break
        if distinct:
            kept.append(emb)
            kept_arr.append(arr)
    return kept


def solve_branch(
    fw: Framework, seq: HennebergSequence, cfg: SolverConfig | None = None
) -> SolutionSet:
    """Complete enumeration of pinned embeddings along a type-I order.

    Pins the base triangle's first edge, places the apex in both half
    planes, then branches on the two circle intersections of every type-I
    step.  Near-tangent branches produce one child and set the degenerate
    flag instead of silently miscounting.
    """
    cfg = cfg or SolverConfig()
    if fw.dim != 2:
        raise ValueError("branch solver works in the plane only")
    if not seq.is_type_one_only():
        raise ValueError("branch solver requires a type-I-only sequence")
    if replay(seq) != fw.graph:
        raise ValueError("sequence does not replay to the framework's graph")

    b0, b1, b2 = seq.base
    pin = (b0, b1)
    degenerate = False

    def place(points: dict[int, Point], v: int, a: int, c: int) -> list[dict[int, Point]]:
        nonlocal degenerate
        opts = circle_circle(points[a], fw.length(a, v), points[c], fw.length(c, v), cfg.tol_res)
        if len(opts) == 1:
            degenerate = True
        return [{**points, v: q} for q in opts]

    frontier = [{b0: (0.0, 0.0), b1: (fw.length(b0, b1), 0.0)}]
    frontier = [p for partial in frontier for p in place(partial, b2, b0, b1)]
    for step in seq.steps:
        a, c = step.attach
        frontier = [p for partial in frontier for p in place(partial, step.new_vertex, a, c)]

    sols = [
        PinnedEmbedding(points=tuple(points[v] for v in range(fw.graph.n)), pin=pin)
        for points in frontier
    ]
    sols = dedup(sols, cfg.tol_dedup)
    for emb in sols:
        if not residuals_ok(fw, emb, cfg.tol_res):
            raise ArithmeticError("branch placement violated an edge length")
    return SolutionSet(
        solutions=canonical_order(sols, cfg.tol_dedup),
        method="branch",
        complete=True,
        degenerate=degenerate,
    )


def _newton_batch(
    fw: Framework,
    pin: tuple[int, int],
    cfg: SolverConfig,
    start_indices: np.ndarray,
) -> np.ndarray:
    """Run damped Newton from the given start indices; return converged states.

    The full 2n-coordinate system is solved with three pin equations
    appended (x_a, y_a, y_b), making the Jacobian square.  Per-start
    randomness comes from seeding a generator with (seed, start index), so
    results do not depend on how starts are chunked.
    """
    g = fw.graph
    n = g.n
    m = g.m
    a_pin, b_pin = pin
    radius = sum(fw.lengths.values())

    ei = np.array([i for i, _ in g.edges])
    ej = np.array([j for _, j in g.edges])
    d_sq = np.array([fw.squared(i, j) for i, j in g.edges])
    scale = np.maximum(1.0, d_sq)
    pin_rows = np.array([2 * a_pin, 2 * a_pin + 1, 2 * b_pin + 1])

    starts = len(start_indices)
    x = np.empty((starts, 2 * n))
    for row, idx in enumerate(start_indices):
        rng = np.random.default_rng([cfg.seed, int(idx)])
        x[row] = rng.uniform(-radius, radius, size=2 * n)
    x[:, pin_rows] = 0.0

    def residual(state: np.ndarray) -> np.ndarray:
        pts = state.reshape(-1, n, 2)
        diff = pts[:, ei, :] - pts[:, ej, :]
        out = np.empty((state.shape[0], 2 * n))
        out[:, :m] = np.einsum("sek,sek->se", diff, diff) - d_sq
        out[:, m:] = state[:, pin_rows]
        return out

    def jacobian(state: np.ndarray) -> np.ndarray:
        pts = state.reshape(-1, n, 2)
        diff = 2.0 * (pts[:, ei, :] - pts[:, ej, :])
        jac = np.zeros((state.shape[0], 2 * n, 2 * n))
        rows = np.arange(m)
        for k in (0, 1):
            jac[:, rows, 2 * ei + k] += diff[:, :, k]
            jac[:, rows, 2 * ej + k] -= diff[:, :, k]
        for r, c in enumerate(pin_rows):
            jac[:, m + r, c] = 1.0
        return jac

    active = np.ones(starts, dtype=bool)
    f = residual(x)
    fnorm = np.linalg.norm(f, axis=1)
    for _ in range(cfg.max_iter):
        if not active.any():
            break
        idx = np.flatnonzero(active)
        jac = jacobian(x[idx])
        try:
            step = np.linalg.solve(jac, f[idx][:, :, None])[:, :, 0]
        except np.linalg.LinAlgError:
            step = np.zeros((len(idx), 2 * n))
            solvable = np.ones(len(idx), dtype=bool)
            for row in range(len(idx)):
                try:
                    step[row] = np.linalg.solve(jac[row], f[idx[row]])
                except np.linalg.LinAlgError:
                    solvable[row] = False
                    active[idx[row]] = False
            idx = idx[solvable]
            step = step[solvable]
            if len(idx) == 0:
                continue
        lam = np.ones(len(idx))
        improved = np.zeros(len(idx), dtype=bool)
        cand = np.empty_like(x[idx])
        for _ in range(30):
            todo = ~improved
            if not todo.any():
                break
            cand[todo] = x[idx[todo]] - lam[todo, None] * step[todo]
            cand_norm = np.linalg.norm(residual(cand[todo]), axis=1)
            better = cand_norm < fnorm[idx[todo]]
            sel = np.flatnonzero(todo)
            improved[sel[better]] = True
            lam[sel[~better]] *= 0.5
        moved = idx[improved]
        x[moved] = cand[improved]
        f[moved] = residual(x[moved])
        fnorm[moved] = np.linalg.norm(f[moved], axis=1)
        active[idx[~improved]] = False
        scaled = np.max(np.abs(f[moved][:, :m]) / scale, axis=1)
        done = moved[scaled <= 0.01 * cfg.tol_res]
        active[done] = False

    scaled = np.max(np.abs(f[:, :m]) / scale, axis=1)
    pins_ok = np.max(np.abs(x[:, pin_rows]), axis=1) <= cfg.tol_res
    return x[(scaled <= cfg.tol_res) & pins_ok]


def _jacobian_singular(fw: Framework, pin, emb: PinnedEmbedding) -> bool:
    g = fw.graph
    n = g.n
    pts = np.asarray(emb.points)
    jac = np.zeros((2 * n, 2 * n))
    for r, (i, j) in enumerate(g.edges):
        diff = 2.0 * (pts[i] - pts[j])
        jac[r, 2 * i : 2 * i + 2] += diff
        jac[r, 2 * j : 2 * j + 2] -= diff
    a_pin, b_pin = pin
    for r, c in enumerate((2 * a_pin, 2 * a_pin + 1, 2 * b_pin + 1)):
        jac[2 * n - 3 + r, c] = 1.0
    sv = np.linalg.svd(jac, compute_uv=False)
    return sv[-1] <= 1e-8 * sv[0]


def solve_newton(
    fw: Framework, cfg: SolverConfig | None = None, pin: tuple[int, int] | None = None
) -> SolutionSet:
    """Multi-start damped Newton on the squared-distance system.

    Reported solutions are residual-verified, normalized (rotated by pi when
    the pinned edge lands on the negative axis), closed under the free
    x-axis reflection, and deduplicated.  complete is always False: this is
    a validated lower-bound counter.
    """
    cfg = cfg or SolverConfig()
    if fw.dim != 2:
        raise ValueError("newton solver works in the plane only")
    if not laman_check(fw.graph):
        raise ValueError("newton solver requires a Laman graph")
    if pin is None:
        pin = fw.graph.edges[0]
    else:
        pin = canonical_edge(*pin)
        if pin not in set(fw.graph.edges):
            raise ValueError(f"pin {pin} must be an edge of the graph")

    indices = np.arange(cfg.starts)
    if cfg.threads > 1:
        chunks = np.array_split(indices, cfg.threads)
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            parts = list(pool.map(lambda c: _newton_batch(fw, pin, cfg, c), chunks))
        converged = np.vstack([p for p in parts if p.size] or [np.empty((0, 2 * fw.graph.n))])
    else:
        converged = _newton_batch(fw, pin, cfg, indices)

    a_pin, b_pin = pin
    candidates: list[PinnedEmbedding] = []
    for state in converged:
        pts = state.reshape(-1, 2)
        if pts[b_pin, 0] < 0:
            pts = -pts
        emb = PinnedEmbedding(points=tuple((float(px), float(py)) for px, py in pts), pin=pin)
        candidates.append(emb)
        candidates.append(emb.reflected())

    candidates = [e for e in candidates if residuals_ok(fw, e, cfg.tol_res)]
    distinct = dedup(candidates, cfg.tol_dedup)
    solutions, nongeneric = [], []
    for emb in distinct:
        if _jacobian_singular(fw, pin, emb):
            nongeneric.append(emb)
        else:
            solutions.append(emb)
    return SolutionSet(
        solutions=canonical_order(solutions, cfg.tol_dedup),
        method="newton",
        complete=False,
        nongeneric=nongeneric,
    )
