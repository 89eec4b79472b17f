"""Brute-force verification path: dense-grid refinement with clustering.

This module is deliberately self-contained.  It evaluates its own copy of
the ranging objective and never consults the closed-form solver, so the two
routes stay independent checks on each other.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from .errors import BoundsTooSmall, MissingIntersection, NoiseRejection
from .geometry import Point2, SensorConfig, circle_circle_intersect, distance

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
_SURVIVOR_CAP = 2048


@dataclass(frozen=True)
class GridSpec:
    """Search window and refinement schedule for the grid minimizer."""

    bounds: Tuple[float, float, float, float]  # xmin, xmax, ymin, ymax
    resolution: int = 512
    refine_rounds: int = 6
    refine_factor: float = 4.0

    def __post_init__(self) -> None:
        xmin, xmax, ymin, ymax = self.bounds
        if not (xmax > xmin and ymax > ymin):
            raise ValueError("bounds must span a nonempty rectangle")
        if self.resolution < 8:
            raise ValueError("resolution too small")
        if self.refine_factor <= 1.0:
            raise ValueError("refine_factor must exceed 1")


@dataclass(frozen=True)
class OracleResult:
    minima: Tuple[Tuple[Point2, float], ...]
    cluster_radius: float
    global_value: float
    round_values: Tuple[float, ...] = ()


def default_grid(config: SensorConfig, resolution: int = 512,
                 refine_rounds: int = 6,
                 refine_factor: float = 4.0) -> GridSpec:
    """Window covering every sensor disk with margin at least the largest range."""
    margin = max(config.d)
    xmin = min(z.x - d for z, d in zip(config.Z, config.d)) - margin
    xmax = max(z.x + d for z, d in zip(config.Z, config.d)) + margin
    ymin = min(z.y - d for z, d in zip(config.Z, config.d)) - margin
    ymax = max(z.y + d for z, d in zip(config.Z, config.d)) + margin
    pad = 0.05 * (1.0 + max(xmax - xmin, ymax - ymin))
    return GridSpec((xmin - pad, xmax + pad, ymin - pad, ymax + pad),
                    resolution, refine_rounds, refine_factor)


def _sensor_arrays(config: SensorConfig) -> Tuple[np.ndarray, np.ndarray]:
    zs = np.array([[z.x, z.y] for z in config.Z], dtype=float)
    dsq = np.array(config.d, dtype=float) ** 2
    return zs, dsq


def _evaluate(zs: np.ndarray, dsq: np.ndarray,
              px: np.ndarray, py: np.ndarray) -> np.ndarray:
    acc = np.zeros_like(px)
    for (zx, zy), dj2 in zip(zs, dsq):
        acc += np.abs((px - zx) ** 2 + (py - zy) ** 2 - dj2)
    return acc


def _objective_scalar(zs: np.ndarray, dsq: np.ndarray,
                      x: float, y: float) -> float:
    total = 0.0
    for (zx, zy), dj2 in zip(zs, dsq):
        total += abs((x - zx) ** 2 + (y - zy) ** 2 - dj2)
    return total


def _check_bounds(config: SensorConfig, spec: GridSpec) -> None:
    xmin, xmax, ymin, ymax = spec.bounds
    req = max(config.d)
    slack = 1e-9 * (1.0 + req + max(xmax - xmin, ymax - ymin))
    for z, d in zip(config.Z, config.d):
        if (z.x - d - req < xmin - slack or z.x + d + req > xmax + slack
                or z.y - d - req < ymin - slack or z.y + d + req > ymax + slack):
            raise BoundsTooSmall(
                "window must cover every disk with margin >= the largest range")


def _prune(px: np.ndarray, py: np.ndarray, vals: np.ndarray, vmin: float,
           band: float, lip: float, cell: float
           ) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Keep cells plausibly containing a minimum; cap count deterministically."""
    cut = vmin + max(band, lip * cell)
    keep = vals <= cut
    px, py, vals = px[keep], py[keep], vals[keep]
    if px.size > _SURVIVOR_CAP:
        order = np.lexsort((py, px, vals))[:_SURVIVOR_CAP]
        px, py, vals = px[order], py[order], vals[order]
    return px, py, vals


class _DisjointSet:
    def __init__(self, n: int) -> None:
        self.parent = list(range(n))

    def find(self, i: int) -> int:
        while self.parent[i] != i:
            self.parent[i] = self.parent[self.parent[i]]
            i = self.parent[i]
        return i

    def union(self, i: int, j: int) -> None:
        ri, rj = self.find(i), self.find(j)
        if ri != rj:
            self.parent[max(ri, rj)] = min(ri, rj)


def _cluster(px: np.ndarray, py: np.ndarray, radius: float) -> List[List[int]]:
    n = px.size
    dsu = _DisjointSet(n)
    if n > 1:
        dx = px[:, None] - px[None, :]
        dy = py[:, None] - py[None, :]
        close = dx * dx + dy * dy <= radius * radius
        ii, jj = np.nonzero(np.triu(close, k=1))
        for i, j in zip(ii.tolist(), jj.tolist()):
            dsu.union(i, j)
    groups: dict = {}
    for i in range(n):
        groups.setdefault(dsu.find(i), []).append(i)
    return [groups[r] for r in sorted(groups)]


def _golden_min(f: Callable[[float], float], lo: float, hi: float,
                iters: int = 40) -> float:
    c = hi - _GOLDEN * (hi - lo)
    d = lo + _GOLDEN * (hi - lo)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        if fc <= fd:
            hi, d, fd = d, c, fc
            c = hi - _GOLDEN * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + _GOLDEN * (hi - lo)
            fd = f(d)
    return (lo + hi) / 2.0


_POLISH_DIRECTIONS = ((1.0, 0.0), (0.0, 1.0),
                      (math.sqrt(0.5), math.sqrt(0.5)),
                      (math.sqrt(0.5), -math.sqrt(0.5)))


def _polish(zs: np.ndarray, dsq: np.ndarray, x: float, y: float,
            half: float, cycles: int = 60) -> Tuple[float, float]:
    """Golden-section line searches cycling axis and diagonal directions.

    The diagonals matter at cone-shaped minima, where axis-aligned searches
    alone can stall a grid cell away from the vertex.  The bracket shrinks
    once a full cycle stops moving, so curved valleys still converge.
    """
    floor = 1e-13 * (1.0 + abs(x) + abs(y))
    best = _objective_scalar(zs, dsq, x, y)
    for _ in range(cycles):
        x0, y0 = x, y
        for ux, uy in _POLISH_DIRECTIONS:
            t = _golden_min(
                lambda t: _objective_scalar(zs, dsq, x + t * ux, y + t * uy),
                -half, half)
            nx, ny = x + t * ux, y + t * uy
            nv = _objective_scalar(zs, dsq, nx, ny)
            if nv < best:
                x, y, best = nx, ny, nv
        if math.hypot(x - x0, y - y0) < 0.25 * half:
            half *= 0.5
            if half < floor:
                break
    return x, y


def _vertex_snap(config: SensorConfig, zs: np.ndarray, dsq: np.ndarray,
                 x: float, y: float, window: float) -> Tuple[float, float]:
    """Exact local refinement at nonsmooth points.

    A stalled polish always sits near one or two measurement circles; try
    the radial projection onto each nearby circle and the crossings of
    nearby pairs, keeping whichever candidate lowers the value.
    """
    active = [j for j, (z, d) in enumerate(zip(config.Z, config.d))
              if abs(math.hypot(x - z.x, y - z.y) - d) <= window]
    candidates: List[Tuple[float, float]] = []
    for j in active:
        z, d = config.Z[j], config.d[j]
        norm = math.hypot(x - z.x, y - z.y)
        if norm > 0.0 and d > 0.0:
            t = d / norm
            candidates.append((z.x + t * (x - z.x), z.y + t * (y - z.y)))
    circles = config.circles()
    for a in range(len(active)):
        for b in range(a + 1, len(active)):
            i, j = active[a], active[b]
            try:
                pair = circle_circle_intersect(circles[i], circles[j],
                                               config.Z[3 - i - j])
            except Exception:
                continue
            for p in pair.points():
                candidates.append((p.x, p.y))
    best_x, best_y = x, y
    best = _objective_scalar(zs, dsq, x, y)
    for cx, cy in candidates:
        if math.hypot(cx - x, cy - y) > 4.0 * window:
            continue
        val = _objective_scalar(zs, dsq, cx, cy)
        if val < best:
            best_x, best_y, best = cx, cy, val
    return best_x, best_y


def _arc_descend(config: SensorConfig, zs: np.ndarray, dsq: np.ndarray,
                 x: float, y: float, window: float) -> Tuple[float, float]:
    """Slide along each nearby measurement circle to lower the value.

    Valleys of the objective run along circle arcs, where line searches in
    fixed directions make little progress; a golden-section search in the
    arc angle follows the valley directly.
    """
    best = _objective_scalar(zs, dsq, x, y)
    for z, d in zip(config.Z, config.d):
        if d <= 0.0 or abs(math.hypot(x - z.x, y - z.y) - d) > window:
            continue
        theta = math.atan2(y - z.y, x - z.x)
        span = min(0.3, max(64.0 * window / d, 1e-7))

        def on_arc(phi: float, z=z, d=d, theta=theta) -> float:
            return _objective_scalar(zs, dsq, z.x + d * math.cos(theta + phi),
                                     z.y + d * math.sin(theta + phi))

        phi = _golden_min(on_arc, -span, span, iters=60)
        val = on_arc(phi)
        if val < best:
            x = z.x + d * math.cos(theta + phi)
            y = z.y + d * math.sin(theta + phi)
            best = val
    return x, y


def _refine_rep(config: SensorConfig, zs: np.ndarray, dsq: np.ndarray,
                x: float, y: float, half: float) -> Tuple[float, float]:
    """Full local refinement: line-search polish, then snap/arc alternation."""
    x, y = _polish(zs, dsq, x, y, half)
    window = 8.0 * half
    best = _objective_scalar(zs, dsq, x, y)
    for _ in range(12):
        x, y = _vertex_snap(config, zs, dsq, x, y, window)
        x, y = _arc_descend(config, zs, dsq, x, y, window)
        val = _objective_scalar(zs, dsq, x, y)
        if val >= best - 1e-14 * (1.0 + abs(best)):
            break
        best = val
    return _vertex_snap(config, zs, dsq, x, y, window)


def brute_force_minimize(config: SensorConfig,
                         spec: Optional[GridSpec] = None) -> OracleResult:
    """Locate every near-global minimum on a refined grid, then cluster."""
    if spec is None:
        spec = default_grid(config)
    _check_bounds(config, spec)
    zs, dsq = _sensor_arrays(config)
    xmin, xmax, ymin, ymax = spec.bounds

    # Conservative gradient bound over the window, for pruning slack.
    corners = [(xmin, ymin), (xmin, ymax), (xmax, ymin), (xmax, ymax)]
    lip = sum(2.0 * max(math.hypot(cx - z.x, cy - z.y) for cx, cy in corners)
              for z in config.Z)

    n = spec.resolution
    dx = (xmax - xmin) / n
    dy = (ymax - ymin) / n
    gx = xmin + (np.arange(n) + 0.5) * dx
    gy = ymin + (np.arange(n) + 0.5) * dy
    xx, yy = np.meshgrid(gx, gy, indexing="ij")
    px, py = xx.ravel(), yy.ravel()
    vals = _evaluate(zs, dsq, px, py)
    vmin = float(vals.min())
    round_values = [vmin]
    cell = math.hypot(dx, dy)
    px, py, vals = _prune(px, py, vals, vmin,
                          1e-3 * (1.0 + abs(vmin)), lip, cell)

    m = max(2, int(round(spec.refine_factor)))
    for rnd in range(spec.refine_rounds):
        ox = ((np.arange(m) + 0.5) / m - 0.5) * dx
        oy = ((np.arange(m) + 0.5) / m - 0.5) * dy
        cx = (px[:, None, None] + ox[None, :, None]
              + np.zeros((1, 1, m))).ravel()
        cy = (py[:, None, None] + np.zeros((1, m, 1))
              + oy[None, None, :]).ravel()
        allx = np.concatenate([cx, px])
        ally = np.concatenate([cy, py])
        vals = _evaluate(zs, dsq, allx, ally)
        vmin = float(vals.min())
        dx /= m
        dy /= m
        cell = math.hypot(dx, dy)
        final = rnd == spec.refine_rounds - 1
        band = (1e-6 if final else 1e-3) * (1.0 + abs(vmin))
        px, py, vals = _prune(allx, ally, vals, vmin, band, lip, cell)
        round_values.append(vmin)

    cluster_radius = 2.0 * cell
    groups = _cluster(px, py, cluster_radius)
    reps: List[Tuple[float, float]] = []
    for group in groups:
        best = min(group, key=lambda i: (vals[i], px[i], py[i]))
        reps.append((float(px[best]), float(py[best])))

    half = 4.0 * cell
    polished: List[Tuple[float, float, float]] = []
    for x, y in reps:
        qx, qy = _refine_rep(config, zs, dsq, x, y, half)
        polished.append((qx, qy, _objective_scalar(zs, dsq, qx, qy)))
    global_value = min(v for _, _, v in polished)
    # After snapping, converged values are exact to rounding, so a tight
    # band separates genuine ties from valley stragglers.
    cut = global_value + 1e-9 * (1.0 + abs(global_value))
    polished = [p for p in polished if p[2] <= cut]

    # Polishing can merge neighbouring representatives; cluster once more.
    qx = np.array([p[0] for p in polished])
    qy = np.array([p[1] for p in polished])
    qv = np.array([p[2] for p in polished])
    groups = _cluster(qx, qy, cluster_radius)
    minima: List[Tuple[Point2, float]] = []
    for group in groups:
        best = min(group, key=lambda i: (qv[i], qx[i], qy[i]))
        minima.append((Point2(float(qx[best]), float(qy[best])),
                       float(qv[best])))
    minima.sort(key=lambda entry: (entry[0].x, entry[0].y))
    return OracleResult(tuple(minima), cluster_radius, global_value,
                        tuple(round_values))


# ---------------------------------------------------------------------------
# instance generation

@dataclass(frozen=True)
class NoiseSpec:
    kind: str = "none"  # none | uniform | normal
    scale: float = 0.0

    def __post_init__(self) -> None:
        if self.kind not in ("none", "uniform", "normal"):
            raise ValueError(f"unknown noise kind: {self.kind!r}")
        if self.scale < 0.0:
            raise ValueError("noise scale must be nonnegative")


def generate_instance(source: Point2, sensors: Sequence[Point2],
                      noise: NoiseSpec, seed: int) -> SensorConfig:
    """Ranges measured from a source point, with optional perturbation.

    Deterministic for a given seed.  A perturbed range must stay
    nonnegative; after 100 rejected draws the instance is abandoned.
    """
    rng = random.Random(seed)
    ranges: List[float] = []
    for z in sensors:
        base = distance(source, z)
        if noise.kind == "none" or noise.scale == 0.0:
            ranges.append(base)
            continue
        for _ in range(100):
            if noise.kind == "uniform":
                delta = rng.uniform(-noise.scale, noise.scale)
            else:
                delta = rng.gauss(0.0, noise.scale)
            if base + delta >= 0.0:
                ranges.append(base + delta)
                break
        else:
            raise NoiseRejection(
                f"could not draw a nonnegative range near {base:.6g}")
    return SensorConfig(tuple(sensors), tuple(ranges))


# ---------------------------------------------------------------------------
# candidate-point table

_TABLE_PAIRS: Tuple[Tuple[str, int, int, int], ...] = (
    ("S12+", 0, 1, 2), ("S23+", 1, 2, 0), ("S31+", 2, 0, 1),
    ("S12-", 0, 1, 2), ("S23-", 1, 2, 0), ("S31-", 2, 0, 1),
)


def objective_table(config: SensorConfig,
                    tie_tol: float = 1e-9) -> List[Tuple[str, float, bool]]:
    """Objective at the six pairwise intersection points, minima flagged.

    Entries within tie_tol (relative) of the least value are flagged; pass a
    display-level tolerance when the inputs themselves are rounded.
    """
    zs, dsq = _sensor_arrays(config)
    circles = config.circles()
    values: List[Tuple[str, float]] = []
    for label, i, j, k in _TABLE_PAIRS:
        pair = circle_circle_intersect(circles[i], circles[j], config.Z[k])
        if pair.count == 0:
            raise MissingIntersection(f"circles {label[:3]} do not meet")
        point = pair.plus_point if label.endswith("+") else pair.minus_point
        values.append((label, _objective_scalar(zs, dsq, point.x, point.y)))
    vmin = min(v for _, v in values)
    cut = vmin + tie_tol * max(1.0, abs(vmin))
    return [(label, v, v <= cut) for label, v in values]


# ---------------------------------------------------------------------------
# contour support

def contour_grid(config: SensorConfig, resolution: int = 256,
                 margin: float = 0.2
                 ) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Objective sampled on a grid over the disks' bounding box plus margin."""
    zs, dsq = _sensor_arrays(config)
    xmin = min(z.x - d for z, d in zip(config.Z, config.d))
    xmax = max(z.x + d for z, d in zip(config.Z, config.d))
    ymin = min(z.y - d for z, d in zip(config.Z, config.d))
    ymax = max(z.y + d for z, d in zip(config.Z, config.d))
    padx = margin * max(xmax - xmin, 1e-9)
    pady = margin * max(ymax - ymin, 1e-9)
    xs = np.linspace(xmin - padx, xmax + padx, resolution)
    ys = np.linspace(ymin - pady, ymax + pady, resolution)
    xx, yy = np.meshgrid(xs, ys, indexing="ij")
    vals = _evaluate(zs, dsq, xx.ravel(), yy.ravel()).reshape(xx.shape)
    return xs, ys, vals
