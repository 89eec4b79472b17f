"""Exact global-minimizer sets for the three-sensor ranging objective.

Symmetric instances (two equal legs, two equal base ranges) go through
closed-form case tables over (d1, d3); everything else goes through a finite
candidate scan that is exhaustive for this objective.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from .errors import NoBracket, PreconditionViolation
from .geometry import (SQRT3_2, Point2, SensorConfig, canonical_frame,
                       centroid_points, circle_circle_intersect, config_scale,
                       distance, n3_point)
from .regions import objective_value
from .thresholds import (compute_bundle, d3_star_root, threshold_M,
                         threshold_P, threshold_P_flat, threshold_R)

REL_TIE = 1e-9

Role = str

_PAIR_SPECS: Tuple[Tuple[Role, int, int, int, bool], ...] = (
    ("S12plus", 0, 1, 2, True),
    ("S12minus", 0, 1, 2, False),
    ("S23plus", 1, 2, 0, True),
    ("S23minus", 1, 2, 0, False),
    ("S31plus", 2, 0, 1, True),
    ("S31minus", 2, 0, 1, False),
)

_PAIR_BY_ROLE = {spec[0]: spec[1:] for spec in _PAIR_SPECS}


@dataclass(frozen=True)
class CandidatePoint:
    location: Point2
    role: Role


@dataclass(frozen=True)
class SolutionSet:
    points: Tuple[CandidatePoint, ...]
    objective_value: float
    multiplicity: int
    derivation: str
    near_threshold: Tuple[Tuple[str, float], ...] = ()


# ---------------------------------------------------------------------------
# shared helpers

def _pair_point(config: SensorConfig, role: Role) -> Optional[Point2]:
    i, j, k, plus = _PAIR_BY_ROLE[role]
    circles = config.circles()
    pair = circle_circle_intersect(circles[i], circles[j], config.Z[k])
    if pair.count == 0:
        return None
    return pair.plus_point if plus else pair.minus_point


def _materialize(config: SensorConfig, symbol: str) -> Optional[CandidatePoint]:
    if symbol in _PAIR_BY_ROLE:
        p = _pair_point(config, symbol)
        return CandidatePoint(p, symbol) if p is not None else None
    cents = centroid_points(*config.Z)
    if symbol == "Y0":
        return CandidatePoint(cents[0], "Y0")
    if symbol == "Y3":
        return CandidatePoint(cents[3], "Y3")
    if symbol == "N3":
        return CandidatePoint(n3_point(config), "N3")
    raise KeyError(symbol)


def _argmin_set(config: SensorConfig,
                candidates: Sequence[CandidatePoint],
                pos_eps: float) -> Tuple[List[CandidatePoint], float]:
    """Keep candidates tied with the best value, deduplicated by location."""
    vals = [objective_value(config, c.location) for c in candidates]
    vmin = min(vals)
    cut = vmin + REL_TIE * max(1.0, abs(vmin))
    winners: List[CandidatePoint] = []
    for cand, val in zip(candidates, vals):
        if val > cut:
            continue
        if any(distance(cand.location, w.location) <= pos_eps for w in winners):
            continue
        winners.append(cand)
    return winners, vmin


# ---------------------------------------------------------------------------
# case tables for the symmetric instance, canonical frame
#
# A block covers an interval of d1; its rows cover intervals of d3 and name
# the minimizing symbols.  Interval ends are (value, closed?) pairs; rows at
# a shared endpoint are both consulted and the objective breaks the tie.

Row = Tuple[float, bool, float, bool, Tuple[str, ...], str]
Block = Tuple[float, bool, float, bool, Tuple[Row, ...], str]

_INF = math.inf


def _row(lo: float, lo_c: bool, hi: float, hi_c: bool,
         symbols: Tuple[str, ...], rid: str) -> Row:
    return (lo, lo_c, hi, hi_c, symbols, rid)


def _inside(v: float, lo: float, lo_c: bool, hi: float, hi_c: bool,
            eps: float) -> bool:
    ok_lo = v >= lo - eps if (lo_c or lo == 0.0) else v > lo + eps
    ok_hi = v <= hi + eps if hi_c else v < hi - eps
    return ok_lo and ok_hi


def _chord_half(r: float, d1: float) -> float:
    return math.sqrt(max(d1 * d1 - r * r / 4.0, 0.0))


def _equilateral_blocks(r: float, d1: float) -> List[Block]:
    s = SQRT3_2 * r
    low = 2.0 * s / 3.0          # equals r/sqrt(3)
    top = 2.0 * s
    h = _chord_half(r, d1)
    pair = ("S23plus", "S31plus")
    blocks: List[Block] = []
    blocks.append((0.0, True, r / 2.0, True, (
        _row(0.0, False, low, True, ("Y0",), "E1.1"),
        _row(low, True, top, True, ("N3",), "E1.2"),
        _row(top, True, _INF, False, ("Y3",), "E1.3"),
    ), "E1"))
    blocks.append((r / 2.0, False, low, True, (
        _row(0.0, False, low, True, ("Y0",), "E2.1"),
        _row(low, True, s - h, True, ("N3",), "E2.2"),
        _row(s - h, False, s + h, False, pair, "E2.3"),
        _row(s + h, True, top, True, ("N3",), "E2.4"),
        _row(top, True, _INF, False, ("Y3",), "E2.5"),
    ), "E2"))
    blocks.append((low, False, r, True, (
        _row(0.0, False, d1, False, ("S12plus",), "E3.1"),
        _row(d1, True, d1, True, ("S12plus",) + pair, "E3.2"),
        _row(d1, False, s + h, False, pair, "E3.3"),
        _row(s + h, True, top, True, ("N3",), "E3.4"),
        _row(top, True, _INF, False, ("Y3",), "E3.5"),
    ), "E3"))
    m = math.sqrt(d1 * d1 + 2.0 * r * r)
    blocks.append((r, False, _INF, False, (
        _row(0.0, False, d1, False, ("S12plus",), "E4.1"),
        _row(d1, True, d1, True, ("S12plus",) + pair, "E4.2"),
        _row(d1, False, m, False, pair, "E4.3"),
        _row(m, True, m, True, pair + ("S12minus",), "E4.4"),
        _row(m, False, _INF, False, ("S12minus",), "E4.5"),
    ), "E4"))
    return blocks


def _isosceles_blocks(r: float, s: float, d1: float, regime: str) -> List[Block]:
    low = 2.0 * s / 3.0
    top = 2.0 * s
    a = math.sqrt(r * r / 4.0 + s * s / 9.0)
    b = math.sqrt(r * r / 4.0 + s * s)
    h = _chord_half(r, d1)
    pair = ("S23plus", "S31plus")
    blocks: List[Block] = []
    blocks.append((0.0, True, r / 2.0, True, (
        _row(0.0, False, low, True, ("Y0",), "1.1"),
        _row(low, True, top, True, ("N3",), "1.2"),
        _row(top, True, _INF, False, ("Y3",), "1.3"),
    ), "1"))
    blocks.append((r / 2.0, False, a, True, (
        _row(0.0, False, low, True, ("Y0",), "2.1"),
        _row(low, True, s - h, True, ("N3",), "2.2"),
        _row(s - h, False, s + h, False, pair, "2.3"),
        _row(s + h, True, top, True, ("N3",), "2.4"),
        _row(top, True, _INF, False, ("Y3",), "2.5"),
    ), "2"))
    big_r = threshold_R(r, s, d1) if d1 > r / 2.0 else 0.0
    blocks.append((a, False, b, True, (
        _row(0.0, False, big_r, False, ("S12plus",), "3.1"),
        _row(big_r, True, big_r, True, ("S12plus",) + pair, "3.2"),
        _row(big_r, False, s + h, False, pair, "3.3"),
        _row(s + h, True, top, True, ("N3",), "3.4"),
        _row(top, True, _INF, False, ("Y3",), "3.5"),
    ), "3"))

    if regime == "flat":
        p_cut = threshold_P_flat(r, s)
        if p_cut is None:
            p_cut = _INF
    else:
        p_cut = threshold_P(r, s)
        if p_cut is None:
            p_cut = _INF

    if d1 > b:
        big_m = threshold_M(r, s, d1)
        blocks.append((b, False, p_cut, False, (
            _row(0.0, False, big_r, False, ("S12plus",), "4.1"),
            _row(big_r, True, big_r, True, ("S12plus",) + pair, "4.2"),
            _row(big_r, False, big_m, False, pair, "4.3"),
            _row(big_m, True, big_m, True, pair + ("S12minus",), "4.4"),
            _row(big_m, False, _INF, False, ("S12minus",), "4.5"),
        ), "4"))
        if math.isfinite(p_cut):
            d3p = math.sqrt(d1 * d1 - r * r / 4.0 + s * s)
            if regime == "flat":
                blocks.append((p_cut, True, p_cut, True, (
                    _row(0.0, False, d3p, False, ("S12plus",), "5.1"),
                    _row(d3p, True, d3p, True,
                         ("S12plus", "S12minus") + pair, "5.2"),
                    _row(d3p, False, _INF, False, ("S12minus",), "5.3"),
                ), "5"))
                blocks.append((p_cut, False, _INF, False, (
                    _row(0.0, False, d3p, False, ("S12plus",), "6.1"),
                    _row(d3p, True, d3p, True, ("S12plus", "S12minus"), "6.2"),
                    _row(d3p, False, _INF, False, ("S12minus",), "6.3"),
                ), "6"))
            else:
                quad = ("S23plus", "S23minus", "S31plus", "S31minus")
                d3m_sq = d1 * d1 - r * r / 4.0 - s * s
                d3m = math.sqrt(max(d3m_sq, 0.0))
                blocks.append((p_cut, True, p_cut, True, (
                    _row(0.0, False, d3m, False, ("S12plus",), "5.1"),
                    _row(d3m, True, d3m, True, ("S12plus",) + quad, "5.2"),
                    _row(d3m, False, big_m, False, pair, "5.3"),
                    _row(big_m, True, big_m, True, pair + ("S12minus",), "5.4"),
                    _row(big_m, False, _INF, False, ("S12minus",), "5.5"),
                ), "5"))
                if d1 > p_cut:
                    try:
                        dstar = d3_star_root(r, s, d1).value
                    except (NoBracket, PreconditionViolation):
                        dstar = d3m
                    blocks.append((p_cut, False, _INF, False, (
                        _row(0.0, False, dstar, False, ("S12plus",), "6.1"),
                        _row(dstar, True, dstar, True,
                             ("S12plus", "S23minus", "S31minus"), "6.2"),
                        _row(dstar, False, d3m, False,
                             ("S23minus", "S31minus"), "6.3"),
                        _row(d3m, True, d3m, True, quad, "6.4"),
                        _row(d3m, False, big_m, False, pair, "6.5"),
                        _row(big_m, True, big_m, True, pair + ("S12minus",), "6.6"),
                        _row(big_m, False, _INF, False, ("S12minus",), "6.7"),
                    ), "6"))
    return blocks


def _solve_from_blocks(r: float, s: float, d1: float, d3: float,
                       blocks: List[Block], family: str,
                       tol: float) -> SolutionSet:
    eps = tol * (1.0 + r + s + d1 + abs(d3))
    symbols: List[str] = []
    row_ids: List[str] = []
    for lo, lo_c, hi, hi_c, rows, _bid in blocks:
        if not _inside(d1, lo, lo_c, hi, hi_c, eps):
            continue
        for rlo, rlo_c, rhi, rhi_c, syms, rid in rows:
            if rlo > rhi:
                continue
            if _inside(d3, rlo, rlo_c, rhi, rhi_c, eps):
                row_ids.append(rid)
                for sym in syms:
                    if sym not in symbols:
                        symbols.append(sym)
    config = SensorConfig.from_canonical(r, s, (d1, d1, d3))
    candidates = [c for c in (_materialize(config, sym) for sym in symbols)
                  if c is not None]
    if not candidates:
        fallback = solve_general(config, tol=tol)
        return SolutionSet(fallback.points, fallback.objective_value,
                           fallback.multiplicity,
                           f"{family}:fallback", fallback.near_threshold)
    pos_eps = REL_TIE * (1.0 + config_scale(config))
    winners, vmin = _argmin_set(config, candidates, pos_eps)
    derivation = f"{family}:{'+'.join(row_ids)}"
    return SolutionSet(tuple(winners), vmin, len(winners), derivation,
                       _near_threshold(r, s, d1, d3))


def _near_threshold(r: float, s: float, d1: float,
                    d3: float) -> Tuple[Tuple[str, float], ...]:
    bundle = compute_bundle(r, s, d1, d3)
    out: List[Tuple[str, float]] = []
    if bundle.d3_0 is not None:
        out.append(("d3_zero", d3 - bundle.d3_0))
    if bundle.d1_0 is not None:
        out.append(("d1_zero", d1 - bundle.d1_0))
    if bundle.R is not None:
        out.append(("R", d3 - bundle.R))
    if bundle.M is not None:
        out.append(("M", d3 - bundle.M))
    if bundle.P is not None:
        out.append(("P", d1 - bundle.P))
    if bundle.d3_star is not None:
        out.append(("d3_star", d3 - bundle.d3_star))
    return tuple(out)


def solve_equilateral(r: float, d1: float, d3: float,
                      tol: float = 1e-9) -> SolutionSet:
    """Minimizer set for the equal-sided sensor layout with ranges (d1, d1, d3)."""
    if r <= 0.0 or d1 < 0.0 or d3 < 0.0:
        raise PreconditionViolation("need r > 0 and nonnegative ranges")
    s = SQRT3_2 * r
    return _solve_from_blocks(r, s, d1, d3, _equilateral_blocks(r, d1),
                              "equilateral", tol)


def solve_isosceles(r: float, s: float, d1: float, d3: float,
                    tol: float = 1e-9, _force: Optional[str] = None) -> SolutionSet:
    """Minimizer set for base r, apex height s, ranges (d1, d1, d3).

    Within tolerance of the equilateral height the dedicated equal-sided
    tables are used instead, unless a regime is forced for testing.
    """
    if r <= 0.0 or s <= 0.0 or d1 < 0.0 or d3 < 0.0:
        raise PreconditionViolation("need r, s > 0 and nonnegative ranges")
    t3 = SQRT3_2 * r
    if _force is None and abs(s - t3) <= tol * r:
        return solve_equilateral(r, d1, d3, tol)
    regime = _force if _force is not None else ("flat" if s < t3 else "sharp")
    family = "isosceles-flat" if regime == "flat" else "isosceles-sharp"
    return _solve_from_blocks(r, s, d1, d3,
                              _isosceles_blocks(r, s, d1, regime), family, tol)


# ---------------------------------------------------------------------------
# multiplicity without running the tables

def multiplicity_conditions(r: float, s: float, d1: float, d3: float,
                            tol: float = 1e-9) -> Tuple[int, str]:
    """Count of tied minimizers with the matched closed-form condition."""
    if r <= 0.0 or s <= 0.0 or d1 < 0.0 or d3 < 0.0:
        raise PreconditionViolation("need r, s > 0 and nonnegative ranges")
    eps = tol * (1.0 + r + s + d1 + abs(d3))
    t3 = SQRT3_2 * r
    equilateral = abs(s - t3) <= tol * r
    sharp = (not equilateral) and s > t3
    flat = (not equilateral) and s < t3
    a = math.sqrt(r * r / 4.0 + s * s / 9.0)
    b = math.sqrt(r * r / 4.0 + s * s)
    h = _chord_half(r, d1) if d1 > r / 2.0 else None
    d3p = math.sqrt(h * h + s * s) if h is not None else None
    d3m = math.sqrt(h * h - s * s) if h is not None and h >= s else None
    p = threshold_P(r, s) if sharp else None
    pf = threshold_P_flat(r, s) if flat else None
    big_r = threshold_R(r, s, d1) if d1 > a - eps else None
    big_m = threshold_M(r, s, d1) if d1 > b - eps else None

    def near(x: Optional[float], y: Optional[float]) -> bool:
        return x is not None and y is not None and abs(x - y) <= eps

    if sharp and near(d1, p) and near(d3, d3m):
        return 5, "tall apex, d1 at P, d3 at the four-equal locus"
    if sharp and p is not None and d1 > p + eps and near(d3, d3m):
        return 4, "tall apex beyond P, d3 at the four-equal locus"
    if flat and pf is not None and math.isfinite(pf) and near(d1, pf) \
            and near(d3, d3p):
        return 4, "flat apex at the critical base range, d3 at the tie locus"
    if big_m is not None and d1 > b + eps and near(d3, big_m):
        return 3, "d3 at M: base '-' joins the leg '+' pair"
    dstar: Optional[float] = None
    if sharp and p is not None and d1 > p + eps:
        try:
            dstar = d3_star_root(r, s, d1).value
        except (NoBracket, PreconditionViolation):
            dstar = None
    if dstar is not None and near(d3, dstar):
        return 3, "d3 at the auxiliary root: base '+' joins the leg '-' pair"
    three_plus_hi = p if sharp else (pf if flat else _INF)
    if three_plus_hi is None:
        three_plus_hi = _INF
    if equilateral and d1 > a + eps and near(d3, d1):
        return 3, "equal-sided layout, d3 at d1: all three '+' points tie"
    if (not equilateral) and big_r is not None and d1 > a + eps \
            and d1 < three_plus_hi - eps and near(d3, big_r):
        return 3, "d3 at R: all three '+' points tie"
    if flat and pf is not None and math.isfinite(pf) and d1 > pf + eps \
            and near(d3, d3p):
        return 2, "flat apex beyond the critical base range: base pair ties"
    if dstar is not None and d3m is not None \
            and dstar + eps < d3 < d3m - eps:
        return 2, "between the auxiliary root and the four-equal locus"
    if h is not None and d1 > r / 2.0 + eps:
        if d1 < a:
            lo: Optional[float] = s - h
        else:
            lo = big_r
        if sharp and d3m is not None and lo is not None:
            lo = max(lo, d3m)
        hi = s + h if d1 <= b else big_m
        if equilateral and d1 > a:
            lo = d1
            hi = s + h if d1 <= r else big_m
        if lo is not None and hi is not None \
                and lo + eps < d3 < hi - eps:
            return 2, "interior band: the two leg '+' points tie"
    return 1, "away from every tie locus"


# ---------------------------------------------------------------------------
# the four-equal family (d1 = d2 = |Z1 Z3| circles through the far base point)

def four_equal_branch(r: float, s: float, d1: float,
                      tol: float = 1e-9) -> SolutionSet:
    """Minimizers along d3^2 = d1^2 - s^2 - r^2/4, classified by d1 against P."""
    leg_sq = s * s + r * r / 4.0
    if d1 * d1 <= leg_sq:
        raise PreconditionViolation("d1 must exceed the base-apex distance")
    d3 = math.sqrt(d1 * d1 - leg_sq)
    p = threshold_P(r, s)
    eps = tol * (1.0 + d1 + (p if p is not None else 0.0))
    config = SensorConfig.from_canonical(r, s, (d1, d1, d3))
    if p is not None and abs(d1 - p) <= eps:
        symbols = ("S12plus", "S23plus", "S23minus", "S31plus", "S31minus")
        branch = "five"
    elif p is not None and d1 > p:
        symbols = ("S23plus", "S23minus", "S31plus", "S31minus")
        branch = "outer"
    else:
        symbols = ("S12plus",)
        branch = "single"
    candidates = [c for c in (_materialize(config, sym) for sym in symbols)
                  if c is not None]
    pos_eps = REL_TIE * (1.0 + config_scale(config))
    vals = [objective_value(config, c.location) for c in candidates]
    vmin = min(vals)
    winners: List[CandidatePoint] = []
    for cand in candidates:
        if any(distance(cand.location, w.location) <= pos_eps for w in winners):
            continue
        winners.append(cand)
    near = (("P", d1 - p),) if p is not None else ()
    return SolutionSet(tuple(winners), vmin, len(winners),
                       f"four-equal:{branch}", near)


def four_equal_objectives(r: float, s: float,
                          d3: float) -> Tuple[float, float, float]:
    """Closed-form objective values on the four-equal family.

    Returns (base '+', base '-', leg '-') values; the leg '+' value equals
    the base '+' value on this family by construction.
    """
    if r <= 0.0 or s <= 0.0 or d3 <= 0.0:
        raise PreconditionViolation("need positive r, s, d3")
    leg = math.sqrt(s * s + r * r / 4.0)
    o_s31_minus = 2.0 * r * s * d3 / leg
    root = math.sqrt(d3 * d3 + s * s)
    o_s12_plus = -2.0 * s * s + 2.0 * s * root
    o_s12_minus = 2.0 * s * s + 2.0 * s * root
    return o_s12_plus, o_s12_minus, o_s31_minus


# ---------------------------------------------------------------------------
# general instances: exhaustive candidate scan

def _region_bits(config: SensorConfig, p: Point2, eps: float) -> Tuple[int, ...]:
    return tuple(1 if distance(p, z) <= d + eps else 0
                 for z, d in zip(config.Z, config.d))


def _in_region(config: SensorConfig, p: Point2, bits: Tuple[int, ...],
               eps: float) -> bool:
    for z, d, bit in zip(config.Z, config.d, bits):
        dist = distance(p, z)
        if bit and dist > d + eps:
            return False
        if not bit and dist < d - eps:
            return False
    return True


def _radial_candidates(config: SensorConfig, eps: float) -> List[CandidatePoint]:
    """Nearest/farthest points of each circle from each quadratic center."""
    out: List[CandidatePoint] = []
    anchors = centroid_points(*config.Z)
    for anchor in anchors:
        for z, d in zip(config.Z, config.d):
            if d <= 0.0:
                out.append(CandidatePoint(z, "RegionProjection"))
                continue
            norm = distance(anchor, z)
            if norm <= eps:
                continue
            for sign in (1.0, -1.0):
                t = sign * d / norm
                out.append(CandidatePoint(
                    Point2(z.x + t * (anchor.x - z.x),
                           z.y + t * (anchor.y - z.y)),
                    "RegionProjection"))
    return out


def _first_crossing(config: SensorConfig, p: Point2, ux: float, uy: float,
                    eps: float) -> Optional[float]:
    """Smallest positive ray parameter where a circle is crossed."""
    best: Optional[float] = None
    for z, d in zip(config.Z, config.d):
        mx, my = p.x - z.x, p.y - z.y
        bq = mx * ux + my * uy
        cq = mx * mx + my * my - d * d
        disc = bq * bq - cq
        if disc < 0.0:
            continue
        root = math.sqrt(disc)
        for t in (-bq - root, -bq + root):
            if t > eps and (best is None or t < best):
                best = t
    return best


def _descent_polish(config: SensorConfig, start: Point2, eps: float,
                    max_iter: int = 100) -> Tuple[Point2, float]:
    """Piecewise-quadratic descent: step toward/away from the active center."""
    cents = centroid_points(*config.Z)
    w = start
    best = objective_value(config, w)
    for _ in range(max_iter):
        bits = _region_bits(config, w, eps)
        k = sum(bits)
        if k == 0:
            target, attract = cents[0], True
        elif k == 1:
            target, attract = cents[1 + bits.index(1)], True
        elif k == 2:
            target, attract = cents[1 + bits.index(0)], False
        else:
            target, attract = cents[0], False
        dx, dy = target.x - w.x, target.y - w.y
        norm = math.hypot(dx, dy)
        if norm <= eps:
            break
        ux, uy = dx / norm, dy / norm
        if not attract:
            ux, uy = -ux, -uy
        cross = _first_crossing(config, w, ux, uy, eps)
        if attract:
            step = norm if cross is None else min(norm, cross)
        else:
            if cross is None:
                break
            step = cross
        trial = Point2(w.x + step * ux, w.y + step * uy)
        val = objective_value(config, trial)
        if val < best - REL_TIE * max(1.0, abs(best)):
            w, best = trial, val
        else:
            break
    return w, best


def solve_general(config: SensorConfig, tol: float = 1e-9) -> SolutionSet:
    """Minimizer set for an arbitrary noncollinear sensor layout."""
    canonical_frame(*config.Z, tol=tol)
    scale = 1.0 + config_scale(config)
    eps = tol * scale

    candidates: List[CandidatePoint] = []
    for role, *_ in _PAIR_SPECS:
        p = _pair_point(config, role)
        if p is not None:
            candidates.append(CandidatePoint(p, role))
    cents = centroid_points(*config.Z)
    if _in_region(config, cents[0], (0, 0, 0), eps):
        candidates.append(CandidatePoint(cents[0], "Y0"))
    for j in range(3):
        bits = tuple(1 if m == j else 0 for m in range(3))
        if _in_region(config, cents[j + 1], bits, eps):
            candidates.append(CandidatePoint(cents[j + 1], f"Y{j + 1}"))
    candidates.extend(_radial_candidates(config, eps))

    pos_eps = REL_TIE * scale
    winners, vmin = _argmin_set(config, candidates, pos_eps)

    # Confirming polish from each winner; accept only a real improvement.
    improved: List[CandidatePoint] = []
    for w in winners:
        refined, val = _descent_polish(config, w.location, eps)
        if val < vmin - REL_TIE * max(1.0, abs(vmin)):
            improved.append(CandidatePoint(refined, "RegionProjection"))
    if improved:
        winners, vmin = _argmin_set(config, list(winners) + improved, pos_eps)

    return SolutionSet(tuple(winners), vmin, len(winners), "general-scan", ())


# ---------------------------------------------------------------------------
# dispatch

_PAIR_NAME = {frozenset((0, 1)): "S12", frozenset((1, 2)): "S23",
              frozenset((2, 0)): "S31"}


def _remap_role(role: Role, perm: Tuple[int, int, int]) -> Role:
    if role in _PAIR_BY_ROLE:
        i, j, _, plus = _PAIR_BY_ROLE[role]
        name = _PAIR_NAME[frozenset((perm[i], perm[j]))]
        return name + ("plus" if plus else "minus")
    if role == "Y0":
        return "Y0"
    if role == "Y3":
        return f"Y{perm[2] + 1}"
    if role == "N3":
        return "N3" if perm[2] == 2 else "RegionProjection"
    return role


def solve(config: SensorConfig, tol: float = 1e-9) -> SolutionSet:
    """Route to the symmetric tables when a relabeling fits, else scan."""
    canonical_frame(*config.Z, tol=tol)
    scale = 1.0 + config_scale(config)
    for perm in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        z = tuple(config.Z[i] for i in perm)
        d = tuple(config.d[i] for i in perm)
        sub = canonical_frame(*z, tol=tol)
        if sub.shape == "General" or abs(d[0] - d[1]) > tol * scale:
            continue
        d1 = (d[0] + d[1]) / 2.0
        sol = solve_isosceles(sub.r, sub.s, d1, d[2], tol=tol)
        points = tuple(
            CandidatePoint(sub.transform.invert(c.location),
                           _remap_role(c.role, perm))
            for c in sol.points)
        value = min(objective_value(config, c.location) for c in points)
        return SolutionSet(points, value, sol.multiplicity, sol.derivation,
                           sol.near_threshold)
    return solve_general(config, tol=tol)
