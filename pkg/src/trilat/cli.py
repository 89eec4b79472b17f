"""Command-line interface: solve, table, sweep, contour, thresholds, oracle.

Reports follow the "trilat/1" schema.  Output is buffered and written only
on success, so a failing run never leaves partial CSV behind.  Exit codes:
0 success, 2 degenerate or unusable geometry, 3 malformed input.
"""
from __future__ import annotations

import argparse
import csv
import functools
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Dict, List, Optional, Sequence, Tuple

from . import classifier, oracle, thresholds
from .errors import (BoundsTooSmall, ConcentricIdentical,
                     DegenerateArrangement, DegenerateDirection,
                     DegenerateTriangle, MissingIntersection, NoBracket,
                     NoiseRejection, PreconditionViolation)
from .geometry import Point2, SensorConfig, canonical_frame, distance

SCHEMA = "trilat/1"

_DEGENERATE_ERRORS = (ConcentricIdentical, DegenerateArrangement,
                      DegenerateDirection, DegenerateTriangle,
                      MissingIntersection, NoBracket, PreconditionViolation,
                      BoundsTooSmall, NoiseRejection)


class _SchemaError(Exception):
    pass


# ---------------------------------------------------------------------------
# fixture rows (base length 2 throughout)

_EQUILATERAL_ROWS: Tuple[Tuple[str, float, float], ...] = (
    ("a", 1.3333, 1.9737),
    ("b", 2.6, 1.3),
    ("c", 2.6, 2.6),
    ("d", 4.0, 4.4495),
    ("e", 4.0, 4.8990),
    ("f", 4.0, 5.2520),
)

_ISOSCELES_ROWS: Tuple[Tuple[str, float, float, float], ...] = (
    ("1a", 1.0, 1.8251, 1.7725),
    ("1b", 1.0, 1.8251, 1.9204),
    ("1c", 1.0, 2.2361, 1.2477),
    ("1d", 1.0, 2.2361, 2.2361),
    ("1e", 1.0, 4.4721, 3.9155),
    ("1f", 1.0, 4.4721, 4.4721),
    ("3a", 3.0, 5.1167, 3.2531),
    ("3b", 3.0, 5.1167, 4.4882),
    ("3c", 3.0, 5.1167, 5.1673),
    ("3d", 3.0, 7.0711, 5.1623),
    ("3e", 3.0, 7.0711, 6.3246),
    ("3f", 3.0, 7.0711, 6.9702),
    ("3g", 3.0, 10.3158, 9.0261),
    ("3h", 3.0, 10.3158, 9.2008),
    ("3i", 3.0, 10.3158, 9.7591),
)

# Published objective sextets for the four-equal family; the defining inputs
# are recovered from the two base-pair values.
_FOUR_EQUAL_ROWS: Tuple[Tuple[str, Tuple[float, ...]], ...] = (
    ("a", (3.0000, 6.6564, 6.6564, 12.0000, 6.6564, 6.6564)),
    ("b", (14.8862, 16.2207, 16.2207, 114.8862, 16.2207, 16.2207)),
    ("c", (21.6750, 20.1430, 20.1430, 121.6750, 20.1430, 20.1430)),
    ("d", (18.1818, 18.1818, 18.1818, 118.1818, 18.1818, 18.1818)),
)

_TABLE_COLUMNS = ("S12+", "S23+", "S31+", "S12-", "S23-", "S31-")


def reconstruct_four_equal(o12_plus: float, o12_minus: float,
                           r: float = 2.0) -> Tuple[float, float, float]:
    """Recover (s, d1, d3) from the two base-pair objective values."""
    s = math.sqrt((o12_minus - o12_plus) / 4.0)
    q = (o12_plus + 2.0 * s * s) / (2.0 * s)
    d3 = math.sqrt(q * q - s * s)
    d1 = math.sqrt(d3 * d3 + s * s + r * r / 4.0)
    return s, d1, d3


@functools.lru_cache(maxsize=None)
def refined_tail_base() -> float:
    """Base range of the last three isosceles fixture rows.

    Their middle row ties three candidates by construction, so the block's
    base range is the one whose auxiliary root lands on the printed 9.2008;
    the captions keep only four decimals of it.
    """
    lo, hi = 10.31, 10.32
    for _ in range(60):
        mid = (lo + hi) / 2.0
        if thresholds.d3_star(2.0, 3.0, mid) < 9.2008:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2.0


# ---------------------------------------------------------------------------
# instance parsing

def _as_point(raw: Any, what: str) -> Point2:
    if (not isinstance(raw, (list, tuple)) or len(raw) != 2
            or not all(isinstance(v, (int, float)) for v in raw)):
        raise _SchemaError(f"{what} must be a [x, y] pair")
    return Point2(float(raw[0]), float(raw[1]))


def _as_number(raw: Any, what: str) -> float:
    if not isinstance(raw, (int, float)) or isinstance(raw, bool):
        raise _SchemaError(f"{what} must be a number")
    value = float(raw)
    if not math.isfinite(value):
        raise _SchemaError(f"{what} must be finite")
    return value


def _sensors_from(obj: Dict[str, Any]) -> Tuple[Point2, Point2, Point2]:
    keys = [k for k in ("sensors", "canonical") if k in obj]
    if "r" in obj and "s" in obj:
        keys.append("r/s")
    if len(keys) != 1:
        raise _SchemaError(
            "give exactly one of 'sensors', 'canonical', or top-level r and s")
    if keys[0] == "sensors":
        raw = obj["sensors"]
        if not isinstance(raw, list) or len(raw) != 3:
            raise _SchemaError("'sensors' must list three [x, y] pairs")
        return tuple(_as_point(p, "sensor") for p in raw)  # type: ignore
    source = obj["canonical"] if keys[0] == "canonical" else obj
    r = _as_number(source.get("r"), "r")
    s = _as_number(source.get("s"), "s")
    if r <= 0 or s <= 0:
        raise _SchemaError("canonical r and s must be positive")
    return (Point2(-r / 2.0, 0.0), Point2(r / 2.0, 0.0), Point2(0.0, s))


def _noise_from(raw: Any) -> oracle.NoiseSpec:
    if raw is None or raw == "none":
        return oracle.NoiseSpec()
    if not isinstance(raw, dict):
        raise _SchemaError("'noise' must be an object or \"none\"")
    kind = raw.get("kind", "none")
    scale = _as_number(raw.get("scale", 0.0), "noise scale")
    try:
        return oracle.NoiseSpec(kind=kind, scale=scale)
    except ValueError as exc:
        raise _SchemaError(str(exc)) from exc


def parse_instance(obj: Dict[str, Any],
                   seed_override: Optional[int] = None) -> SensorConfig:
    if not isinstance(obj, dict):
        raise _SchemaError("instance must be a JSON object")
    sensors = _sensors_from(obj)
    range_keys = [k for k in ("d", "ranges", "generator") if k in obj]
    if len(range_keys) != 1:
        raise _SchemaError(
            "give exactly one of 'd', 'ranges', or 'generator'")
    key = range_keys[0]
    if key == "d":
        raw = obj["d"]
        if not isinstance(raw, list) or len(raw) != 3:
            raise _SchemaError("'d' must list three ranges")
        d = tuple(_as_number(v, "range") for v in raw)
    elif key == "ranges":
        raw = obj["ranges"]
        if not isinstance(raw, dict):
            raise _SchemaError("'ranges' must be an object")
        d = tuple(_as_number(raw.get(k), k) for k in ("d1", "d2", "d3"))
    else:
        raw = obj["generator"]
        if not isinstance(raw, dict):
            raise _SchemaError("'generator' must be an object")
        source = _as_point(raw.get("source"), "generator source")
        seed = raw.get("seed", 0)
        if seed_override is not None:
            seed = seed_override
        if not isinstance(seed, int) or isinstance(seed, bool):
            raise _SchemaError("generator seed must be an integer")
        try:
            return oracle.generate_instance(source, sensors,
                                            _noise_from(raw.get("noise")),
                                            seed)
        except NoiseRejection:
            raise
    if any(v < 0 for v in d):
        raise _SchemaError("ranges must be nonnegative")
    return SensorConfig(sensors, d)


def _load_instance(path: str, seed_override: Optional[int]) -> SensorConfig:
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path, "r", encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        raise _SchemaError(f"cannot read instance: {exc}") from exc
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise _SchemaError(f"instance is not valid JSON: {exc}") from exc
    return parse_instance(obj, seed_override)


# ---------------------------------------------------------------------------
# output plumbing

def _emit(text: str) -> None:
    sys.stdout.write(text)
    if not text.endswith("\n"):
        sys.stdout.write("\n")


def _emit_json(payload: Dict[str, Any]) -> None:
    _emit(json.dumps(payload, indent=2))


def _emit_error(code: str, exc: Exception) -> None:
    sys.stderr.write(json.dumps(
        {"error": {"code": code, "message": str(exc)}}) + "\n")


def _csv_buffer() -> Tuple[io.StringIO, Any]:
    buf = io.StringIO()
    return buf, csv.writer(buf, lineterminator="\n")


def _thread_count() -> int:
    raw = os.environ.get("TRILAT_THREADS", "")
    try:
        n = int(raw)
    except ValueError:
        n = 0
    if n <= 0:
        n = os.cpu_count() or 1
    return max(1, n)


# ---------------------------------------------------------------------------
# subcommands

def _solution_payload(solution: classifier.SolutionSet) -> Dict[str, Any]:
    return {
        "schema": SCHEMA,
        "solutions": [{"x": c.location.x, "y": c.location.y, "role": c.role}
                      for c in solution.points],
        "multiplicity": solution.multiplicity,
        "objective": solution.objective_value,
        "derivation": solution.derivation,
        "near_threshold": [{"name": name, "signed_distance": dist}
                           for name, dist in solution.near_threshold],
    }


def cmd_solve(args: argparse.Namespace) -> int:
    config = _load_instance(args.instance, args.seed)
    solution = classifier.solve(config, tol=args.tol)
    payload = _solution_payload(solution)
    if args.oracle_check:
        spec = oracle.default_grid(config, resolution=256)
        result = oracle.brute_force_minimize(config, spec)
        errs = []
        for cand in solution.points:
            errs.append(min(distance(cand.location, p) for p, _ in result.minima))
        payload["oracle_agreement"] = {
            "clusters": len(result.minima),
            "max_position_error": max(errs) if errs else math.inf,
            "value_error": abs(result.global_value - solution.objective_value)
                           / max(1.0, abs(solution.objective_value)),
        }
    if args.csv:
        buf, writer = _csv_buffer()
        writer.writerow(["x", "y", "role"])
        for c in solution.points:
            writer.writerow([f"{c.location.x:.17g}", f"{c.location.y:.17g}",
                             c.role])
        _emit(buf.getvalue())
    else:
        _emit_json(payload)
    return 0


def _table_line(config: SensorConfig) -> Tuple[List[float], List[str]]:
    # Fixture inputs are printed to four decimals, so exact ties split at
    # roughly 1e-4; flag at display level rather than machine level.
    entries = oracle.objective_table(config, tie_tol=1e-3)
    by_label = {label: (value, flag) for label, value, flag in entries}
    values = [by_label[c][0] for c in _TABLE_COLUMNS]
    minima = [c for c in _TABLE_COLUMNS if by_label[c][1]]
    return values, minima


def cmd_table(args: argparse.Namespace) -> int:
    rows: List[List[str]] = []
    if args.family == "equilateral":
        header = ["row", "d1", "d3", *_TABLE_COLUMNS, "minima"]
        s = math.sqrt(3.0)
        for rid, d1, d3 in _EQUILATERAL_ROWS:
            config = SensorConfig.from_canonical(2.0, s, (d1, d1, d3))
            values, minima = _table_line(config)
            rows.append([rid, f"{d1:.4f}", f"{d3:.4f}",
                         *[f"{v:.4f}" for v in values], ";".join(minima)])
    elif args.family == "isosceles":
        header = ["row", "s", "d1", "d3", *_TABLE_COLUMNS, "minima"]
        for rid, s, d1, d3 in _ISOSCELES_ROWS:
            if rid in ("3g", "3h", "3i"):
                d1 = refined_tail_base()
            config = SensorConfig.from_canonical(2.0, s, (d1, d1, d3))
            values, minima = _table_line(config)
            rows.append([rid, f"{s:.4f}", f"{d1:.4f}", f"{d3:.4f}",
                         *[f"{v:.4f}" for v in values], ";".join(minima)])
    else:
        header = ["row", "s", "d1", "d3", *_TABLE_COLUMNS, "minima"]
        for rid, sextet in _FOUR_EQUAL_ROWS:
            s, d1, d3 = reconstruct_four_equal(sextet[0], sextet[3])
            config = SensorConfig.from_canonical(2.0, s, (d1, d1, d3))
            values, minima = _table_line(config)
            rows.append([rid, f"{s:.4f}", f"{d1:.4f}", f"{d3:.4f}",
                         *[f"{v:.4f}" for v in values], ";".join(minima)])
    if args.json:
        payload = {"schema": SCHEMA, "family": args.family,
                   "columns": header,
                   "rows": [dict(zip(header, row)) for row in rows]}
        _emit_json(payload)
    else:
        buf, writer = _csv_buffer()
        writer.writerow(header)
        writer.writerows(rows)
        _emit(buf.getvalue())
    return 0


def _sweep_cell(r: float, s: float, d1: float, d3: float,
                tol: float) -> Tuple[int, str]:
    solution = classifier.solve_isosceles(r, s, d1, d3, tol=tol)
    return solution.multiplicity, solution.derivation


def cmd_sweep(args: argparse.Namespace) -> int:
    lo1, hi1 = args.d1
    lo3, hi3 = args.d3
    n = args.steps
    if n < 2 or hi1 <= lo1 or hi3 <= lo3:
        raise _SchemaError("sweep needs at least 2 steps and increasing ranges")
    d1s = [lo1 + (hi1 - lo1) * i / (n - 1) for i in range(n)]
    d3s = [lo3 + (hi3 - lo3) * i / (n - 1) for i in range(n)]

    def run_row(d1: float) -> List[Tuple[float, float, int, str]]:
        out = []
        for d3 in d3s:
            mult, derivation = _sweep_cell(args.r, args.s, d1, d3, args.tol)
            out.append((d1, d3, mult, derivation))
        return out

    threads = min(_thread_count(), n)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            per_row = list(pool.map(run_row, d1s))
    else:
        per_row = [run_row(d1) for d1 in d1s]
    buf, writer = _csv_buffer()
    writer.writerow(["d1", "d3", "multiplicity", "derivation"])
    for row in per_row:
        for d1, d3, mult, derivation in row:
            writer.writerow([f"{d1:.10g}", f"{d3:.10g}", mult, derivation])
    _emit(buf.getvalue())
    return 0


def cmd_contour(args: argparse.Namespace) -> int:
    config = _load_instance(args.instance, args.seed)
    xs, ys, vals = oracle.contour_grid(config, resolution=args.resolution)
    buf, writer = _csv_buffer()
    writer.writerow(["x", "y", "objective"])
    for i, x in enumerate(xs):
        for j, y in enumerate(ys):
            writer.writerow([f"{x:.10g}", f"{y:.10g}", f"{vals[i, j]:.10g}"])
    _emit(buf.getvalue())
    return 0


def cmd_thresholds(args: argparse.Namespace) -> int:
    config = _load_instance(args.instance, args.seed)
    frame = canonical_frame(*config.Z)
    scale = 1.0 + frame.r + frame.s + max(config.d)
    if frame.shape == "General":
        raise PreconditionViolation("thresholds need an isosceles layout")
    if abs(config.d[0] - config.d[1]) > args.tol * scale:
        raise PreconditionViolation("thresholds need equal base ranges")
    d1 = (config.d[0] + config.d[1]) / 2.0
    bundle = thresholds.compute_bundle(frame.r, frame.s, d1, config.d[2])
    payload = {
        "schema": SCHEMA,
        "r": frame.r, "s": frame.s, "d1": d1, "d3": config.d[2],
        "d3_0": bundle.d3_0, "d1_0": bundle.d1_0,
        "R": bundle.R, "M": bundle.M, "P": bundle.P, "Q": bundle.Q,
        "d3_star": bundle.d3_star, "t_star": bundle.t_star,
        "validity": bundle.validity(),
    }
    _emit_json(payload)
    return 0


def cmd_oracle(args: argparse.Namespace) -> int:
    config = _load_instance(args.instance, args.seed)
    spec = oracle.default_grid(config, resolution=args.resolution,
                               refine_rounds=args.rounds,
                               refine_factor=args.factor)
    result = oracle.brute_force_minimize(config, spec)
    payload = {
        "schema": SCHEMA,
        "global_value": result.global_value,
        "cluster_radius": result.cluster_radius,
        "minima": [{"x": p.x, "y": p.y, "value": v}
                   for p, v in result.minima],
        "round_values": list(result.round_values),
    }
    _emit_json(payload)
    return 0


# ---------------------------------------------------------------------------
# argument wiring

def _add_common(parser: argparse.ArgumentParser,
                instance: bool = True) -> None:
    if instance:
        parser.add_argument("instance",
                            help="path to a JSON instance file, or - for stdin")
    parser.add_argument("--tol", type=float, default=1e-9)
    parser.add_argument("--seed", type=int, default=None,
                        help="override the generator seed")
    group = parser.add_mutually_exclusive_group()
    group.add_argument("--json", action="store_true")
    group.add_argument("--csv", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="trilat",
        description="exact minimizer sets for three-sensor ranging")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="classify one instance")
    _add_common(p)
    p.add_argument("--oracle-check", action="store_true",
                   help="verify against the grid oracle")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("table", help="objective tables for the fixture rows")
    p.add_argument("--family",
                   choices=("equilateral", "isosceles", "four-equal"),
                   required=True)
    _add_common(p, instance=False)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("sweep", help="multiplicity map over a (d1, d3) window")
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--d1", type=float, nargs=2, required=True,
                   metavar=("LO", "HI"))
    p.add_argument("--d3", type=float, nargs=2, required=True,
                   metavar=("LO", "HI"))
    p.add_argument("--steps", type=int, default=100)
    _add_common(p, instance=False)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("contour", help="objective samples on a grid")
    _add_common(p)
    p.add_argument("--resolution", type=int, default=256)
    p.set_defaults(func=cmd_contour)

    p = sub.add_parser("thresholds", help="threshold bundle for an instance")
    _add_common(p)
    p.set_defaults(func=cmd_thresholds)

    p = sub.add_parser("oracle", help="brute-force minimization")
    _add_common(p)
    p.add_argument("--resolution", type=int, default=256)
    p.add_argument("--rounds", type=int, default=6)
    p.add_argument("--factor", type=float, default=4.0)
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _SchemaError as exc:
        _emit_error("schema", exc)
        return 3
    except _DEGENERATE_ERRORS as exc:
        _emit_error(type(exc).__name__, exc)
        return 2


if __name__ == "__main__":
    sys.exit(main())
