"""Batch command-line front end.

Scenario parameters come from subcommand flags, optionally seeded from a
JSON config file (flags override the file).  Every run validates its full
configuration before doing any work, then writes a deterministic
``report.json`` (stable key order, no timestamps) plus CSV curve samples
into the output directory.

Exit codes: 0 success, 2 configuration/validation error, 3 numerical
failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .chaplygin_bounds import criterion_1d, criterion_first_period
from .core_dynamics import gaussian_profile, profile_divergences
from .numerics import QuadratureError
from .oracle import (
    blowup_sweep,
    count_revolutions_oracle,
    detect_blowup,
    run_characteristic,
    sandwich_check,
)
from .pulse_analysis import (
    DEFAULT_SIGMA1,
    DEFAULT_SIGMA2,
    PulseScenario,
    classify_pulse,
    optimize_thresholds,
)
from .spiral_counter import build_spiral, count_revolutions, guaranteed_field_lifetime, lifetime

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

_MODES = (
    "criterion-1d",
    "first-period",
    "gauss-pulse",
    "count-revolutions",
    "lifetime",
    "oracle-run",
    "sweep",
)

_ALLOWED_KEYS = {
    "criterion-1d": {"v0_prime", "e0_prime"},
    "first-period": {"div_v0", "curl_sq", "div_e0"},
    "gauss-pulse": {"k"},
    "count-revolutions": {"k", "start_lambda", "sigma1", "sigma2", "max_rev"},
    "lifetime": {"k", "start_lambda", "sigma1", "sigma2", "max_rev"},
    "oracle-run": {"k", "r0", "t_max", "tol", "d_cap"},
    "sweep": {"k", "r_min", "r_max", "n_r", "t_max", "tol"},
}


class ConfigError(ValueError):
    """Invalid scenario configuration."""


def _load_config_file(path: str, mode: str) -> dict:
    try:
        raw = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("config file must hold a JSON object")
    unknown = set(raw) - _ALLOWED_KEYS[mode] - {"mode"}
    if unknown:
        raise ConfigError(f"unknown config keys for {mode}: {sorted(unknown)}")
    if "mode" in raw and raw["mode"] != mode:
        raise ConfigError(f"config is for mode {raw['mode']!r}, invoked as {mode!r}")
    return raw


def _merge(defaults: dict, file_cfg: dict, cli_cfg: dict) -> dict:
    out = dict(defaults)
    out.update({k: v for k, v in file_cfg.items() if k != "mode"})
    out.update({k: v for k, v in cli_cfg.items() if v is not None})
    return out


def _require(cfg: dict, key: str):
    if cfg.get(key) is None:
        raise ConfigError(f"missing required parameter: {key}")
    return cfg[key]


def _fmt(x: float) -> str:
    return f"{x:.15g}"


def _write_csv(path: Path, header: Sequence[str], rows) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _write_report(out_dir: Path, report: dict) -> None:
    report = dict(report)
    report["tool_version"] = __version__
    (out_dir / "report.json").write_text(
        json.dumps(report, sort_keys=True, indent=2) + "\n", encoding="utf-8"
    )


def _spiral_rows(spiral, points: int = 200):
    rows = []
    for i, seg in enumerate(spiral.segments):
        s, dv = seg.sample(points)
        for sv, dvv in zip(s, dv):
            rows.append((float(i), sv, sv + 1.0, dvv))
    return rows


def _emit_spirals(out_dir: Path, spirals: dict) -> None:
    for name, spiral in spirals.items():
        _write_csv(
            out_dir / f"spiral_{name}.csv",
            ("curve_id", "s", "lambda", "D"),
            _spiral_rows(spiral),
        )


def _emit_trajectory(out_dir: Path, run) -> None:
    t = run.trajectory.t
    y = run.trajectory.y
    rows = [(t[i], y[2, i], y[3, i], y[0, i], y[1, i], y[4, i]) for i in range(len(t))]
    _write_csv(out_dir / "trajectory.csv", ("t", "lambda", "D", "F", "G", "r"), rows)


def _cmd_criterion_1d(cfg: dict, out_dir: Path) -> dict:
    v = criterion_1d(_require(cfg, "v0_prime"), _require(cfg, "e0_prime"))
    return {
        "mode": "criterion-1d",
        "inputs": {"v0_prime": cfg["v0_prime"], "e0_prime": cfg["e0_prime"]},
        "delta": v.value,
        "verdict": "satisfied" if v.satisfied else "violated",
    }


def _cmd_first_period(cfg: dict, out_dir: Path) -> dict:
    v = criterion_first_period(
        _require(cfg, "div_v0"), _require(cfg, "curl_sq"), _require(cfg, "div_e0")
    )
    return {
        "mode": "first-period",
        "inputs": {k: cfg[k] for k in ("div_v0", "curl_sq", "div_e0")},
        "delta_minus": v.value,
        "verdict": "satisfied" if v.satisfied else "violated",
    }


def _cmd_gauss_pulse(cfg: dict, out_dir: Path) -> dict:
    K = _require(cfg, "k")
    scenario = PulseScenario(K)
    th = optimize_thresholds()
    verdict = classify_pulse(K)
    return {
        "mode": "gauss-pulse",
        "inputs": {"k": K},
        "lambda0_at_origin": scenario.lambda0_at_origin,
        "thresholds": {
            "sigma1": th.sigma1,
            "lambda1": th.lambda1,
            "sigma2": th.sigma2,
            "lambda2": th.lambda2,
            "smooth_K": th.smooth_K,
            "blowup_K": th.blowup_K,
        },
        "verdict": verdict.value,
    }


def _build_spiral_pair(cfg: dict):
    K = _require(cfg, "k")
    PulseScenario(K)
    lam0 = cfg["start_lambda"] if cfg.get("start_lambda") is not None else 2.0 * K
    sigma_pair = (cfg["sigma1"], cfg["sigma2"])
    max_rev = int(cfg["max_rev"])
    outer = build_spiral("outer", (lam0, 0.0), None, sigma_pair, 2, max_rev)
    inner = build_spiral("inner", (lam0, 0.0), None, sigma_pair, 2, max_rev)
    return lam0, sigma_pair, outer, inner


def _cmd_count_revolutions(cfg: dict, out_dir: Path) -> dict:
    lam0, sigma_pair, outer, inner = _build_spiral_pair(cfg)
    n = count_revolutions(outer)
    _emit_spirals(out_dir, {"outer": outer, "inner": inner})
    return {
        "mode": "count-revolutions",
        "inputs": {"k": cfg["k"], "start_lambda": lam0,
                   "sigma1": sigma_pair[0], "sigma2": sigma_pair[1],
                   "max_rev": cfg["max_rev"]},
        "start_point": [lam0, 0.0],
        "revolutions": n,
        "outer_crossings_lambda": outer.crossings_lambda,
        "inner_crossings_lambda": inner.crossings_lambda,
        "outer_stop_reason": outer.stop_reason,
    }


def _cmd_lifetime(cfg: dict, out_dir: Path) -> dict:
    lam0, sigma_pair, outer, inner = _build_spiral_pair(cfg)
    est = lifetime(inner, outer)
    _emit_spirals(out_dir, {"outer": outer, "inner": inner})
    return {
        "mode": "lifetime",
        "inputs": {"k": cfg["k"], "start_lambda": lam0,
                   "sigma1": sigma_pair[0], "sigma2": sigma_pair[1],
                   "max_rev": cfg["max_rev"]},
        "start_point": [lam0, 0.0],
        "revolutions": est.revolutions,
        "T_lower": est.T_lower,
        "T_upper": est.T_upper,
    }


def _cmd_oracle_run(cfg: dict, out_dir: Path) -> dict:
    K = _require(cfg, "k")
    profile = gaussian_profile(K)
    r0 = float(cfg["r0"])
    run = run_characteristic(profile, r0, float(cfg["t_max"]),
                             tol=float(cfg["tol"]), d_cap=float(cfg["d_cap"]))
    blow = detect_blowup(run)
    lam0, D0 = profile_divergences(profile, r0)
    violation = None
    if len(run.crossing_times) >= 1 and not blow.detected:
        violation = sandwich_check(run, max_arcs=6)
    _emit_trajectory(out_dir, run)
    return {
        "mode": "oracle-run",
        "inputs": {"k": K, "r0": r0, "t_max": cfg["t_max"], "tol": cfg["tol"],
                   "d_cap": cfg["d_cap"]},
        "start": {"lambda0": lam0, "div_v0": D0},
        "revolutions": count_revolutions_oracle(run),
        "crossing_times": [float(t) for t in run.crossing_times],
        "crossing_lambdas": [float(x) for x in run.crossing_lambdas],
        "blowup": {"detected": blow.detected, "t_star": blow.t_star,
                   "method": blow.method},
        "sandwich_violation": violation,
        "status": run.trajectory.status,
    }


def _cmd_sweep(cfg: dict, out_dir: Path) -> dict:
    K = _require(cfg, "k")
    profile = gaussian_profile(K)
    r_min, r_max, n_r = float(cfg["r_min"]), float(cfg["r_max"]), int(cfg["n_r"])
    if not (0.0 <= r_min < r_max) or n_r < 2:
        raise ConfigError("sweep requires 0 <= r_min < r_max and n_r >= 2")
    grid = list(np.linspace(r_min, r_max, n_r))
    blow = blowup_sweep(profile, grid, t_max=float(cfg["t_max"]), tol=float(cfg["tol"]))
    detected = [(r, t) for r, t in blow if t is not None]
    t_min = min((t for _, t in detected), default=None)
    r_at = next((r for r, t in detected if t == t_min), None)
    life = guaranteed_field_lifetime(profile, grid)
    _write_csv(
        out_dir / "sweep.csv",
        ("r0", "blowup_time", "T_lower"),
        [
            (r, blow[i][1] if blow[i][1] is not None else np.nan, life.per_radius[i][1])
            for i, r in enumerate(grid)
        ],
    )
    caveat = None
    if t_min is None:
        caveat = (
            "no blow-up detected within t_max along exact characteristics; "
            "externally reported breaking times for this pulse may be in "
            "unscaled units and are not directly comparable"
        )
    return {
        "mode": "sweep",
        "inputs": {"k": K, "r_min": r_min, "r_max": r_max, "n_r": n_r,
                   "t_max": cfg["t_max"], "tol": cfg["tol"]},
        "min_blowup_time": t_min,
        "r_at_min_blowup": r_at,
        "guaranteed_lifetime": life.T_star if np.isfinite(life.T_star) else None,
        "r_at_min_lifetime": life.r_at_min,
        "caveat": caveat,
    }


_HANDLERS = {
    "criterion-1d": _cmd_criterion_1d,
    "first-period": _cmd_first_period,
    "gauss-pulse": _cmd_gauss_pulse,
    "count-revolutions": _cmd_count_revolutions,
    "lifetime": _cmd_lifetime,
    "oracle-run": _cmd_oracle_run,
    "sweep": _cmd_sweep,
}

_DEFAULTS = {
    "criterion-1d": {},
    "first-period": {"curl_sq": 0.0},
    "gauss-pulse": {},
    "count-revolutions": {"sigma1": DEFAULT_SIGMA1, "sigma2": DEFAULT_SIGMA2,
                          "max_rev": 16, "start_lambda": None},
    "lifetime": {"sigma1": DEFAULT_SIGMA1, "sigma2": DEFAULT_SIGMA2,
                 "max_rev": 16, "start_lambda": None},
    "oracle-run": {"r0": 0.0, "t_max": 40.0, "tol": 1e-10, "d_cap": 1e6},
    "sweep": {"r_min": 0.0, "r_max": 3.0, "n_r": 16, "t_max": 200.0, "tol": 1e-8},
}


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="coldplasma",
        description="Guaranteed smoothness/blow-up bounds for cold-plasma oscillations",
    )
    ap.add_argument("--version", action="version", version=f"coldplasma {__version__}")
    sub = ap.add_subparsers(dest="mode", required=True)

    def add(mode, *specs):
        p = sub.add_parser(mode)
        p.add_argument("--config", help="JSON config file (flags override it)")
        p.add_argument("--out-dir", default=None,
                       help="output directory (default: $COLDPLASMA_OUT or '.')")
        for name, typ, hlp in specs:
            p.add_argument(f"--{name.replace('_', '-')}", dest=name, type=typ,
                           default=None, help=hlp)
        return p

    add("criterion-1d", ("v0_prime", float, "initial velocity derivative"),
        ("e0_prime", float, "initial field derivative"))
    add("first-period", ("div_v0", float, "initial velocity divergence"),
        ("curl_sq", float, "squared curl norm"),
        ("div_e0", float, "initial field divergence"))
    add("gauss-pulse", ("k", float, "pulse amplitude"))
    add("count-revolutions", ("k", float, "pulse amplitude"),
        ("start_lambda", float, "start divergence override (default 2K)"),
        ("sigma1", float, "lower-family sigma"), ("sigma2", float, "upper-family sigma"),
        ("max_rev", int, "revolution cap"))
    add("lifetime", ("k", float, "pulse amplitude"),
        ("start_lambda", float, "start divergence override (default 2K)"),
        ("sigma1", float, "lower-family sigma"), ("sigma2", float, "upper-family sigma"),
        ("max_rev", int, "revolution cap"))
    add("oracle-run", ("k", float, "pulse amplitude"), ("r0", float, "starting radius"),
        ("t_max", float, "integration horizon"), ("tol", float, "integrator tolerance"),
        ("d_cap", float, "blow-up guard magnitude"))
    add("sweep", ("k", float, "pulse amplitude"), ("r_min", float, "grid start"),
        ("r_max", float, "grid end"), ("n_r", int, "grid size"),
        ("t_max", float, "integration horizon"), ("tol", float, "integrator tolerance"))
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    ap = _build_parser()
    ns = ap.parse_args(argv)
    mode = ns.mode
    cli_cfg = {k: v for k, v in vars(ns).items() if k not in ("mode", "config", "out_dir")}

    try:
        file_cfg = _load_config_file(ns.config, mode) if ns.config else {}
        cfg = _merge(_DEFAULTS[mode], file_cfg, cli_cfg)
        unknown = set(cfg) - _ALLOWED_KEYS[mode]
        if unknown:
            raise ConfigError(f"unknown parameters for {mode}: {sorted(unknown)}")
        out_dir = Path(ns.out_dir or os.environ.get("COLDPLASMA_OUT", "."))
        # validate the full pipeline inputs up front: no partial side effects
        handler = _HANDLERS[mode]
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    t0 = time.perf_counter()
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        report = handler(cfg, out_dir)
    except (ConfigError, ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (QuadratureError, RuntimeError, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    _write_report(out_dir, report)
    elapsed = time.perf_counter() - t0
    print(f"{mode}: wrote {out_dir / 'report.json'} ({elapsed:.2f}s)", file=sys.stderr)
    print(json.dumps(report, sort_keys=True, indent=2))
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
