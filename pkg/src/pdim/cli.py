"""Command line front end.

Subcommands:

* ``estimate``  growth tables, pressure curves, and dimension estimates for
  one (system, potential) pair described by a JSON config.
* ``verify``    run a named verification suite and report pass/fail lines.
* ``sweep``     pressure values over an explicit grid of s exponents.
* ``oracle``    brute-force cross-checks of the greedy bounds on small
  random instances.

All output is deterministic for a fixed config and seed.  CSV columns are
``system,potential,estimator,n,scale,s,log_value,pressure_estimate,exact``;
floats are written with ``repr`` so values round-trip exactly.

Exit codes: 0 success, 1 verification or sandwich failure, 2 usage or
config error, 3 candidate budget exceeded.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from dataclasses import dataclass

import numpy as np

from .theorems import SUITE_NAMES, run_suite
from .dimension import GrowthTable, classify_jump, dimension_estimate, pressure_curve
from .partition import (
    Estimator,
    exact_separated_value,
    exact_spanning_value,
    make_instance,
    separated_lower_bound,
    spanning_upper_bound,
)
from .potentials import (
    Birkhoff,
    ConstantDrift,
    MatrixCocycle,
    add,
    scale,
    symbol_weights,
    zero_potential,
)
from .symbolic import deflated_scale, exact_growth_table
from .systems import (
    BudgetExceededError,
    Contraction,
    DoublingMap,
    FullShift,
    Rotation,
    SFT,
    ShiftSystem,
    System,
    real,
)

CSV_HEADER = ("system", "potential", "estimator", "n", "scale", "s",
              "log_value", "pressure_estimate", "exact")


class ConfigError(Exception):
    pass


def _fmt(v) -> str:
    if v is None or v == "":
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def thread_count() -> int:
    """Validated PDIM_THREADS value; the pipeline itself runs serially."""
    raw = os.environ.get("PDIM_THREADS")
    if raw is None:
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError(f"PDIM_THREADS must be a positive integer, got {raw!r}")
    if n < 1:
        raise ConfigError(f"PDIM_THREADS must be a positive integer, got {raw!r}")
    return n


# ---------------------------------------------------------------------------
# config parsing


def load_config(path: str) -> dict:
    try:
        with open(path) as f:
            cfg = json.load(f)
    except OSError as e:
        raise ConfigError(f"cannot read config: {e}")
    except json.JSONDecodeError as e:
        raise ConfigError(f"config is not valid JSON: {e}")
    if not isinstance(cfg, dict):
        raise ConfigError("config must be a JSON object")
    allowed = {"system", "potential", "n_range", "scales", "s_grid", "seed",
               "budget", "estimators", "max_rows", "window_frac"}
    unknown = set(cfg) - allowed
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    for key in ("system", "n_range", "scales"):
        if key not in cfg:
            raise ConfigError(f"config key {key!r} is required")
    return cfg


def build_system(spec: dict) -> System:
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ConfigError("system must be an object with a 'kind'")
    kind = spec["kind"]
    try:
        if kind == "full_shift":
            return FullShift(int(spec.get("k", 2)))
        if kind == "sft":
            return SFT(tuple(tuple(int(v) for v in row) for row in spec["matrix"]))
        if kind == "doubling":
            return DoublingMap()
        if kind == "rotation":
            return Rotation(float(spec.get("theta", 0.125)))
        if kind == "contraction":
            return Contraction(float(spec.get("c", 0.5)), float(spec.get("fixed", 0.0)))
    except (KeyError, TypeError, ValueError) as e:
        raise ConfigError(f"bad system spec: {e}")
    raise ConfigError(f"unknown system kind {kind!r}")


_BIRKHOFF_FNS = {
    "x": lambda p: p.x,
    "cos2pi": lambda p: math.cos(2.0 * math.pi * p.x),
}


def build_potential(spec: dict | None, system: System):
    if spec is None:
        return zero_potential(system)
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ConfigError("potential must be an object with a 'kind'")
    kind = spec["kind"]
    try:
        if kind == "zero":
            return zero_potential(system)
        if kind == "constant_drift":
            return ConstantDrift(float(spec["a"]), system)
        if kind == "symbol_weights":
            if not isinstance(system, ShiftSystem):
                raise ConfigError("symbol_weights needs a shift system")
            return symbol_weights(system, [float(v) for v in spec["table"]])
        if kind == "birkhoff":
            fn_name = spec.get("fn", "x")
            if fn_name == "indicator":
                lo, hi = float(spec["lo"]), float(spec["hi"])
                fn = lambda p, lo=lo, hi=hi: 1.0 if lo <= p.x < hi else 0.0
            elif fn_name in _BIRKHOFF_FNS:
                fn = _BIRKHOFF_FNS[fn_name]
            else:
                raise ConfigError(f"unknown birkhoff fn {fn_name!r}")
            if isinstance(system, ShiftSystem):
                raise ConfigError("birkhoff coordinate functions need a metric system")
            return Birkhoff(phi=fn, system=system, name=fn_name)
        if kind == "matrix_cocycle":
            if not isinstance(system, ShiftSystem):
                raise ConfigError("matrix_cocycle needs a shift system")
            mats = tuple(spec["mats"])
            return MatrixCocycle(mats, system)
        if kind == "sum":
            terms = [build_potential(t, system) for t in spec["terms"]]
            out = terms[0]
            for t in terms[1:]:
                out = add(out, t)
            return out
        if kind == "scale":
            return scale(float(spec["lam"]), build_potential(spec["inner"], system))
    except ConfigError:
        raise
    except (KeyError, TypeError, ValueError, IndexError) as e:
        raise ConfigError(f"bad potential spec: {e}")
    raise ConfigError(f"unknown potential kind {kind!r}")


def _parse_n_range(spec) -> list[int]:
    if isinstance(spec, list):
        ns = [int(v) for v in spec]
    elif isinstance(spec, dict):
        try:
            start, stop = int(spec["start"]), int(spec["stop"])
        except KeyError as e:
            raise ConfigError(f"n_range needs {e} key")
        step = int(spec.get("step", 1))
        ns = list(range(start, stop + 1, step))  # stop is inclusive
    else:
        raise ConfigError("n_range must be a list or {start, stop, step}")
    if not ns or any(n < 1 for n in ns) or sorted(ns) != ns:
        raise ConfigError("n_range must be increasing positive integers")
    return ns


def _parse_scales(spec) -> tuple[str, list]:
    if not isinstance(spec, dict) or set(spec) not in ({"k"}, {"eps"}):
        raise ConfigError("scales must be {'k': [...]} or {'eps': [...]}")
    if "k" in spec:
        ks = [int(v) for v in spec["k"]]
        if any(k < 0 for k in ks):
            raise ConfigError("scale indices must be >= 0")
        return "k", ks
    eps = [float(v) for v in spec["eps"]]
    if any(not 0.0 < e for e in eps):
        raise ConfigError("eps scales must be positive")
    return "eps", eps


def _parse_s_grid(spec) -> list[float]:
    if spec is None:
        return [round(0.2 * i, 10) for i in range(1, 11)]
    if isinstance(spec, list):
        out = [float(v) for v in spec]
    elif isinstance(spec, dict):
        try:
            out = [float(v) for v in
                   np.linspace(spec["start"], spec["stop"], int(spec["steps"]))]
        except KeyError as e:
            raise ConfigError(f"s_grid needs {e} key")
    else:
        raise ConfigError("s_grid must be a list or {start, stop, steps}")
    if any(s <= 0 for s in out):
        raise ConfigError("s exponents must be positive")
    return out


# ---------------------------------------------------------------------------
# table construction shared by estimate and sweep


def _collect_tables(cfg: dict) -> tuple[System, object, list[GrowthTable]]:
    system = build_system(cfg["system"])
    potential = build_potential(cfg.get("potential"), system)
    ns = _parse_n_range(cfg["n_range"])
    mode, scales = _parse_scales(cfg["scales"])
    budget = int(cfg.get("budget", 2_000_000))
    estimators = [Estimator(int(v)) for v in cfg.get("estimators", [3, 2])]

    samples = []
    if mode == "k":
        if not isinstance(system, ShiftSystem):
            raise ConfigError("integer scale indices need a shift system")
        for k in scales:
            samples.extend(exact_growth_table(system, potential, k, ns))
    else:
        bad = [e for e in estimators if e not in (Estimator.SPANNING, Estimator.SEPARATED)]
        if bad:
            raise ConfigError(
                "metric-scale estimation supports estimators 2 and 3 only; "
                "cover estimators 1 and 4 need the exact shift backend"
            )
        for eps in scales:
            per_eps = {e: [] for e in estimators}
            for n in ns:
                cand = system.candidate_set(n, eps, budget=budget)
                note = "" if cand.certified else "uncertified-candidates"
                inst = make_instance(system, n, eps, cand.points, potential)
                if Estimator.SEPARATED in per_eps:
                    per_eps[Estimator.SEPARATED].append(
                        separated_lower_bound(inst, note=note))
                if Estimator.SPANNING in per_eps:
                    per_eps[Estimator.SPANNING].append(
                        spanning_upper_bound(inst, note=note))
            for est_samples in per_eps.values():
                samples.extend(est_samples)

    meta = {"system": system.label, "potential": potential.label}
    groups: dict[tuple, list] = {}
    for s in samples:
        groups.setdefault((s.estimator, s.scale), []).append(s)
    tables = [GrowthTable(v, meta) for v in groups.values()]
    return system, potential, tables


def _sample_rows(system, potential, tables) -> list[tuple]:
    rows = []
    for table in tables:
        for s in table.samples:
            rows.append((system.label, potential.label, int(s.estimator), s.n,
                         _fmt(float(s.scale)), "", _fmt(float(s.log_value)), "",
                         _fmt(bool(s.exact))))
    return rows


def _pressure_rows(system, potential, curves) -> list[tuple]:
    rows = []
    for curve in curves:
        for s, v in zip(curve.s_grid, curve.values):
            rows.append((system.label, potential.label, int(curve.estimator), "",
                         "", _fmt(float(s)), "", _fmt(float(v)), ""))
    return rows


def _write_csv(path: str, rows: list[tuple], max_rows: int | None) -> None:
    truncated = max_rows is not None and len(rows) > max_rows
    if truncated:
        rows = rows[:max_rows]
    with open(path, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(CSV_HEADER)
        w.writerows(rows)
        if truncated:
            w.writerow(("TRUNCATED", "", "", "", "", "", "", "", ""))


def _curves(tables, s_grid, window_frac):
    by_est: dict[int, list] = {}
    for t in tables:
        est = t.samples[0].estimator
        by_est.setdefault(int(est), []).append(t)
    return [pressure_curve(ts, s_grid, window_frac) for _, ts in sorted(by_est.items())]


# ---------------------------------------------------------------------------
# subcommands


def cmd_estimate(args) -> int:
    cfg = load_config(args.config)
    s_grid = _parse_s_grid(cfg.get("s_grid"))
    window_frac = float(cfg.get("window_frac", 0.5))
    system, potential, tables = _collect_tables(cfg)
    curves = _curves(tables, s_grid, window_frac)

    rows = _sample_rows(system, potential, tables) + _pressure_rows(system, potential, curves)
    max_rows = cfg.get("max_rows")
    _write_csv(args.out, rows, None if max_rows is None else int(max_rows))

    print(f"system={system.label} potential={potential.label} rows={len(rows)}")
    for curve in curves:
        best = None
        for t in tables:
            if t.samples[0].estimator != curve.estimator or len(t.samples) < 4:
                continue
            est = dimension_estimate(t, window_frac)
            if best is None or est.s0_hat > best.s0_hat:
                best = est
        if best is not None:
            print(f"estimator={int(curve.estimator)} dimension={best.s0_hat!r} "
                  f"window=[{best.window[0]}..{best.window[1]}] "
                  f"stderr={best.stderr!r} method={best.method}")
        jump = classify_jump(curve)
        lo, hi = jump.bracket
        print(f"estimator={int(curve.estimator)} jump_bracket=[{lo!r}, {hi!r}] "
              f"monotone={str(jump.monotone).lower()}")
    return 0


def cmd_sweep(args) -> int:
    if args.steps < 2 or not 0.0 < args.s_min < args.s_max:
        raise ConfigError("sweep needs 0 < s-min < s-max and steps >= 2")
    cfg = load_config(args.config)
    window_frac = float(cfg.get("window_frac", 0.5))
    s_grid = [float(v) for v in np.linspace(args.s_min, args.s_max, args.steps)]
    system, potential, tables = _collect_tables(cfg)
    curves = _curves(tables, s_grid, window_frac)
    rows = _pressure_rows(system, potential, curves)
    max_rows = cfg.get("max_rows")
    _write_csv(args.out, rows, None if max_rows is None else int(max_rows))
    print(f"system={system.label} potential={potential.label} rows={len(rows)}")
    return 0


def cmd_verify(args) -> int:
    reports = run_suite(args.suite, seed=args.seed)
    lines = [r.line() for r in reports]
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as f:
            f.write(text)
    sys.stdout.write(text)
    failed = [r for r in reports if not r.passed]
    print(f"{len(reports) - len(failed)}/{len(reports)} checks passed")
    return 1 if failed else 0


def cmd_oracle(args) -> int:
    if args.max_points > 20:
        print("error: oracle supports at most 20 candidate points", file=sys.stderr)
        return 2
    if args.max_points < 2 or args.trials < 1:
        print("error: need max-points >= 2 and trials >= 1", file=sys.stderr)
        return 2
    rng = np.random.default_rng(args.seed)
    sep_gaps, span_gaps = [], []
    worst_sandwich = -math.inf
    shift = FullShift(2)
    all_words = [shift.representative(w) for w in shift.admissible_words(5)]
    for trial in range(args.trials):
        if trial % 2 == 0:
            system = Rotation(float(rng.uniform(0.05, 0.45)))
            size = int(rng.integers(3, args.max_points + 1))
            pts = [real(float(v)) for v in rng.random(size)]
            a, b = rng.normal(scale=0.5, size=2)
            pot = Birkhoff(
                phi=lambda p, a=a, b=b: a * math.cos(2 * math.pi * p.x) + b,
                system=system, name="trig")
            n = int(rng.integers(1, 5))
            eps = float(rng.uniform(0.05, 0.45))
        else:
            system = shift
            size = int(rng.integers(3, min(args.max_points, 16) + 1))
            idx = rng.choice(len(all_words), size=size, replace=False)
            pts = [all_words[i] for i in sorted(idx)]
            table = rng.normal(scale=0.5, size=2)
            pot = symbol_weights(shift, table)
            n = int(rng.integers(1, 4))
            eps = deflated_scale(int(rng.integers(0, 3)))
        inst = make_instance(system, n, eps, pts, pot)
        greedy_val = separated_lower_bound(inst).log_value
        exact_sep = exact_separated_value(inst).log_value
        exact_span = exact_spanning_value(inst).log_value
        greedy_span = spanning_upper_bound(inst).log_value
        sep_gaps.append(exact_sep - greedy_val)
        span_gaps.append(greedy_span - exact_span)
        worst_sandwich = max(
            worst_sandwich,
            greedy_val - exact_sep,       # greedy lower bound must not exceed optimum
            exact_span - exact_sep,       # spanning optimum sits below separated optimum
            exact_span - greedy_span,     # greedy cover must not undercut optimum
        )
    print(f"trials={args.trials} max_points={args.max_points} seed={args.seed}")
    print(f"separated gap: mean={float(np.mean(sep_gaps))!r} max={float(np.max(sep_gaps))!r}")
    print(f"spanning gap: mean={float(np.mean(span_gaps))!r} max={float(np.max(span_gaps))!r}")
    print(f"worst sandwich violation: {float(worst_sandwich)!r}")
    if worst_sandwich > 1e-9:
        print("sandwich violated", file=sys.stderr)
        return 1
    return 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pdim",
        description="Pressure-dimension estimation for model dynamical systems.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_est = sub.add_parser("estimate", help="growth tables and dimension estimates")
    p_est.add_argument("--config", required=True, help="JSON config path")
    p_est.add_argument("--out", required=True, help="CSV output path")
    p_est.set_defaults(func=cmd_estimate)

    p_ver = sub.add_parser("verify", help="run a verification suite")
    p_ver.add_argument("--suite", required=True, choices=SUITE_NAMES + ("all",))
    p_ver.add_argument("--seed", type=int, default=0)
    p_ver.add_argument("--out", help="also write the report lines to this file")
    p_ver.set_defaults(func=cmd_verify)

    p_swp = sub.add_parser("sweep", help="pressure values over a grid of s exponents")
    p_swp.add_argument("--config", required=True)
    p_swp.add_argument("--s-min", type=float, required=True)
    p_swp.add_argument("--s-max", type=float, required=True)
    p_swp.add_argument("--steps", type=int, required=True)
    p_swp.add_argument("--out", required=True)
    p_swp.set_defaults(func=cmd_sweep)

    p_orc = sub.add_parser("oracle", help="brute-force cross-checks on small instances")
    p_orc.add_argument("--max-points", type=int, default=12)
    p_orc.add_argument("--trials", type=int, default=50)
    p_orc.add_argument("--seed", type=int, default=0)
    p_orc.set_defaults(func=cmd_oracle)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        thread_count()
        return args.func(args)
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except BudgetExceededError as e:
        print(f"budget exceeded: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
