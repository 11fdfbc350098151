"""Experiment orchestration: config files, CLI subcommands, CSV persistence.

Config files are flat key-value text with dotted section prefixes::

    model.n = 1
    model.a0 = 1.0
    grid.r_max = 210.0
    data.family = gaussian
    ...

Unknown keys are errors.  All CSV output is comma-separated with '.' decimals,
a header row, LF line endings, and floats printed with repr() so every value
round-trips through text exactly.

Exit codes: 0 for completed and blown-up runs alike (blow-up is a result,
not a failure), 1 for invalid configs, 2 for overflow-invalidated runs.
The environment variable DAMPWAVE_OUT overrides the output directory.
"""

from __future__ import annotations

import argparse
import csv
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .audit import check_weight_inequalities, feasible_parameters
from .coefficients import (
    InvalidConfig,
    ModelConfig,
    critical_exponent,
    decay_exponent_weighted_energy,
    decay_exponent_weighted_l2,
    derived_constants,
)
from .energetics import OverflowInvalidRun, apriori_functional, fit_decay_rate, initial_norm_squared
from .solver import GridSpec, InitialData, run

SERIES_COLUMNS = [
    "t", "l2", "weighted_l2", "energy", "weighted_energy", "j_abu2", "e_psi",
    "region_energy", "m_partial1", "m_partial2", "max_abs_u", "boundary_ratio",
]
SWEEP_COLUMNS = [
    "p", "amplitude", "status", "blowup_time", "reason",
    "fitted_slope_weighted_l2", "fitted_slope_weighted_energy",
    "M_final", "I0_squared",
]


class ConfigError(ValueError):
    """Malformed or inconsistent experiment configuration."""


@dataclass(frozen=True)
class ExperimentConfig:
    model: ModelConfig
    grid: GridSpec
    data: InitialData
    rho: float
    mu: float
    output_dir: str | None = None
    seed: int = 0


_KEY_TYPES = {
    "model.n": int,
    "model.a0": float,
    "model.alpha": float,
    "model.beta": float,
    "model.p": float,
    "model.sign": str,
    "model.delta": float,
    "model.validation_mode": bool,
    "grid.mode": str,
    "grid.r_max": float,
    "grid.nr": int,
    "grid.cfl": float,
    "grid.t_end": float,
    "grid.record_every": float,
    "data.family": str,
    "data.amplitude": float,
    "data.width": float,
    "data.center": float,
    "data.velocity_amplitude": float,
    "data.table_file": str,
    "run.rho": float,
    "run.mu": float,
    "run.seed": int,
    "run.out_dir": str,
}
_REQUIRED = [
    "model.n", "model.a0", "model.alpha", "model.beta", "model.p", "model.delta",
    "grid.r_max", "grid.nr", "grid.t_end", "data.family", "data.amplitude",
]


def _parse_value(key: str, raw: str):
    want = _KEY_TYPES[key]
    try:
        if want is bool:
            if raw.lower() in ("true", "1", "yes"):
                return True
            if raw.lower() in ("false", "0", "no"):
                return False
            raise ValueError(raw)
        return want(raw)
    except ValueError as exc:
        raise ConfigError(f"cannot parse {key} = {raw!r} as {want.__name__}") from exc


def parse_config_text(text: str, base_dir: Path | None = None) -> ExperimentConfig:
    values = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {body!r}")
        key, raw = (part.strip() for part in body.split("=", 1))
        if key not in _KEY_TYPES:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        values[key] = _parse_value(key, raw)
    missing = [k for k in _REQUIRED if k not in values]
    if missing:
        raise ConfigError(f"missing required keys: {', '.join(missing)}")

    model = ModelConfig(
        n=values["model.n"],
        a0=values["model.a0"],
        alpha=values["model.alpha"],
        beta=values["model.beta"],
        p=values["model.p"],
        sign=values.get("model.sign", "signed"),
        delta=values.get("model.delta", 0.1),
        validation_mode=values.get("model.validation_mode", False),
    )
    grid = GridSpec(
        r_max=values["grid.r_max"],
        nr=values["grid.nr"],
        cfl=values.get("grid.cfl", 0.9),
        t_end=values["grid.t_end"],
        record_every=values.get("grid.record_every", 1.0),
        mode=values.get("grid.mode", "radial"),
    )
    table_u0 = table_u1 = None
    if "data.table_file" in values:
        path = Path(values["data.table_file"])
        if base_dir is not None and not path.is_absolute():
            path = base_dir / path
        arr = np.loadtxt(path, delimiter=",", ndmin=2)
        table_u0 = arr[:, 0]
        table_u1 = arr[:, 1] if arr.shape[1] > 1 else None
    data = InitialData(
        family=values["data.family"],
        amplitude=values["data.amplitude"],
        width=values.get("data.width", 1.0),
        center=values.get("data.center", 0.0),
        velocity_amplitude=values.get("data.velocity_amplitude", 0.0),
        table_u0=table_u0,
        table_u1=table_u1,
    )
    k = derived_constants(model) if model.a0 > 0 else None
    rho = values.get("run.rho", min(0.3, 0.5 * (1.0 - model.alpha - model.beta)))
    mu = values.get("run.mu", k.A if k is not None else 0.0)
    if not (0.0 < rho < 1.0 - model.alpha - model.beta):
        raise ConfigError(
            f"run.rho must lie in (0, 1-alpha-beta) = (0, {1.0 - model.alpha - model.beta:g}), got {rho}"
        )
    if k is not None and not (0.0 < mu < 2.0 * k.A):
        raise ConfigError(f"run.mu must lie in (0, 2A) = (0, {2.0 * k.A:g}), got {mu}")
    return ExperimentConfig(
        model=model,
        grid=grid,
        data=data,
        rho=rho,
        mu=mu,
        output_dir=values.get("run.out_dir"),
        seed=values.get("run.seed", 0),
    )


def parse_config_file(path) -> ExperimentConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config_text(text, base_dir=path.parent)


# -- CSV helpers --------------------------------------------------------------

def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, str):
        return x
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return repr(float(x))


def _write_csv(path: Path, header, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def write_series_csv(path: Path, records):
    rows = [
        [rec.t, rec.l2, rec.weighted_l2, rec.energy, rec.weighted_energy,
         rec.j_abu2, rec.e_psi, rec.region_energy, rec.m_partial1,
         rec.m_partial2, rec.max_abs_u, rec.boundary_ratio]
        for rec in records
    ]
    _write_csv(path, SERIES_COLUMNS, rows)


def write_key_value_csv(path: Path, items):
    _write_csv(path, ["key", "value"], [[k, v] for k, v in items])


# -- run ----------------------------------------------------------------------

def run_experiment(exp: ExperimentConfig):
    """Execute one run; returns (RunResult, summary key/value list)."""
    result = run(exp.model, exp.grid, exp.data, rho=exp.rho)
    status = "global" if result.status == "completed" else "blow-up"
    t = np.array([rec.t for rec in result.records])
    window = (exp.grid.t_end / 10.0, exp.grid.t_end)
    slope_l2 = slope_en = None
    if status == "global":
        try:
            slope_l2 = fit_decay_rate(t, [r.weighted_l2 for r in result.records], window).slope
            slope_en = fit_decay_rate(t, [r.weighted_energy for r in result.records], window).slope
        except ValueError:
            pass  # zero data or too-short series: slopes stay empty
    m_final = apriori_functional(result.records) if result.records else 0.0
    i0sq = initial_norm_squared(exp.data, exp.model, exp.grid)
    m = exp.model
    k = derived_constants(m)
    summary = [
        ("n", m.n), ("a0", m.a0), ("alpha", m.alpha), ("beta", m.beta),
        ("p", m.p), ("sign", m.sign), ("delta", m.delta),
        ("A", k.A), ("eps", k.eps), ("B", k.B), ("p_c", k.p_c),
        ("delta1", k.delta1), ("delta2", k.delta2), ("delta3", k.delta3),
        ("delta4", k.delta4), ("sigma", k.sigma),
        ("gamma1", k.gamma1), ("gamma2", k.gamma2),
        ("rho", exp.rho), ("mu", exp.mu),
        ("I0_squared", i0sq),
        ("status", status),
        ("blowup_time", result.blowup_time),
        ("t_end", exp.grid.t_end),
        ("fit_t_lo", window[0]), ("fit_t_hi", window[1]),
        ("fitted_slope_weighted_l2", slope_l2),
        ("fitted_slope_weighted_energy", slope_en),
        ("reference_slope_weighted_l2", decay_exponent_weighted_l2(m)),
        ("reference_slope_weighted_energy", decay_exponent_weighted_energy(m)),
        ("M_final", m_final),
        ("max_boundary_ratio", result.max_boundary_ratio),
    ]
    return result, summary


def _resolve_out_dir(cli_out, exp_out) -> Path:
    out = os.environ.get("DAMPWAVE_OUT") or cli_out or exp_out or "."
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def cmd_run(args) -> int:
    try:
        exp = parse_config_file(args.config)
    except (ConfigError, InvalidConfig) as exc:
        print(f"invalid config: {exc}", file=sys.stderr)
        return 1
    out = _resolve_out_dir(args.out, exp.output_dir)
    try:
        result, summary = run_experiment(exp)
    except OverflowInvalidRun as exc:
        print(f"run invalidated: {exc}", file=sys.stderr)
        return 2
    except InvalidConfig as exc:
        print(f"invalid config: {exc}", file=sys.stderr)
        return 1
    write_series_csv(out / "series.csv", result.records)
    write_key_value_csv(out / "summary.csv", summary)
    print(f"status: {dict(summary)['status']}; wrote {out / 'series.csv'} and {out / 'summary.csv'}")
    return 0


# -- sweep --------------------------------------------------------------------

def sweep_row(exp: ExperimentConfig, p: float, amplitude: float):
    """Classify one (p, amplitude) cell; never raises."""
    try:
        model = replace(exp.model, p=p)
        data = replace(exp.data, amplitude=amplitude)
        result = run(model, exp.grid, data, rho=exp.rho)
        i0sq = initial_norm_squared(data, model, exp.grid)
    except (InvalidConfig, ConfigError) as exc:
        return [p, amplitude, "invalid", None, str(exc), None, None, None, None]
    except OverflowInvalidRun as exc:
        return [p, amplitude, "invalid", None, f"overflow: {exc}", None, None, None, None]
    m_final = apriori_functional(result.records) if result.records else 0.0
    if result.status == "blew-up":
        return [p, amplitude, "blow-up", result.blowup_time, None, None, None, m_final, i0sq]
    t = np.array([rec.t for rec in result.records])
    window = (exp.grid.t_end / 10.0, exp.grid.t_end)
    slope_l2 = slope_en = None
    try:
        slope_l2 = fit_decay_rate(t, [r.weighted_l2 for r in result.records], window).slope
        slope_en = fit_decay_rate(t, [r.weighted_energy for r in result.records], window).slope
    except ValueError:
        pass
    return [p, amplitude, "global", None, None, slope_l2, slope_en, m_final, i0sq]


def _sweep_cell(packed):
    exp, p, amp = packed
    return sweep_row(exp, p, amp)


def run_sweep(exp: ExperimentConfig, p_list, amp_list, jobs: int = 1):
    cells = [(exp, p, amp) for p in p_list for amp in amp_list]
    if jobs > 1 and len(cells) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_sweep_cell, cells))
    else:
        rows = [_sweep_cell(c) for c in cells]
    return rows


def _parse_float_list(text: str):
    items = [part.strip() for part in text.split(",") if part.strip()]
    return [float(part) for part in items]


def cmd_sweep(args) -> int:
    try:
        exp = parse_config_file(args.config)
        p_list = _parse_float_list(args.p)
        amp_list = _parse_float_list(args.amp)
    except (ConfigError, InvalidConfig, ValueError) as exc:
        print(f"invalid config: {exc}", file=sys.stderr)
        return 1
    out = _resolve_out_dir(args.out, exp.output_dir)
    rows = run_sweep(exp, p_list, amp_list, jobs=args.jobs)
    _write_csv(out / "sweep.csv", SWEEP_COLUMNS, rows)
    print(f"wrote {out / 'sweep.csv'} ({len(rows)} rows)")
    return 0


# -- audit --------------------------------------------------------------------

def cmd_audit(args) -> int:
    try:
        p = args.p
        if p is None:
            pc = critical_exponent(args.n, args.alpha)
            cap = args.n / (args.n - 2.0) if args.n >= 3 else float("inf")
            p = min(pc + 1.0, cap)
        cfg = ModelConfig(n=args.n, a0=args.a0, alpha=args.alpha, beta=args.beta,
                          p=p, delta=args.delta)
        k = derived_constants(cfg)
    except InvalidConfig as exc:
        print(f"invalid parameters: {exc}", file=sys.stderr)
        return 1
    out = _resolve_out_dir(args.out, None)
    ineq = check_weight_inequalities(cfg, seed=args.seed)
    feas = feasible_parameters(cfg)
    constants = [
        ("n", cfg.n), ("a0", cfg.a0), ("alpha", cfg.alpha), ("beta", cfg.beta),
        ("delta", cfg.delta), ("p", cfg.p),
        ("A", k.A), ("eps", k.eps), ("B", k.B), ("p_c", k.p_c),
        ("delta1", k.delta1), ("delta2", k.delta2), ("delta3", k.delta3),
        ("delta4", k.delta4), ("sigma", k.sigma),
        ("gamma1", k.gamma1), ("gamma2", k.gamma2),
    ]
    gamma_note = "negative (global regime)" if k.gamma1 < 0 and k.gamma2 < 0 else "NOT negative"
    lines = ["derived constants", "-----------------"]
    lines += [f"{name} = {_fmt(val)}" for name, val in constants]
    lines.append(f"gamma1, gamma2: {gamma_note}")
    lines.append("")
    lines.append(ineq.render())
    lines.append(feas.render())
    report_text = "\n".join(lines)
    (out / "audit_report.txt").write_text(report_text)
    write_key_value_csv(out / "constants.csv", constants)
    print(report_text)
    print(f"wrote {out / 'audit_report.txt'} and {out / 'constants.csv'}")
    return 0


# -- entry point ---------------------------------------------------------------

def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="dampwave",
        description="damped semilinear wave equation laboratory",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="single run from a config file")
    p_run.add_argument("--config", required=True)
    p_run.add_argument("--out", default=None)
    p_run.set_defaults(func=cmd_run)

    p_sweep = sub.add_parser("sweep", help="classify a (p, amplitude) grid")
    p_sweep.add_argument("--config", required=True)
    p_sweep.add_argument("--p", required=True, help="comma-separated powers")
    p_sweep.add_argument("--amp", required=True, help="comma-separated amplitudes")
    p_sweep.add_argument("--out", default=None)
    p_sweep.add_argument("--jobs", type=int, default=1)
    p_sweep.set_defaults(func=cmd_sweep)

    p_audit = sub.add_parser("audit", help="constants table and inequality audit")
    p_audit.add_argument("--n", type=int, required=True)
    p_audit.add_argument("--a0", type=float, required=True)
    p_audit.add_argument("--alpha", type=float, required=True)
    p_audit.add_argument("--beta", type=float, required=True)
    p_audit.add_argument("--delta", type=float, required=True)
    p_audit.add_argument("--p", type=float, default=None)
    p_audit.add_argument("--seed", type=int, default=0)
    p_audit.add_argument("--out", default=None)
    p_audit.set_defaults(func=cmd_audit)

    args = parser.parse_args(argv)
    return args.func(args)


def cli() -> None:
    sys.exit(main())


if __name__ == "__main__":
    cli()
