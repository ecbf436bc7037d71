"""Command-line front end: simulate, estimate, powercurve and metrics runs
driven by JSON configs, with a manifest written next to every output."""

from __future__ import annotations

import argparse
import json
import math
import re
import sys
import warnings
from pathlib import Path

import numpy as np
import pandas as pd

from . import __version__
from .analysis import fixed_point
from .basis import FitBasis, make_polynomial_basis
from .errors import ConfigError, LocmomError
from .estimators import (
    Grid,
    conditional_moment_nw,
    global_moment_fit,
    increments,
    local_moment_fit,
)
from .fixtures import DAY, ScadaModel, synthetic_scada
from .ingest import RawRecords, aggregate, load_csv
from .kernels import KernelSpec
from .presets import get_preset
from .series import ConditionSeries, SampledSeries
from .simulate import BUILTIN_PROCESSES, ProcessSpec, builtin_process, euler_maruyama

TRUTH_DRIFTS = {
    "ou": lambda x: -x,
    "piecewise": lambda x: -0.5 * x if x <= 0 else -2.0 * x,
}


# ---------------------------------------------------------------- config


def _require(cfg: dict, key: str, path: str):
    if key not in cfg:
        raise ConfigError("required field missing", field=f"{path}.{key}" if path else key)
    return cfg[key]


def build_kernel_spec(entries, path: str) -> KernelSpec:
    if not isinstance(entries, list) or not entries:
        raise ConfigError("expected a nonempty list of kernel entries", field=path)
    families, bandwidths = [], []
    for i, e in enumerate(entries):
        families.append(_require(e, "family", f"{path}[{i}]"))
        bandwidths.append(_require(e, "bandwidth", f"{path}[{i}]"))
    try:
        return KernelSpec(families=tuple(families), bandwidths=tuple(bandwidths))
    except ValueError as exc:
        raise ConfigError(str(exc), field=path) from None


def build_basis(spec: str, path: str = "basis") -> FitBasis:
    m = re.fullmatch(r"polynomial\((\d+)\)", str(spec).strip())
    if not m:
        raise ConfigError(f"unsupported basis spec '{spec}' (expected polynomial(K))", field=path)
    return make_polynomial_basis(int(m.group(1)))


def build_grid(cfg: dict, conditions: ConditionSeries, path: str = "grid") -> Grid:
    if "auto" in cfg:
        a = cfg["auto"]
        return Grid.from_percentiles(
            conditions,
            count=int(a.get("count", 50)),
            lower=float(a.get("lower", 1.0)),
            upper=float(a.get("upper", 99.0)),
        )
    if "regular" in cfg:
        r = cfg["regular"]
        return Grid.regular(
            _require(r, "mins", f"{path}.regular"),
            _require(r, "maxs", f"{path}.regular"),
            _require(r, "counts", f"{path}.regular"),
        )
    if "explicit" in cfg:
        return Grid(points=np.asarray(cfg["explicit"], dtype=float))
    raise ConfigError("grid must contain one of: auto, regular, explicit", field=path)


# ---------------------------------------------------------------- sources


def _process_from_config(pcfg: dict, n_samples, dt, seed, x0) -> ProcessSpec:
    if "name" in pcfg:
        name = pcfg["name"]
        if name not in BUILTIN_PROCESSES:
            valid = ", ".join(sorted(BUILTIN_PROCESSES))
            raise ConfigError(
                f"unknown process '{name}'; valid names: {valid}", field="source.simulate.process.name"
            )
        return builtin_process(name, n_samples=n_samples, dt=dt, seed=seed, x0=x0)
    if "drift_poly" in pcfg:
        dcoef = np.asarray(pcfg["drift_poly"], dtype=float)
        gcoef = np.asarray(pcfg.get("diffusion_poly", [1.0]), dtype=float)
        return ProcessSpec(
            dimension=1,
            drift=lambda x, t: np.polynomial.polynomial.polyval(x, dcoef),
            diffusion=lambda x, t: np.polynomial.polynomial.polyval(x, gcoef),
            n_samples=n_samples, dt=dt, seed=seed, x0=x0,
        )
    raise ConfigError("process needs 'name' or 'drift_poly'", field="source.simulate.process")


def simulate_channels(scfg: dict) -> dict:
    """Run a simulate-source config, returning named SampledSeries (plus 't')."""
    spec = _process_from_config(
        _require(scfg, "process", "source.simulate"),
        n_samples=int(scfg.get("n_samples", 100_000)),
        dt=float(scfg.get("dt", 0.1)),
        seed=int(scfg.get("seed", 0)),
        x0=scfg.get("x0"),
    )
    series = euler_maruyama(spec)
    names = ["x", "y"][: spec.dimension]
    channels = dict(zip(names, series))
    t = np.arange(spec.n_samples) * spec.dt
    channels["t"] = SampledSeries(values=t, dt=spec.dt)
    return channels


def csv_channels(ccfg: dict) -> dict:
    """Load an aligned-series CSV (one column per channel, uniform clock)."""
    path = _require(ccfg, "path", "source.csv")
    dt = float(_require(ccfg, "dt", "source.csv"))
    df = pd.read_csv(path)
    channels = {}
    for col in df.columns:
        if col in ("index",):
            continue
        channels[col] = SampledSeries(values=df[col].to_numpy(dtype=float), dt=dt)
    if "t" not in channels:
        channels["t"] = SampledSeries(values=np.arange(len(df)) * dt, dt=dt)
    return channels


def materialize_source(cfg: dict) -> dict:
    source = _require(cfg, "source", "")
    if "simulate" in source:
        return simulate_channels(source["simulate"])
    if "csv" in source:
        return csv_channels(source["csv"])
    raise ConfigError("source must contain exactly one of: simulate, csv", field="source")


# ---------------------------------------------------------------- commands


def _write_manifest(out_path: Path, cfg: dict):
    manifest = {
        "version": __version__,
        "seed": cfg.get("source", {}).get("simulate", {}).get("seed")
        or cfg.get("source", {}).get("fixture", {}).get("seed"),
        "config": cfg,
    }
    out_path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")


def run_simulate(cfg: dict, out_dir) -> Path:
    """Simulate a process and write a series CSV plus its manifest."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    channels = simulate_channels(_require(_require(cfg, "source", ""), "simulate", "source"))
    t = channels.pop("t")
    df = pd.DataFrame({"index": np.arange(len(t)), "t": t.values})
    for name, s in channels.items():
        df[name] = s.values
    out = out_dir / "series.csv"
    df.to_csv(out, index=False)
    _write_manifest(out_dir / "series.manifest.json", cfg)
    return out


def run_estimate(cfg: dict, out_dir=None) -> pd.DataFrame:
    """Run one estimation config; returns (and optionally writes) the table."""
    method = cfg.get("method", "local")
    if method not in ("np", "global", "local"):
        raise ConfigError(f"unknown method '{method}' (expected np, global or local)", field="method")
    channels = materialize_source(cfg)

    dep_name = _require(cfg, "dependency", "")
    if dep_name not in channels:
        raise ConfigError(f"dependency channel '{dep_name}' not found in source", field="dependency")
    series = channels[dep_name]

    cond_names = list(_require(cfg, "conditions", "")) if method != "global" else []
    for c in cond_names:
        if c not in channels:
            raise ConfigError(f"condition channel '{c}' not found in source", field="conditions")
    if dep_name in cond_names:
        warnings.warn(
            f"channel '{dep_name}' is both dependency and condition", stacklevel=2
        )

    basis = build_basis(cfg.get("basis", "polynomial(1)"))
    orders = [int(n) for n in cfg.get("orders", [1])]
    lags = [int(m) for m in cfg.get("lags", [1])]
    count_floor = float(cfg.get("count_floor", 10.0))

    rows = []
    gcols = [f"g_{c}" for c in cond_names]
    if method == "global":
        for n in orders:
            for m in lags:
                phi = global_moment_fit(series, basis, n=n, m=m)
                tau = m * series.dt
                inc = increments(series, m)
                eff = int((~(inc.missing | series.missing[: inc.values.size])).sum())
                rows.append(
                    {
                        "order": n, "lag": m,
                        **{f"phi_{j}": phi[j] for j in range(basis.size)},
                        **{f"Phi_{j}": phi[j] / (tau * math.factorial(n)) for j in range(basis.size)},
                        "effective_count": eff, "gram_condition": float("nan"),
                        "valid": True, "reason": "",
                    }
                )
    else:
        conditions = ConditionSeries.from_series({c: channels[c] for c in cond_names})
        kernel_key = "np_kernel" if (method == "np" and "np_kernel" in cfg) else "kernel"
        kernel = build_kernel_spec(_require(cfg, kernel_key, ""), kernel_key)
        if kernel.dim != conditions.dim:
            raise ConfigError(
                f"kernel has {kernel.dim} dimensions but {conditions.dim} condition channels", field="kernel"
            )
        grid = build_grid(_require(cfg, "grid", ""), conditions)
        for n in orders:
            for m in lags:
                tau = m * series.dt
                if method == "np":
                    ests = conditional_moment_nw(
                        series, conditions, grid, kernel, n=n, m=m, count_floor=count_floor
                    )
                    for e in ests:
                        rows.append(
                            {
                                **dict(zip(gcols, e.grid_point)),
                                "order": n, "lag": m,
                                "phi_0": e.value,
                                "Phi_0": e.value / (tau * math.factorial(n)),
                                "effective_count": e.effective_count,
                                "gram_condition": float("nan"),
                                "valid": e.valid, "reason": "" if e.valid else "low-count",
                            }
                        )
                else:
                    coeffs = local_moment_fit(
                        series, conditions, grid, kernel, basis,
                        n=n, m=m, count_floor=count_floor,
                    )
                    for c in coeffs:
                        rows.append(
                            {
                                **dict(zip(gcols, c.grid_point)),
                                "order": n, "lag": m,
                                **{f"phi_{j}": c.phi[j] for j in range(basis.size)},
                                **{f"Phi_{j}": c.Phi[j] for j in range(basis.size)},
                                "effective_count": c.effective_count,
                                "gram_condition": c.gram_condition,
                                "valid": c.valid, "reason": c.reason or "",
                            }
                        )
    df = pd.DataFrame(rows)
    if out_dir is not None:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        df.to_csv(out_dir / "estimate.csv", index=False)
        _write_manifest(out_dir / "estimate.manifest.json", cfg)
    return df


def _fixture_records(fcfg: dict) -> RawRecords:
    duration = float(_require(fcfg, "duration_days", "source.fixture")) * DAY
    step_day = fcfg.get("step_day")
    model = ScadaModel(
        step_time=None if step_day is None else float(step_day) * DAY,
        regulated_level=float(fcfg.get("regulated_level", 75.0)),
    )
    df = synthetic_scada(
        duration_s=duration,
        sample_interval=float(fcfg.get("sample_interval", 30.0)),
        seed=int(fcfg.get("seed", 0)),
        model=model,
        gap_fraction=float(fcfg.get("gap_fraction", 0.0)),
        outage=tuple(fcfg["outage"]) if "outage" in fcfg else None,
    )
    return RawRecords(
        timestamps=df["time"].to_numpy(),
        channels={"wind": df["wind"].to_numpy(), "power": df["power"].to_numpy()},
    )


def run_powercurve(cfg: dict, out_dir=None) -> pd.DataFrame:
    """Fixed-point heat map of a power signal conditioned on wind speed and time."""
    source = _require(cfg, "source", "")
    power_col = cfg.get("power_column", "power")
    wind_col = cfg.get("wind_column", "wind")
    if "fixture" in source:
        records = _fixture_records(source["fixture"])
    elif "csv" in source:
        c = source["csv"]
        records = load_csv(
            _require(c, "path", "source.csv"),
            time_column=cfg.get("time_column", "time"),
            channel_columns=[wind_col, power_col],
        )
    else:
        raise ConfigError("source must contain one of: fixture, csv", field="source")

    window = float(cfg.get("aggregate_window", 10.0))
    agg = aggregate(records, window)
    power = agg[power_col]
    wind = agg[wind_col]
    rated = cfg.get("rated_power")
    if rated is not None:
        power = SampledSeries(
            values=power.values / float(rated) * 100.0, dt=power.dt, missing=power.missing
        )
    t = SampledSeries(values=np.arange(len(power)) * window, dt=window)
    conditions = ConditionSeries.from_series({"wind": wind, "time": t})

    kcfg = _require(cfg, "kernel", "")
    kernel = build_kernel_spec(
        [_require(kcfg, "wind", "kernel"), _require(kcfg, "time", "kernel")], "kernel"
    )
    gcfg = _require(cfg, "grid", "")
    wg = _require(gcfg, "wind", "grid")
    tg = _require(gcfg, "time", "grid")
    grid = Grid.regular(
        [float(wg["min"]), float(tg["min"])],
        [float(wg["max"]), float(tg["max"])],
        [int(wg["count"]), int(tg["count"])],
    )

    coeffs = local_moment_fit(
        series=power, conditions=conditions, grid=grid, kernel=kernel,
        basis=make_polynomial_basis(1), n=1, m=1,
        count_floor=float(cfg.get("count_floor", 10.0)),
    )
    rows = []
    for c in coeffs:
        line = fixed_point(c)
        u0, t0 = c.grid_point
        rows.append(
            {
                "t0": t0, "u0": u0,
                "P0": float("nan") if line.fixed_point is None else line.fixed_point,
                "Phi1": line.Phi1, "stable": bool(line.stable), "valid": bool(line.valid),
                "effective_count": c.effective_count,
            }
        )
    df = pd.DataFrame(rows)
    if out_dir is not None:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        df.to_csv(out_dir / "powercurve.csv", index=False)
        _write_manifest(out_dir / "powercurve.manifest.json", cfg)
    return df


def run_metrics(estimate_csv, truth_name: str) -> dict:
    """Compare an estimate table against a named built-in drift truth.

    Assumes a one-dimensional run conditioned on the dependency variable
    itself; the drift is evaluated at x = grid coordinate.
    """
    if truth_name not in TRUTH_DRIFTS:
        valid = ", ".join(sorted(TRUTH_DRIFTS))
        raise ConfigError(f"unknown truth '{truth_name}'; valid names: {valid}", field="truth")
    truth = TRUTH_DRIFTS[truth_name]
    df = pd.read_csv(estimate_csv)
    gcols = [c for c in df.columns if c.startswith("g_")]
    if len(gcols) != 1:
        raise ConfigError("metrics supports exactly one condition dimension", field="estimate")
    phicols = sorted(
        [c for c in df.columns if re.fullmatch(r"Phi_\d+", c)], key=lambda c: int(c.split("_")[1])
    )
    sub = df[df["valid"] == True]  # noqa: E712 - CSV round-trips bools as strings sometimes
    if len(sub) == 0:
        raise ConfigError("no valid rows in estimate table", field="estimate")
    residuals = []
    for _, row in sub.iterrows():
        g = float(row[gcols[0]])
        est = sum(float(row[c]) * g**j for j, c in enumerate(phicols))
        residuals.append(est - truth(g))
    res = np.asarray(residuals)
    return {
        "mean_abs_error": float(np.mean(np.abs(res))),
        "max_abs_error": float(np.max(np.abs(res))),
        "n_points": int(res.size),
        "n_excluded": int(len(df) - len(sub)),
    }


# ---------------------------------------------------------------- argparse


def _load_config(args, kind: str) -> dict:
    if args.config and args.preset:
        raise ConfigError("pass either --config or --preset, not both")
    if args.config:
        cfg = json.loads(Path(args.config).read_text())
    elif args.preset:
        try:
            cfg = get_preset(args.preset)
        except KeyError as exc:
            raise ConfigError(str(exc.args[0]), field="preset") from None
    else:
        raise ConfigError("one of --config or --preset is required")
    if getattr(args, "method", None):
        cfg["method"] = args.method
    if getattr(args, "seed", None) is not None:
        src = cfg.get("source", {})
        for key in ("simulate", "fixture"):
            if key in src:
                src[key]["seed"] = args.seed
    return cfg


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="locmom",
        description="Drift/diffusion reconstruction of stochastic time series",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, method=False):
        p.add_argument("--config", help="path to a JSON run config")
        p.add_argument("--preset", help="name of a built-in preset")
        p.add_argument("--seed", type=int, default=None, help="override the source seed")
        p.add_argument("--out", default="out", help="output directory")
        if method:
            p.add_argument("--method", choices=["np", "global", "local"], default=None)

    common(sub.add_parser("simulate", help="generate a series CSV"))
    common(sub.add_parser("estimate", help="estimate coefficients on a grid"), method=True)
    common(sub.add_parser("powercurve", help="fixed-point heat map for a power signal"))

    pm = sub.add_parser("metrics", help="compare an estimate table against a built-in truth")
    pm.add_argument("--estimate", required=True, help="estimate.csv from the estimate command")
    pm.add_argument("--truth", required=True, help="truth name (ou, piecewise)")
    pm.add_argument("--out", default=None, help="optional output directory")

    args = parser.parse_args(argv)
    try:
        if args.command == "simulate":
            out = run_simulate(_load_config(args, "simulate"), args.out)
            print(out)
        elif args.command == "estimate":
            run_estimate(_load_config(args, "estimate"), args.out)
            print(Path(args.out) / "estimate.csv")
        elif args.command == "powercurve":
            run_powercurve(_load_config(args, "powercurve"), args.out)
            print(Path(args.out) / "powercurve.csv")
        elif args.command == "metrics":
            metrics = run_metrics(args.estimate, args.truth)
            text = json.dumps(metrics, indent=2, sort_keys=True)
            if args.out:
                out_dir = Path(args.out)
                out_dir.mkdir(parents=True, exist_ok=True)
                (out_dir / "metrics.json").write_text(text + "\n")
            print(text)
    except LocmomError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
