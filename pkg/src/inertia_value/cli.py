"""Batch command line: ``inertia-value <subcommand> [options]``.

Every subcommand writes its artifacts plus ``manifest.json`` into the output
directory. Failures print one JSON object on stderr and exit non-zero.
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import platform
import sys
from pathlib import Path

import numpy as np

from . import __version__
from . import frequency as fq
from .config import ConfigError, StudyConfig, bundled_config, parse_config, serialize_config, with_overrides
from .domain import ValidationError
from .scenario import build_chain, build_tree, daily_demand_profile
from .scheduler import SucConfig, build_suc, rolling_run, solve_suc

log = logging.getLogger("inertia_value")

SUBCOMMANDS = ("run", "annual", "instantaneous", "marginal", "validate-frequency", "dump-model")
ENV_PREFIX = "INERTIA_VALUE_"
# flag -> environment variable consulted when the flag is absent
ENV_FLAGS = {
    "config": "CONFIG", "seed": "SEED", "out_dir": "OUT_DIR", "rocof_max": "ROCOF_MAX",
    "extra_inertia": "EXTRA_INERTIA", "duration_hours": "DURATION_HOURS", "threads": "THREADS",
}


# --------------------------------------------------------------------------
# inputs


def read_trace(path) -> np.ndarray:
    """Two-column CSV ``hour, MW`` with a header row; hours must run 0, 1, 2, ..."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise ConfigError(f"{path}: empty trace file")
    body = rows[1:]
    values = []
    for i, row in enumerate(body):
        if len(row) < 2:
            raise ConfigError(f"{path}:{i + 2}: expected 'hour, MW'")
        try:
            hour, mw = int(row[0]), float(row[1])
        except ValueError as exc:
            raise ConfigError(f"{path}:{i + 2}: {exc}") from exc
        if hour != i:
            raise ConfigError(f"{path}:{i + 2}: hours must be consecutive from 0")
        values.append(mw)
    return np.asarray(values)


def demand_trace(cfg: StudyConfig, hours: int) -> np.ndarray:
    s = cfg.study
    if s.demand_csv:
        d = read_trace(s.demand_csv)
        if len(d) < hours:
            raise ConfigError(f"{s.demand_csv}: {len(d)} hours, study needs {hours}")
        return d[:hours] * s.scale
    return daily_demand_profile(hours, s.demand_peak * s.scale, s.demand_trough * s.scale)


def wind_trace(cfg: StudyConfig, hours: int) -> np.ndarray:
    s = cfg.study
    if s.wind_csv:
        w = read_trace(s.wind_csv)
        if len(w) < hours:
            raise ConfigError(f"{s.wind_csv}: {len(w)} hours, study needs {hours}")
        return w[:hours] * s.scale
    return cfg.wind_process().sample(hours)


def suc_config(cfg: StudyConfig, relax: bool | None = None) -> SucConfig:
    s = cfg.study
    return SucConfig(
        cfg.system(), cfg.quantiles, cfg.wind_process(), horizon=s.horizon, extra_inertia=s.extra_inertia,
        n_cuts=s.n_cuts, backend=s.backend, relax_commitment=s.relax_commitment if relax is None else relax,
        max_extra_inertia=max(s.extra_inertia, max(s.extra_grid) * s.scale if s.extra_grid else 0.0),
    )


def _valuation_config(cfg: StudyConfig) -> SucConfig:
    # the value studies compare unit-sized differences, which need continuous counts
    return suc_config(cfg, relax=True)


# --------------------------------------------------------------------------
# subcommands


def cmd_run(cfg: StudyConfig, out: Path, args) -> dict:
    s = cfg.study
    hours = s.duration_hours + s.horizon
    sc = suc_config(cfg)
    res = rolling_run(sc, demand_trace(cfg, hours), wind_trace(cfg, hours), s.duration_hours,
                      deterministic=s.deterministic)
    res.write_csv(out / "run_hourly.csv")
    c = res.cost
    summary = {
        "hours": len(res.hours), "aborted": res.aborted, "message": res.message,
        "total_cost": c.total, "startup": c.startup, "no_load": c.no_load, "marginal": c.marginal,
        "emissions": c.emissions, "shed": c.shed, "curtailed_mwh": res.curtailed_energy,
    }
    _write_json(out / "run_summary.json", summary)
    if res.aborted:
        raise RuntimeError(f"rolling run aborted: {res.message}")
    return {"artifacts": ["run_hourly.csv", "run_summary.json"]}


def cmd_annual(cfg: StudyConfig, out: Path, args) -> dict:
    from .valuation import annual_value, write_records

    s = cfg.study
    caps = [c * s.scale for c in s.wind_capacities]
    hours = s.duration_hours + s.horizon
    recs = annual_value(_valuation_config(cfg), caps, s.duration_hours, demand_trace(cfg, hours),
                        rocof_values=s.rocof_values, workers=args.threads)
    write_records(recs, out / "annual.csv")
    return {"artifacts": ["annual.csv"]}


def cmd_instantaneous(cfg: StudyConfig, out: Path, args) -> dict:
    from .valuation import instantaneous_value, write_grid, write_records

    s = cfg.study
    arts = []
    every = []
    for rocof in s.rocof_values:
        sc = _valuation_config(cfg)
        sc = sc.with_(system=sc.system.with_params(rocof_max=rocof))
        grid = instantaneous_value(sc, [d * s.scale for d in s.demand_grid], [w * s.scale for w in s.wind_grid],
                                   workers=args.threads)
        name = f"instantaneous_grid_rocof{rocof:g}.csv"
        write_grid(grid, out / name)
        arts.append(name)
        every += [r for row in grid for r in row]
    write_records(every, out / "instantaneous.csv")
    return {"artifacts": ["instantaneous.csv"] + arts}


def cmd_marginal(cfg: StudyConfig, out: Path, args) -> dict:
    from .valuation import marginal_value

    s = cfg.study
    grid = [x * s.scale for x in s.extra_grid]
    sc = _valuation_config(cfg)
    if s.marginal_condition:
        d, w = s.marginal_condition
        curve = marginal_value(sc, grid, condition=(d * s.scale, w * s.scale), epsilon=s.epsilon,
                               workers=args.threads)
    else:
        hours = s.duration_hours + s.horizon
        curve = marginal_value(sc, grid, demand_trace=demand_trace(cfg, hours), wind_trace=wind_trace(cfg, hours),
                               duration=s.duration_hours, epsilon=s.epsilon, workers=args.threads)
    with open(out / "marginal.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["extra_inertia", "savings", "marginal_value"])
        for i, (x, sv) in enumerate(zip(curve.extra, curve.savings)):
            w.writerow([f"{x:.6f}", f"{sv:.6f}", "" if i == 0 else f"{curve.marginal[i - 1]:.6f}"])
    _write_json(out / "marginal_summary.json", {"saturation": curve.saturation, "epsilon": curve.epsilon})
    return {"artifacts": ["marginal.csv", "marginal_summary.json"]}


def cmd_validate_frequency(cfg: StudyConfig, out: Path, args) -> dict:
    if args.h is None or args.r is None:
        raise ConfigError("validate-frequency needs --h and --r")
    # H, R and demand are read at full size, like every MW figure in the config
    p = cfg.params
    demand = args.demand if args.demand is not None else cfg.study.demand_trough
    traj = fq.simulate_frequency(args.h, args.r, p.t_delivery, p.damping, demand, p.p_loss_max)
    result = {
        "H": args.h, "R": args.r, "demand": demand, "p_loss": p.p_loss_max,
        "nadir": traj.nadir, "max_rocof": traj.max_rocof, "qss_deviation": traj.qss_deviation,
        "nadir_ok": traj.nadir >= -p.delta_f_max, "rocof_ok": traj.max_rocof <= p.rocof_max,
        "qss_ok": traj.qss_deviation >= -p.delta_f_qss_max,
    }
    print(f"nadir          {traj.nadir:+.6f} Hz  limit -{p.delta_f_max:g}  {'pass' if result['nadir_ok'] else 'FAIL'}")
    print(f"max rocof      {traj.max_rocof:.6f} Hz/s limit {p.rocof_max:g}  {'pass' if result['rocof_ok'] else 'FAIL'}")
    print(f"qss deviation  {traj.qss_deviation:+.6f} Hz  limit -{p.delta_f_qss_max:g}  "
          f"{'pass' if result['qss_ok'] else 'FAIL'}")
    _write_json(out / "frequency.json", result)
    return {"artifacts": ["frequency.json"]}


def cmd_dump_model(cfg: StudyConfig, out: Path, args) -> dict:
    s = cfg.study
    horizon = args.horizon if args.horizon is not None else s.horizon
    sc = suc_config(cfg).with_(horizon=horizon, backend=args.backend or s.backend)
    d = demand_trace(cfg, horizon + 1)
    w = wind_trace(cfg, 1)
    tree = build_chain(sc.wind, w[0], d, horizon) if args.deterministic or s.deterministic \
        else build_tree(sc.wind, w[0], d, sc.quantiles, horizon)
    model, _ = build_suc(sc, tree)
    (out / "model.lp").write_text(model.to_lp())
    sol = solve_suc(sc.with_(verify=False), tree)
    _write_json(out / "model_solution.json", {"status": sol.status, "objective": sol.objective,
                                              "n_vars": model.n_vars, "n_rows": model.n_rows,
                                              "n_nodes": len(tree)})
    return {"artifacts": ["model.lp", "model_solution.json"]}


COMMANDS = {
    "run": cmd_run, "annual": cmd_annual, "instantaneous": cmd_instantaneous, "marginal": cmd_marginal,
    "validate-frequency": cmd_validate_frequency, "dump-model": cmd_dump_model,
}


# --------------------------------------------------------------------------
# plumbing


def _write_json(path: Path, obj) -> None:
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _versions() -> dict:
    import scipy

    try:
        import numba
        nb = numba.__version__
    except ImportError:  # pragma: no cover
        nb = None
    return {"inertia_value": __version__, "python": platform.python_version(), "numpy": np.__version__,
            "scipy": scipy.__version__, "numba": nb}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="inertia-value", description=__doc__.splitlines()[0])
    ap.add_argument("subcommand", choices=SUBCOMMANDS)
    ap.add_argument("--config", help="study config file (default: bundled gb_fleet)")
    ap.add_argument("--seed", type=int)
    ap.add_argument("--out-dir")
    ap.add_argument("--rocof-max", type=float)
    ap.add_argument("--extra-inertia", type=float)
    ap.add_argument("--duration-hours", type=int)
    ap.add_argument("--threads", type=int)
    ap.add_argument("--h", type=float, help="validate-frequency: post-fault inertia, MW s^2")
    ap.add_argument("--r", type=float, help="validate-frequency: scheduled response, MW")
    ap.add_argument("--demand", type=float, help="validate-frequency: demand, MW")
    ap.add_argument("--horizon", type=int, help="dump-model: tree horizon in hours")
    ap.add_argument("--backend", choices=("highs", "builtin"), help="dump-model: solver for the reference objective")
    ap.add_argument("--deterministic", action="store_true", help="dump-model: single-scenario chain")
    ap.add_argument("-v", "--verbose", action="store_true")
    return ap


def _apply_env(args) -> None:
    conv = {"seed": int, "rocof_max": float, "extra_inertia": float, "duration_hours": int, "threads": int}
    for attr, env in ENV_FLAGS.items():
        if getattr(args, attr) is None and os.environ.get(ENV_PREFIX + env):
            raw = os.environ[ENV_PREFIX + env]
            try:
                setattr(args, attr, conv.get(attr, str)(raw))
            except ValueError as exc:
                raise ConfigError(f"environment {ENV_PREFIX + env}: {exc}") from exc


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    try:
        _apply_env(args)
        args.threads = args.threads or 1
        cfg = parse_config(args.config) if args.config else bundled_config()
        cfg = with_overrides(cfg, seed=args.seed, rocof_max=args.rocof_max, extra_inertia=args.extra_inertia,
                             duration_hours=args.duration_hours, out_dir=args.out_dir)
        out = Path(cfg.output_dir)
        out.mkdir(parents=True, exist_ok=True)
        info = COMMANDS[args.subcommand](cfg, out, args)
        (out / "config_resolved.ini").write_text(serialize_config(cfg))
        manifest = {
            "subcommand": args.subcommand, "seed": cfg.wind.seed, "config_sha256": cfg.digest(),
            "versions": _versions(), "defaults_applied": list(cfg.provenance),
            "artifacts": info["artifacts"] + ["config_resolved.ini"],
        }
        _write_json(out / "manifest.json", manifest)
        return 0
    except (ConfigError, ValidationError, ValueError) as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc), "subcommand": args.subcommand}),
              file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - batch tool reports every failure as JSON
        print(json.dumps({"error": type(exc).__name__, "message": str(exc), "subcommand": args.subcommand}),
              file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
