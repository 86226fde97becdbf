"""Command-line interface: ``crdhybrid {stationary,sweep,simulate,validate}``.

Parameters come from built-in defaults, then an optional JSON ``--config``
file using the same names as the flags, then the flags themselves.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .dynamics import DEFAULTS, PARAM_NAMES, PopulationModel
from .errors import ConfigurationError, ConvergenceError, DomainError
from .markov import average_cooperation, average_group_success, stationary_product_form
from .simulate import SimulationConfig, simulate_agents, simulate_chain
from .sweep import (
    PRESETS,
    SCHEMA_VERSION,
    SweepSpec,
    dumps_json,
    figure_preset,
    grid,
    run_sweep,
    write_csv,
    write_json,
)
from .validation import run_checks

PARAM_TYPES = dict(Z=int, mu=float, beta=float, b=float, c=float, N=int, M=int, a=int, p=float, r=float)
RUN_DEFAULTS = dict(format="json", seed=0, steps=1_000_000, burn_in=None, group_samples=50,
                    workers=None, literal_transitions=False, out=None)


def _add_common(parser):
    for name in PARAM_NAMES:
        parser.add_argument(f"--{name}", type=PARAM_TYPES[name], default=None,
                            help=f"default {DEFAULTS[name]}")
    parser.add_argument("--config", type=Path, help="JSON file with parameter values")
    parser.add_argument("--out", help="output path")
    parser.add_argument("--format", choices=("csv", "json"), default=None)
    parser.add_argument("--literal-transitions", action="store_true", default=None,
                        help="drop the mutation term from T+/T- (makes boundary states absorbing)")


def build_parser():
    parser = argparse.ArgumentParser(prog="crdhybrid", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("stationary", help="stationary distribution at one parameter point")
    _add_common(p)

    p = sub.add_parser("sweep", help="evaluate metrics over a parameter grid")
    _add_common(p)
    p.add_argument("--preset", help=f"one of {', '.join(PRESETS)}")
    p.add_argument("--axis1", help="name=start:stop:count")
    p.add_argument("--axis2", help="name=start:stop:count")
    p.add_argument("--metrics", help="comma-separated subset of avg_cooperation,avg_success,"
                                     "stationary_distribution")
    p.add_argument("--workers", type=int, default=None)

    p = sub.add_parser("simulate", help="Monte Carlo run compared with the analytic result")
    _add_common(p)
    p.add_argument("--mode", choices=("chain", "agents"), default="chain")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--steps", type=int, default=None)
    p.add_argument("--burn-in", dest="burn_in", type=int, default=None)
    p.add_argument("--group-samples", dest="group_samples", type=int, default=None)

    p = sub.add_parser("validate", help="run the built-in property checks")
    p.add_argument("--literal-transitions", action="store_true", default=False)
    return parser


def resolve_config(args):
    """Merge defaults, config file and flags (flags win)."""
    cfg = {**DEFAULTS, **RUN_DEFAULTS}
    if getattr(args, "config", None):
        with open(args.config, encoding="utf-8") as fh:
            loaded = json.load(fh)
        unknown = set(loaded) - set(cfg)
        if unknown:
            raise ConfigurationError(f"unknown config key(s): {', '.join(sorted(unknown))}")
        cfg.update(loaded)
    for key, value in vars(args).items():
        if key in cfg and value is not None:
            cfg[key] = value
    return cfg


def _model(cfg):
    return PopulationModel.create(literal_transitions=bool(cfg["literal_transitions"]),
                                  **{k: cfg[k] for k in PARAM_NAMES})


def _echo(cfg):
    print("resolved: " + " ".join(f"{k}={cfg[k]}" for k in PARAM_NAMES), file=sys.stderr)


def _write_text(path, text):
    Path(path).write_text(text, encoding="utf-8")


def cmd_stationary(cfg):
    model = _model(cfg)
    dist = stationary_product_form(model)
    coop = average_cooperation(dist)
    success = average_group_success(dist, model)
    out = cfg["out"] or f"stationary.{cfg['format']}"
    if cfg["format"] == "json":
        _write_text(out, dumps_json({
            "schema_version": SCHEMA_VERSION,
            "engine_version": __version__,
            "command": "stationary",
            "params": model.params,
            "literal_transitions": model.literal_transitions,
            "method": dist.method,
            "avg_cooperation": coop,
            "avg_success": success,
            "normalization_residual": dist.normalization_residual,
            "detailed_balance_residual": dist.detailed_balance_residual,
            "stationary_distribution": dist.probabilities.tolist(),
        }))
    else:
        with open(out, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(PARAM_NAMES + ("avg_cooperation", "avg_success", "k", "probability"))
            fixed = [_fmt(model.params[n]) for n in PARAM_NAMES] + [_fmt(coop), _fmt(success)]
            for k, prob in enumerate(dist.probabilities):
                writer.writerow(fixed + [k, _fmt(prob)])
    print(f"avg_cooperation = {coop:.6f}")
    print(f"avg_success = {success:.6f}")
    return 0


def _fmt(x):
    return str(x) if isinstance(x, (int, np.integer)) else f"{x:.12g}"


def parse_axis(text):
    """``"r=0:1:51"`` -> ``("r", [0.0, 0.02, ..., 1.0])``; ``"a=0,1,2"`` lists values."""
    try:
        name, rng = text.split("=", 1)
        if ":" in rng:
            start, stop, count = rng.split(":")
            values = grid(float(start), float(stop), int(count))
        else:
            values = [float(v) for v in rng.split(",")]
    except ValueError:
        raise ConfigurationError(f"bad axis {text!r}; expected name=start:stop:count") from None
    return name.strip(), values


def _panel_label(panel):
    return "_".join(f"{k}{v:g}" if isinstance(v, float) else f"{k}{v}" for k, v in panel.items())


def cmd_sweep(cfg, args):
    if args.preset and (args.axis1 or args.axis2):
        raise ConfigurationError("--preset cannot be combined with --axis1/--axis2")
    overrides = {k: getattr(args, k) for k in PARAM_NAMES if getattr(args, k) is not None}
    if args.preset:
        spec = figure_preset(args.preset)
        base = {**spec.base, **overrides}
        spec = SweepSpec(base=base, axis1=spec.axis1, axis2=spec.axis2, metrics=spec.metrics,
                         panels=spec.panels, name=spec.name)
    elif args.axis1:
        spec = SweepSpec(base={k: cfg[k] for k in PARAM_NAMES}, axis1=parse_axis(args.axis1),
                         axis2=parse_axis(args.axis2) if args.axis2 else None)
    else:
        raise ConfigurationError("sweep needs --preset or --axis1")
    if args.metrics is not None:
        metrics = tuple(m for m in args.metrics.split(",") if m)
        spec = SweepSpec(base=spec.base, axis1=spec.axis1, axis2=spec.axis2, metrics=metrics,
                         panels=spec.panels, name=spec.name)
    if cfg["literal_transitions"]:
        raise ConfigurationError("sweeps need an irreducible chain; --literal-transitions is not supported")

    print("resolved: " + " ".join(f"{k}={v}" for k, v in spec.base.items())
          + f" axis1={spec.axis1[0]}" + (f" axis2={spec.axis2[0]}" if spec.axis2 else ""),
          file=sys.stderr)
    workers = cfg["workers"] or os.cpu_count() or 1
    start = time.perf_counter()
    result = run_sweep(spec, workers=workers)
    elapsed = time.perf_counter() - start

    fmt = cfg["format"]
    out = Path(cfg["out"] or f"sweep_{spec.name}.{fmt}")
    writer = write_csv if fmt == "csv" else write_json
    written = []
    if len(spec.panels) == 1:
        writer(result, out)
        written.append(out)
    else:
        for i, panel in enumerate(spec.panels):
            path = out.with_name(f"{out.stem}_{_panel_label(panel)}{out.suffix}")
            writer(result.panel(i), path)
            written.append(path)
    print(f"cells={spec.grid_size} records={len(result.records)} skipped={len(result.skipped)} "
          f"wall_time={elapsed:.2f}s")
    for path in written:
        print(f"wrote {path}")
    return 0


def cmd_simulate(cfg, mode):
    model = _model(cfg)
    sim_cfg = SimulationConfig(model=model, steps=int(cfg["steps"]), burn_in=cfg["burn_in"],
                               seed=int(cfg["seed"]), group_samples=int(cfg["group_samples"]))
    analytic = stationary_product_form(model).probabilities
    emp = simulate_chain(sim_cfg) if mode == "chain" else simulate_agents(sim_cfg)
    tv = emp.total_variation(analytic)
    out = cfg["out"] or f"simulate_{mode}.{cfg['format']}"
    if cfg["format"] == "json":
        _write_text(out, dumps_json({
            "schema_version": SCHEMA_VERSION,
            "engine_version": __version__,
            "command": "simulate",
            "mode": mode,
            "params": model.params,
            "steps": sim_cfg.steps,
            "burn_in": sim_cfg.burn_in,
            "group_samples": sim_cfg.group_samples if mode == "agents" else None,
            "seed": emp.seed,
            "generator": emp.generator,
            "steps_counted": emp.steps_counted,
            "tv_distance": tv,
            "occupancy": emp.occupancy.tolist(),
            "analytic": analytic.tolist(),
        }))
    else:
        with open(out, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(PARAM_NAMES + ("mode", "seed", "generator", "steps", "burn_in",
                                           "tv_distance", "k", "occupancy", "analytic"))
            fixed = [_fmt(model.params[n]) for n in PARAM_NAMES] + [
                mode, emp.seed, emp.generator, sim_cfg.steps, sim_cfg.burn_in, _fmt(tv)]
            for k, (o, a) in enumerate(zip(emp.occupancy, analytic)):
                writer.writerow(fixed + [k, _fmt(o), _fmt(a)])
    print(f"tv_distance = {tv:.6f}")
    return 0


def cmd_validate(literal_transitions=False):
    results = run_checks(literal_transitions)
    for r in results:
        print(r.line())
    failed = sum(not r.passed for r in results)
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return 0 if failed == 0 else 1


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.command == "validate":
            return cmd_validate(args.literal_transitions)
        cfg = resolve_config(args)
        if args.command == "sweep":
            return cmd_sweep(cfg, args)
        _echo(cfg)
        if args.command == "stationary":
            return cmd_stationary(cfg)
        return cmd_simulate(cfg, args.mode)
    except (ConfigurationError, DomainError, ConvergenceError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
