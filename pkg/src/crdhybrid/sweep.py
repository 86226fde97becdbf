"""Parameter grids, figure presets and result serialization."""

from __future__ import annotations

import csv
import io
import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .dynamics import INTEGER_PARAMS, PARAM_NAMES, PopulationModel
from .errors import ConfigurationError
from .markov import average_cooperation, average_group_success, stationary_product_form

SCHEMA_VERSION = 1
METRICS = ("avg_cooperation", "avg_success", "stationary_distribution")
SWEEPABLE = ("r", "p", "a", "M", "N", "beta", "mu", "c")
CSV_COLUMNS = PARAM_NAMES + ("avg_cooperation", "avg_success")
DEFAULT_RESOLUTION = 51


def grid(start, stop, count):
    """``count`` evenly spaced values from ``start`` to ``stop`` inclusive."""
    return [float(x) for x in np.linspace(start, stop, count)]


@dataclass(frozen=True)
class SweepSpec:
    """A grid over one or two parameters, optionally repeated over panels.

    Each panel is a dict of parameter overrides applied to ``base`` before
    the axes; figures with several sub-panels use one entry per sub-panel.
    """

    base: dict
    axis1: tuple
    axis2: tuple = None
    metrics: tuple = ("avg_cooperation", "avg_success")
    panels: tuple = ({},)
    name: str = "custom"

    def __post_init__(self):
        if not self.metrics:
            raise ConfigurationError("no metrics selected")
        bad = set(self.metrics) - set(METRICS)
        if bad:
            raise ConfigurationError(f"unknown metric(s): {', '.join(sorted(bad))}")
        for axis in (self.axis1, self.axis2):
            if axis is None:
                continue
            pname, values = axis
            if pname not in SWEEPABLE:
                raise ConfigurationError(f"cannot sweep {pname!r}; choose from {', '.join(SWEEPABLE)}")
            if len(values) == 0:
                raise ConfigurationError(f"axis {pname!r} has no values")
            if pname in INTEGER_PARAMS and any(int(v) != v for v in values):
                raise ConfigurationError(f"axis {pname!r} needs integer values")
        if self.axis1 is None:
            raise ConfigurationError("axis1 is required")
        if not self.panels:
            raise ConfigurationError("at least one panel is required")

    @property
    def grid_size(self):
        n2 = len(self.axis2[1]) if self.axis2 else 1
        return len(self.panels) * len(self.axis1[1]) * n2

    def cells(self):
        """Resolved parameter dicts in panel, axis1, axis2 row-major order."""
        axes = [self.axis1] + ([self.axis2] if self.axis2 else [])
        for panel_index, panel in enumerate(self.panels):
            for v1 in axes[0][1]:
                for v2 in (axes[1][1] if len(axes) > 1 else [None]):
                    params = {**self.base, **panel, axes[0][0]: v1}
                    if v2 is not None:
                        params[axes[1][0]] = v2
                    yield panel_index, params

    def to_dict(self):
        return {
            "name": self.name,
            "base": _clean(self.base),
            "axis1": _axis_dict(self.axis1),
            "axis2": _axis_dict(self.axis2),
            "panels": [_clean(p) for p in self.panels],
            "metrics": list(self.metrics),
        }


def _axis_dict(axis):
    if axis is None:
        return None
    return {"name": axis[0], "values": [_num(axis[0], v) for v in axis[1]]}


def _num(name, value):
    return int(value) if name in INTEGER_PARAMS else float(value)


def _clean(params):
    return {k: _num(k, v) for k, v in sorted(params.items(), key=lambda kv: PARAM_NAMES.index(kv[0]))}


@dataclass
class SweepResult:
    """Metric records for every valid cell plus the cells that were skipped."""

    spec: SweepSpec
    records: list
    skipped: list
    engine_version: str = __version__
    timestamp: float = field(default_factory=time.time)

    def panel(self, index):
        """Sub-result holding only one panel's records and skips."""
        return SweepResult(
            spec=self.spec,
            records=[r for r in self.records if r["panel"] == index],
            skipped=[s for s in self.skipped if s["panel"] == index],
            engine_version=self.engine_version,
            timestamp=self.timestamp,
        )

    def to_dict(self):
        # timestamp is left out so identical specs serialize to identical bytes
        return {
            "schema_version": SCHEMA_VERSION,
            "engine_version": self.engine_version,
            "spec": self.spec.to_dict(),
            "records": self.records,
            "skipped": self.skipped,
        }


def evaluate_cell(params, metrics, literal_transitions=False):
    """Metrics for one parameter point; raises ConfigurationError if invalid."""
    model = PopulationModel.create(literal_transitions=literal_transitions, **params)
    dist = stationary_product_form(model)
    out = {}
    if "avg_cooperation" in metrics:
        out["avg_cooperation"] = average_cooperation(dist)
    if "avg_success" in metrics:
        out["avg_success"] = average_group_success(dist, model)
    if "stationary_distribution" in metrics:
        out["stationary_distribution"] = dist.probabilities.tolist()
    return model.params, out


def _evaluate(args):
    panel_index, params, metrics = args
    try:
        resolved, values = evaluate_cell(params, metrics)
    except ConfigurationError as exc:
        return {"panel": panel_index, "params": _clean(params), "reason": str(exc)}, None
    return None, {"panel": panel_index, "params": resolved, **values}


def run_sweep(spec, workers=1):
    """Evaluate every cell of ``spec`` analytically.

    Invalid cells are logged in ``skipped`` with the violated invariant.
    Output order is row-major regardless of ``workers``.
    """
    jobs = [(i, params, spec.metrics) for i, params in spec.cells()]
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(_evaluate, jobs, chunksize=max(1, len(jobs) // (8 * workers))))
    else:
        outcomes = [_evaluate(job) for job in jobs]
    records = [rec for skip, rec in outcomes if rec is not None]
    skipped = [skip for skip, rec in outcomes if skip is not None]
    return SweepResult(spec=spec, records=records, skipped=skipped)


def _fmt(name, value):
    if value is None:
        return ""
    if name in INTEGER_PARAMS:
        return str(int(value))
    return f"{value:.12g}"


def _open_for_write(destination):
    if hasattr(destination, "write"):
        return destination, False
    return open(destination, "w", newline="", encoding="utf-8"), True


def write_csv(result, destination):
    """Write one row per record with 12 significant digits.

    Skipped cells go to ``<destination>.skipped.csv`` when ``destination`` is
    a path and anything was skipped.
    """
    fh, owned = _open_for_write(destination)
    try:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for rec in result.records:
            row = {**rec["params"], **rec}
            writer.writerow([_fmt(c, row.get(c)) for c in CSV_COLUMNS])
    finally:
        if owned:
            fh.close()
    if owned and result.skipped:
        with open(f"{os.fspath(destination)}.skipped.csv", "w", newline="", encoding="utf-8") as log:
            writer = csv.writer(log, lineterminator="\n")
            writer.writerow(PARAM_NAMES + ("reason",))
            for skip in result.skipped:
                writer.writerow([_fmt(c, skip["params"].get(c)) for c in PARAM_NAMES] + [skip["reason"]])


def dumps_json(document):
    return json.dumps(document, indent=1) + "\n"


def write_json(result, destination):
    """Write the whole result, spec echo included, as one JSON document."""
    text = dumps_json(result.to_dict())
    fh, owned = _open_for_write(destination)
    try:
        fh.write(text)
    finally:
        if owned:
            fh.close()


def read_json(source):
    """Parse a document written by :func:`write_json` back into a dict."""
    if hasattr(source, "read"):
        return json.load(source)
    with open(source, encoding="utf-8") as fh:
        return json.load(fh)


FIGURE_BASE = dict(Z=100, mu=0.01, beta=2.0, b=1.0, c=0.1)
PRESETS = ("control", "fig2", "fig3", "fig4", "fig5A", "fig5B", "fig5C")


def figure_preset(name, resolution=DEFAULT_RESOLUTION):
    """Sweep spec reproducing one of the published figures.

    ``control``/``fig3``: no fixed agents, cooperation and success against risk.
    ``fig2``: cooperation over p x a at r=0.9, one panel per M in {1, 3, 5}.
    ``fig4``: cooperation and success over r x p, one panel per a in {1, 2, 3}.
    ``fig5A``/``fig5B``/``fig5C``: stationary distributions under the
    game transformations with N-a and M (or M-a) held fixed, and at equal
    expected agent effort a*p = 1.
    """
    probs = grid(0.0, 1.0, resolution)
    if name in ("control", "fig3"):
        return SweepSpec(base={**FIGURE_BASE, "N": 6, "M": 3, "a": 0, "p": 0.0},
                         axis1=("r", probs), name=name)
    if name == "fig2":
        return SweepSpec(base={**FIGURE_BASE, "N": 6, "r": 0.9},
                         axis1=("p", probs), axis2=("a", list(range(0, 6))),
                         metrics=("avg_cooperation", "avg_success"),
                         panels=tuple({"M": m} for m in (1, 3, 5)), name=name)
    if name == "fig4":
        return SweepSpec(base={**FIGURE_BASE, "N": 6, "M": 3},
                         axis1=("r", probs), axis2=("p", probs),
                         panels=tuple({"a": a} for a in (1, 2, 3)), name=name)
    dist = ("avg_cooperation", "avg_success", "stationary_distribution")
    base5 = {**FIGURE_BASE, "r": 0.5}
    if name == "fig5A":
        panels = tuple({"N": 5 + a, "a": a, "M": 2} for a in (0, 1, 2))
        return SweepSpec(base=base5, axis1=("p", [0.0]), metrics=dist, panels=panels, name=name)
    if name == "fig5B":
        panels = tuple({"N": 4 + a, "a": a, "M": 2 + a} for a in (0, 1, 2))
        return SweepSpec(base=base5, axis1=("p", [1.0]), metrics=dist, panels=panels, name=name)
    if name == "fig5C":
        panels = tuple({"a": a, "p": p} for a, p in ((1, 1.0), (2, 0.5), (4, 0.25)))
        return SweepSpec(base={**base5, "N": 6, "M": 3}, axis1=("r", [0.5]), metrics=dist,
                         panels=panels, name=name)
    raise ConfigurationError(f"unknown preset {name!r}; valid presets: {', '.join(PRESETS)}")
