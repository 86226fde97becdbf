import io
import json

import numpy as np
import pytest

from crdhybrid.errors import ConfigurationError
from crdhybrid.sweep import (
    CSV_COLUMNS,
    PRESETS,
    SweepSpec,
    figure_preset,
    grid,
    read_json,
    run_sweep,
    write_csv,
    write_json,
)

BASE = dict(Z=100, mu=0.01, beta=2.0, b=1.0, c=0.1, N=6, M=3, a=1, p=0.0, r=0.5)


def test_full_rp_grid_has_every_cell():
    spec = SweepSpec(base=BASE, axis1=("r", grid(0, 1, 51)), axis2=("p", grid(0, 1, 51)))
    result = run_sweep(spec)
    assert len(result.records) == 2601 and not result.skipped
    first, last = result.records[0]["params"], result.records[-1]["params"]
    assert (first["r"], first["p"]) == (0.0, 0.0) and (last["r"], last["p"]) == (1.0, 1.0)
    assert result.records[1]["params"]["p"] == pytest.approx(0.02)


def test_invalid_cells_are_skipped_with_reason():
    spec = SweepSpec(base=BASE, axis1=("a", list(range(7))))
    result = run_sweep(spec)
    assert len(result.records) == 6 and len(result.skipped) == 1
    assert result.skipped[0]["params"]["a"] == 6
    assert "no adaptive slot" in result.skipped[0]["reason"]
    assert len(result.records) + len(result.skipped) == spec.grid_size


def test_records_carry_resolved_parameters():
    result = run_sweep(SweepSpec(base={"r": 0.3}, axis1=("p", [0.5])))
    assert set(result.records[0]["params"]) == set(BASE)


def test_spec_validation():
    with pytest.raises(ConfigurationError):
        SweepSpec(base=BASE, axis1=("r", []))
    with pytest.raises(ConfigurationError):
        SweepSpec(base=BASE, axis1=("Z", [10, 20]))
    with pytest.raises(ConfigurationError):
        SweepSpec(base=BASE, axis1=("a", [0.5]))
    with pytest.raises(ConfigurationError):
        SweepSpec(base=BASE, axis1=("r", [0.5]), metrics=())
    with pytest.raises(ConfigurationError):
        SweepSpec(base=BASE, axis1=("r", [0.5]), metrics=("nonsense",))


def test_cell_independence_under_permutation():
    values = [0.1, 0.5, 0.9]
    fwd = run_sweep(SweepSpec(base=BASE, axis1=("r", values)))
    rev = run_sweep(SweepSpec(base=BASE, axis1=("r", values[::-1])))
    by_r = {rec["params"]["r"]: rec["avg_cooperation"] for rec in fwd.records}
    for rec in rev.records:
        assert rec["avg_cooperation"] == by_r[rec["params"]["r"]]


def test_parallel_matches_serial():
    spec = SweepSpec(base=BASE, axis1=("r", grid(0, 1, 6)), axis2=("a", [0, 1, 2]))
    assert run_sweep(spec, workers=2).records == run_sweep(spec).records


def test_preset_fig2():
    spec = figure_preset("fig2")
    assert [p["M"] for p in spec.panels] == [1, 3, 5]
    assert spec.base["r"] == 0.9 and spec.base["N"] == 6
    assert (spec.axis1[0], spec.axis2[0]) == ("p", "a")


def test_preset_control_has_no_agents():
    for name in ("control", "fig3"):
        spec = figure_preset(name)
        assert spec.base["a"] == 0 and spec.axis1[0] == "r" and spec.axis2 is None
        assert set(spec.metrics) == {"avg_cooperation", "avg_success"}


def test_preset_fig4_panels():
    spec = figure_preset("fig4")
    assert [p["a"] for p in spec.panels] == [1, 2, 3]
    assert (spec.base["N"], spec.base["M"]) == (6, 3)
    assert spec.grid_size == 3 * 51 * 51


def test_preset_fig5B_pairs():
    cells = [params for _, params in figure_preset("fig5B").cells()]
    assert dict(N=6, a=2, M=4, p=1.0).items() <= cells[-1].items()
    assert dict(N=4, a=0, M=2).items() <= cells[0].items()
    assert all(c["N"] - c["a"] == 4 and c["M"] - c["a"] == 2 for c in cells)


def test_preset_fig5C_records():
    result = run_sweep(figure_preset("fig5C"))
    assert len(result.records) == 3
    assert [(r["params"]["a"], r["params"]["p"]) for r in result.records] == [(1, 1.0), (2, 0.5), (4, 0.25)]
    assert all(len(r["stationary_distribution"]) == 101 for r in result.records)


@pytest.mark.parametrize("name", PRESETS)
def test_presets_use_caption_parameters(name):
    spec = figure_preset(name)
    for _, params in spec.cells():
        assert {k: params[k] for k in ("Z", "mu", "beta", "b", "c")} == dict(Z=100, mu=0.01, beta=2.0, b=1.0, c=0.1)


def test_unknown_preset():
    with pytest.raises(ConfigurationError, match="valid presets"):
        figure_preset("fig9")


def test_csv_layout(tmp_path):
    spec = SweepSpec(base=BASE, axis1=("a", list(range(7))), axis2=("p", [0.0, 0.5]))
    result = run_sweep(spec)
    path = tmp_path / "out.csv"
    write_csv(result, path)
    lines = path.read_text().splitlines()
    assert lines[0] == ",".join(CSV_COLUMNS) == "Z,mu,beta,b,c,N,M,a,p,r,avg_cooperation,avg_success"
    assert len(lines) == 1 + 12
    assert lines[1].startswith("100,0.01,2,1,0.1,6,3,0,0,0.5,")
    coop = lines[1].split(",")[-2]
    assert float(coop) == pytest.approx(result.records[0]["avg_cooperation"], rel=1e-11)
    assert len(coop.replace("0.", "", 1)) <= 12
    skipped = (tmp_path / "out.csv.skipped.csv").read_text().splitlines()
    assert len(skipped) == 1 + 2 and "no adaptive slot" in skipped[1]


def test_csv_is_byte_identical_across_runs(tmp_path):
    spec = SweepSpec(base=BASE, axis1=("r", grid(0, 1, 11)), axis2=("p", grid(0, 1, 11)))
    write_csv(run_sweep(spec), tmp_path / "a.csv")
    write_csv(run_sweep(spec), tmp_path / "b.csv")
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()


def test_json_round_trip_and_layout(tmp_path):
    result = run_sweep(figure_preset("fig5A"))
    buf = io.StringIO()
    write_json(result, buf)
    doc = json.loads(buf.getvalue())
    assert list(doc) == ["schema_version", "engine_version", "spec", "records", "skipped"]
    assert doc == json.loads(json.dumps(result.to_dict()))
    assert all(len(r["stationary_distribution"]) == 101 for r in doc["records"])
    path = tmp_path / "r.json"
    write_json(result, path)
    assert read_json(path) == doc
    write_json(run_sweep(figure_preset("fig5A")), tmp_path / "r2.json")
    assert path.read_bytes() == (tmp_path / "r2.json").read_bytes()


def test_unwritable_destination(tmp_path):
    result = run_sweep(SweepSpec(base=BASE, axis1=("r", [0.5])))
    with pytest.raises(OSError):
        write_csv(result, tmp_path / "missing" / "x.csv")
    with pytest.raises(OSError):
        write_json(result, tmp_path / "missing" / "x.json")
