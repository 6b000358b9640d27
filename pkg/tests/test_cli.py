"""End-to-end CLI runs on small configs, plus config parsing and file formats."""

import csv
import json
import os

import pytest

from schedsim.cli import main
from schedsim.config import parse_config, parse_grid
from schedsim.errors import ConfigurationError
from schedsim.io import read_fits_json, read_sweep_csv

SMALL = """
[schedule]
kind = "{kind}"
size_s = {size}

[responder]
rate_grid_per_min = "0:200:25"
{burst}

[session]
duration_s = 60
repetitions = 8
seed = 3

[output]
dir = "out"
"""


def write_config(tmp_path, kind="RI", size=5, burst="", name="exp.toml"):
    path = tmp_path / name
    path.write_text(SMALL.format(kind=kind, size=size, burst=burst))
    return path


def run(argv, capsys):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_solve_tp_json_and_csv(capsys):
    code, out, _ = run(["solve-tp", "--size", 5], capsys)
    assert code == 0
    rec = json.loads(out)
    assert rec["T"] == pytest.approx(0.095)
    assert rec["p"] == pytest.approx(0.019)
    assert rec["mean_err"] <= 0.01 and 0.99 <= rec["sd_ratio"] <= 1
    code, out, _ = run(["solve-tp", "--size", 5, "--format", "csv"], capsys)
    header, values = out.strip().splitlines()
    assert header.split(",")[:3] == ["x", "T", "p"]
    assert float(values.split(",")[1]) == pytest.approx(0.095)


def test_solve_tp_infeasible_exit_code(capsys):
    code, _, err = run(["solve-tp", "--size", 0.001], capsys)
    assert code == 2
    assert "probability" in err


def test_usage_errors_exit_one(capsys):
    assert run(["frobnicate"], capsys)[0] == 1
    assert run(["solve-tp"], capsys)[0] == 1
    assert run(["simulate", "--config", "/nonexistent.toml"], capsys)[0] == 1


def test_predict_rdrl_points(capsys):
    code, out, _ = run(["predict", "rdrl-points", "--size", 8], capsys)
    assert code == 0
    rec = json.loads(out)
    assert rec["Bm"] == pytest.approx(29.348, abs=1e-3)
    assert rec["Rm"] == pytest.approx(2.6492, abs=1e-4)
    assert rec["Bi"] == pytest.approx(58.697, abs=1e-3)
    assert rec["Ri"] == pytest.approx(2.0249, abs=1e-4)


def test_predict_curve(capsys):
    code, out, _ = run(["predict", "--model", "baum", "--size", 60, "--at", 12], capsys)
    assert code == 0
    rows = out.strip().splitlines()
    assert rows[0] == "B,R"
    assert float(rows[1].split(",")[1]) == pytest.approx(12 / 13)
    code, out, _ = run(["predict", "--model", "killeen", "--size", 5, "--grid", "0:100:50",
                        "--param", "c=20"], capsys)
    assert code == 0 and len(out.strip().splitlines()) == 4
    assert run(["predict", "--model", "baum", "--size", 5, "--param", "V"], capsys)[0] == 1


def test_simulate_fit_report_round_trip(tmp_path, capsys):
    cfg = write_config(tmp_path)
    code, _, err = run(["simulate", "--config", cfg], capsys)
    assert code == 0, err
    sweep = tmp_path / "out" / "sweep.csv"
    first = sweep.read_bytes()
    header = first.decode().splitlines()[0]
    assert header.startswith("# schedsim config_sha256=")
    assert "seed=3" in header and "kind=RI" in header

    # rerun into another directory: identical bytes
    code, _, _ = run(["simulate", "--config", cfg, "--out", tmp_path / "again"], capsys)
    assert code == 0
    assert (tmp_path / "again" / "sweep.csv").read_bytes() == first

    cols, meta = read_sweep_csv(sweep)
    assert list(cols["B_nominal"]) == [0, 25, 50, 75, 100, 125, 150, 175, 200]
    assert meta["seed"] == "3"

    fits = tmp_path / "fits.json"
    code, out, _ = run(["fit", "--data", sweep, "--out", fits], capsys)
    assert code == 0
    doc = json.loads(fits.read_text())
    assert doc["meta"]["config_sha256"] == meta["config_sha256"]
    assert {f["family"] for f in doc["fits"]} == {"baum", "killeen", "prelec", "rachlin"}
    assert (tmp_path / "fits.txt").read_text().startswith("# schedsim ")
    assert "rank" in out
    loaded = read_fits_json(fits)
    assert len(loaded) == 4

    plot = tmp_path / "plot.csv"
    code, _, _ = run(["report", "--data", sweep, "--fits", fits, "--out", plot], capsys)
    assert code == 0
    lines = plot.read_text().splitlines()
    assert lines[0].startswith("# schedsim ")
    rows = list(csv.DictReader(lines[1:]))
    series = {r["series"] for r in rows}
    assert {"observed", "baum", "rachlin"} <= series


def test_rdrl_fit_emits_components(tmp_path, capsys):
    cfg = write_config(tmp_path, kind="RDRL", size=8)
    assert run(["simulate", "--config", cfg], capsys)[0] == 0
    sweep = tmp_path / "out" / "sweep.csv"
    fits = tmp_path / "rfits.json"
    assert run(["fit", "--data", sweep, "--family", "rdrl", "--out", fits], capsys)[0] == 0
    fams = [f["family"] for f in read_fits_json(fits)]
    assert sorted(fams) == ["rdrl", "rdrl_reduced"]
    plot = tmp_path / "rplot.csv"
    assert run(["report", "--data", sweep, "--fits", fits, "--out", plot], capsys)[0] == 0
    series = {r["series"] for r in csv.DictReader(plot.read_text().splitlines()[1:])}
    assert {"rdrl:asymptote", "rdrl:decay", "rdrl:rise"} <= series


def test_break_run(tmp_path, capsys):
    cfg = write_config(tmp_path, kind="RI", size=15,
                       burst="[responder.burst]\np_run = 0.01\np_break = 0.01")
    code, out, err = run(["break-run", "--config", cfg], capsys)
    assert code == 0, err
    rows = list(csv.DictReader((tmp_path / "out" / "break_run.csv").read_text().splitlines()[1:]))
    assert len(rows) == 9
    assert float(rows[4]["B_effective"]) == pytest.approx(float(rows[4]["lor"]) / 2)
    assert "inside plain HDI" in out
    plain = write_config(tmp_path, name="plain.toml")
    assert run(["break-run", "--config", plain], capsys)[0] == 1


@pytest.mark.skipif(os.geteuid() == 0, reason="root ignores directory permissions")
def test_unwritable_output_exit_three(tmp_path, capsys):
    cfg = write_config(tmp_path)
    ro = tmp_path / "ro"
    ro.mkdir()
    ro.chmod(0o500)
    try:
        assert run(["simulate", "--config", cfg, "--out", ro], capsys)[0] == 3
    finally:
        ro.chmod(0o700)


def test_output_path_collision_exit_three(tmp_path, capsys):
    # a regular file where the output directory should go
    cfg = write_config(tmp_path)
    blocker = tmp_path / "blocker"
    blocker.write_text("x")
    assert run(["simulate", "--config", cfg, "--out", blocker / "sub"], capsys)[0] == 3


def test_missing_sweep_file_is_runtime_error(tmp_path, capsys):
    assert run(["fit", "--data", tmp_path / "none.csv"], capsys)[0] == 3


# config parsing


def base(**schedule):
    return {"schedule": {"kind": "RI", "size_s": 5, **schedule}}


def test_config_defaults_use_desk_profile():
    cfg = parse_config(base())
    assert cfg.profile == "desk"
    assert cfg.session.repetitions == 100
    assert cfg.schedule.T == pytest.approx(0.095)
    assert cfg.meta["kind"] == "RI"


def test_config_rejects_unknown_keys_and_sections():
    with pytest.raises(ConfigurationError, match="unknown key"):
        parse_config(base(colour="blue"))
    with pytest.raises(ConfigurationError, match="unknown section"):
        parse_config({**base(), "extras": {}})
    with pytest.raises(ConfigurationError):
        parse_config({"schedule": {"kind": "FI", "size_s": 5}})


def test_config_explicit_cycle_checked_unless_forced():
    raw = {"schedule": {"kind": "RI", "cycle_s": 0.5, "p": 0.1}}
    with pytest.raises(ConfigurationError, match="force"):
        parse_config(raw)
    cfg = parse_config(raw, force=True)
    assert (cfg.schedule.T, cfg.schedule.p) == (0.5, 0.1)


def test_config_rate_choices():
    cfg = parse_config({**base(), "responder": {"rates_per_min": [10, 20]}})
    assert list(cfg.session.rates) == [10, 20]
    with pytest.raises(ConfigurationError):
        parse_config({**base(), "responder": {"rate_per_min": 5, "rates_per_min": [1]}})
    with pytest.raises(ConfigurationError):
        parse_config({**base(), "responder": {"rate_per_min": 20000}})


def test_config_digest_tracks_content():
    assert parse_config(base()).digest == parse_config(base()).digest
    assert parse_config(base()).digest != parse_config(base(size_s=6)).digest


def test_parse_grid():
    assert list(parse_grid("0:200:50")) == [0, 50, 100, 150, 200]
    assert list(parse_grid("0:1:0.25")) == [0, 0.25, 0.5, 0.75, 1.0]
    with pytest.raises(ConfigurationError):
        parse_grid("0:10")
    with pytest.raises(ConfigurationError):
        parse_grid("5:0:1")
