import json
import os
import subprocess
import sys
from dataclasses import replace

import numpy as np
import pytest

from dualsat.errors import ConfigError
from dualsat.harness import (CSV_HEADER, SweepRow, emit_csv, emit_summary,
                             find_crossing, render_csv, run_sweep)
from dualsat.scenario import Scenario, load_scenario


SMALL = replace(Scenario(), drops=4, sweep_start_dbw=-5.0, sweep_stop_dbw=20.0,
                sweep_step_dbw=5.0, cdf_powers_dbw=(10.0,))


def _row(arch, p, se):
    return SweepRow(scenario_id="s", architecture=arch, p_tot_dbw=p, drops=1,
                    se_mean=se, se_stderr=0.0, jain_mean=1.0, pe_mean=0.0,
                    unavailable_frac=0.0)


def test_sweep_grid_size():
    sc = replace(Scenario(), sweep_start_dbw=-5.0, sweep_stop_dbw=50.0,
                 sweep_step_dbw=5.0)
    assert len(sc.sweep_powers_dbw()) == 12
    assert sc.sweep_powers_dbw()[0] == -5.0
    assert sc.sweep_powers_dbw()[-1] == 50.0


def test_default_grid_contains_cdf_point():
    sc = Scenario()
    assert 22.5 in sc.sweep_powers_dbw()


def test_run_sweep_row_count():
    res = run_sweep(SMALL)
    assert len(res.rows) == 6 * len(SMALL.architectures)
    assert all(r.drops == 4 for r in res.rows)


def test_run_sweep_deterministic_bytes(tmp_path):
    a = run_sweep(SMALL)
    b = run_sweep(SMALL)
    assert render_csv(a.rows) == render_csv(b.rows)
    pa = emit_csv(a, tmp_path / "a")
    pb = emit_csv(b, tmp_path / "b")
    assert open(pa["results"], "rb").read() == open(pb["results"], "rb").read()
    assert open(pa["cdf"], "rb").read() == open(pb["cdf"], "rb").read()


def test_run_sweep_parallel_matches_serial():
    serial = run_sweep(SMALL)
    par = run_sweep(replace(SMALL, jobs=2))
    assert render_csv(serial.rows) == render_csv(par.rows)


def test_stderr_scales_with_drops():
    # quadrupling the drops halves the standard error within a loose factor
    sc1 = replace(SMALL, drops=8, sweep_start_dbw=20.0, sweep_stop_dbw=20.0,
                  architectures=("conventional",))
    sc2 = replace(sc1, drops=32)
    r1 = run_sweep(sc1).rows[0]
    r2 = run_sweep(sc2).rows[0]
    ratio = r2.se_stderr / r1.se_stderr
    assert 0.5 * 0.5 <= ratio <= 0.5 * 2.0


def test_seed_changes_output():
    a = run_sweep(SMALL)
    b = run_sweep(replace(SMALL, master_seed=2))
    assert render_csv(a.rows) != render_csv(b.rows)


def test_find_crossing_synthetic():
    grid = np.arange(0.0, 10.5, 1.0)
    rows = [_row("a", p, p) for p in grid] + [_row("b", p, 10.0 - p) for p in grid]
    assert find_crossing(rows, "a", "b") == pytest.approx(5.0)


def test_find_crossing_identical_curves_none():
    grid = np.arange(0.0, 5.0, 1.0)
    rows = [_row("a", p, 1.0) for p in grid] + [_row("b", p, 1.0) for p in grid]
    assert find_crossing(rows, "a", "b") is None


def test_find_crossing_no_intersection():
    grid = np.arange(0.0, 5.0, 1.0)
    rows = [_row("a", p, 2.0) for p in grid] + [_row("b", p, 1.0) for p in grid]
    assert find_crossing(rows, "a", "b") is None


def test_csv_header_and_roundtrip(tmp_path):
    res = run_sweep(SMALL)
    paths = emit_csv(res, tmp_path / "out")
    lines = open(paths["results"], encoding="utf-8").read().splitlines()
    assert lines[0] == CSV_HEADER
    assert len(lines) == 1 + len(res.rows)
    # shortest round-trip floats parse back exactly
    for line, row in zip(lines[1:], res.rows):
        parts = line.split(",")
        assert float(parts[4]) == row.se_mean
        assert float(parts[5]) == row.se_stderr
        assert float(parts[6]) == row.jain_mean


def test_emit_header_only_for_empty_rows(tmp_path):
    res = run_sweep(SMALL)
    res.rows = []
    res.cdf_samples = {}
    paths = emit_csv(res, tmp_path / "empty")
    assert open(paths["results"], encoding="utf-8").read() == CSV_HEADER + "\n"


def test_metadata_sidecar(tmp_path):
    res = run_sweep(SMALL)
    paths = emit_csv(res, tmp_path / "meta")
    meta = json.load(open(paths["meta"], encoding="utf-8"))
    assert meta["master_seed"] == 1
    assert "content_sha256" in meta and "written_at" in meta
    assert meta["scenario"]["run.drops"] == 4
    assert "SeedSequence" in meta["seed_rule"]


def test_cdf_samples_collected():
    res = run_sweep(SMALL)
    key = ("conventional", 10.0)
    assert key in res.cdf_samples
    samples = res.cdf_samples[key]
    assert len(samples) == 4 * 14  # drops x pool users


def test_emit_summary_mentions_crossings():
    res = run_sweep(replace(SMALL, architectures=("conventional", "cooperative")))
    text = emit_summary(res)
    assert "SE crossing conventional / cooperative" in text


def test_scenario_file_parsing(tmp_path):
    path = tmp_path / "sc.cfg"
    path.write_text("""# comment
scenario.id = mytest
geometry.k1 = 7
run.drops = 3
sweep.start_dbw = 0
sweep.stop_dbw = 10
sweep.step_dbw = 5
run.architectures = conventional, cooperative
""")
    sc = load_scenario(str(path))
    assert sc.scenario_id == "mytest"
    assert sc.drops == 3
    assert sc.architectures == ("conventional", "cooperative")


def test_scenario_unknown_key(tmp_path):
    path = tmp_path / "bad.cfg"
    path.write_text("geometry.k3 = 9\n")
    with pytest.raises(ConfigError) as err:
        load_scenario(str(path))
    assert "geometry.k3" in str(err.value)


def test_scenario_bad_value(tmp_path):
    path = tmp_path / "bad2.cfg"
    path.write_text("run.drops = soon\n")
    with pytest.raises(ConfigError):
        load_scenario(str(path))


def test_scenario_validation_errors():
    with pytest.raises(ConfigError):
        replace(Scenario(), sweep_start_dbw=10.0, sweep_stop_dbw=0.0).validate()
    with pytest.raises(ConfigError):
        replace(Scenario(), drops=0).validate()
    with pytest.raises(ConfigError):
        replace(Scenario(), architectures=("warp",)).validate()
    with pytest.raises(ConfigError):
        replace(Scenario(), alpha=1.2).validate()


def _cli(*args):
    return subprocess.run([sys.executable, "-m", "dualsat.cli", *args],
                          capture_output=True, text=True)


def test_cli_table1_fast():
    out = _cli("table1")
    assert out.returncode == 0
    assert "Path loss" in out.stdout
    assert "FAIL" not in out.stdout


def test_cli_patterns():
    out = _cli("patterns")
    assert out.returncode == 0
    assert "# primary" in out.stdout and "# secondary" in out.stdout


def test_cli_run_and_crossing(tmp_path):
    cfg = tmp_path / "sc.cfg"
    cfg.write_text("""run.drops = 2
sweep.start_dbw = 0
sweep.stop_dbw = 10
sweep.step_dbw = 5
run.architectures = conventional, cooperative
report.cdf_powers_dbw = 5
""")
    out_dir = tmp_path / "out"
    run = _cli("run", str(cfg), "--out", str(out_dir))
    assert run.returncode == 0, run.stderr
    assert (out_dir / "results.csv").exists()
    cross = _cli("crossing", str(out_dir / "results.csv"),
                 "--a", "conventional", "--b", "cooperative")
    assert cross.returncode == 0
    assert "crossing" in cross.stdout


def test_cli_config_error_exit_code(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("nope.nope = 1\n")
    out = _cli("run", str(cfg))
    assert out.returncode == 2
    assert "config error" in out.stderr


def test_cli_missing_results_file(tmp_path):
    out = _cli("crossing", str(tmp_path / "nothing.csv"))
    assert out.returncode == 2
    assert "config error" in out.stderr
