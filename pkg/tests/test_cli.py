import json
import subprocess
import sys

import pytest

from matchent.cli import (
    EXIT_OK,
    EXIT_USAGE,
    RunConfig,
    build_family,
    build_grid,
    main,
)


def write_config(tmp_path, data):
    path = tmp_path / "config.json"
    path.write_text(json.dumps(data))
    return str(path)


def cycle_config(**overrides):
    data = {
        "family": {"base": {"kind": "single"}, "connection": {"kind": "identity"},
                   "name": "cycle"},
        "grid": {"kind": "linear", "lo": -4.0, "hi": 4.0, "n": 17},
    }
    data.update(overrides)
    return data


def test_config_round_trip():
    cfg = RunConfig()
    clone = RunConfig.from_dict(cfg.to_dict())
    assert clone.to_dict() == cfg.to_dict()
    assert clone.digest() == cfg.digest()


def test_config_rejects_unknown_keys_and_bad_tolerances():
    with pytest.raises(ValueError):
        RunConfig.from_dict({"what": 1})
    with pytest.raises(ValueError):
        RunConfig.from_dict({"tolerances": {"eigen": -1.0}})


def test_build_family_and_grid():
    cfg = RunConfig.from_dict(cycle_config())
    fam = build_family(cfg)
    assert fam.width == 1 and fam.is_permutation
    grid = build_grid(cfg)
    assert len(grid) == 17 and grid[0] == -4.0


def test_sweep_command_deterministic(tmp_path):
    cfg_path = write_config(tmp_path, cycle_config())
    out1 = tmp_path / "run1"
    out2 = tmp_path / "run2"
    assert main(["sweep", "--config", cfg_path, "--out", str(out1)]) == EXIT_OK
    assert main(["sweep", "--config", cfg_path, "--out", str(out2)]) == EXIT_OK
    csv1 = (out1 / "cycle_curve.csv").read_bytes()
    csv2 = (out2 / "cycle_curve.csv").read_bytes()
    assert csv1 == csv2
    report = json.loads((out1 / "sweep_report.json").read_text())
    assert set(report) >= {"command", "config_digest", "findings", "pass"}
    assert report["pass"] is True and report["findings"] == []


def test_sweep_rejects_malformed_connection(tmp_path):
    bad = cycle_config()
    bad["family"] = {"base": {"kind": "cycle", "length": 4},
                     "connection": {"kind": "matrix",
                                    "matrix": [[1, 0], [0, 1], [1, 1]]},
                     "name": "bad"}
    cfg_path = write_config(tmp_path, bad)
    assert main(["sweep", "--config", cfg_path, "--out", str(tmp_path)]) == EXIT_USAGE


def test_check_command_on_torus_family(tmp_path):
    data = {
        "family": {"base": {"kind": "cycle", "length": 4},
                   "connection": {"kind": "identity"}, "name": "c4"},
        "grid": {"kind": "linear", "lo": -5.0, "hi": 5.0, "n": 21},
    }
    cfg_path = write_config(tmp_path, data)
    assert main(["check", "--config", cfg_path, "--out", str(tmp_path)]) == EXIT_OK
    report = json.loads((tmp_path / "check_report.json").read_text())
    assert report["pass"] is True
    assert (tmp_path / "c4_margins.csv").exists()
    header = (tmp_path / "c4_margins.csv").read_text().splitlines()[0]
    assert header == "p,lower_margin,upper_margin"


def test_check_rejects_irregular_family(tmp_path, capsys):
    data = {
        "family": {"base": {"kind": "cycle", "length": 4},
                   "connection": {"kind": "matrix",
                                  "matrix": [[1, 0, 0, 0]] * 4},
                   "name": "lopsided"},
    }
    cfg_path = write_config(tmp_path, data)
    assert main(["check", "--config", cfg_path, "--out", str(tmp_path)]) == EXIT_USAGE
    err = capsys.readouterr().err
    assert "degree histogram" in err


def test_oracle_command(tmp_path):
    data = {
        "family": {"base": {"kind": "cycle", "length": 4},
                   "connection": {"kind": "shift"}, "name": "c4-shift"},
        "layer_counts": [2, 3],
    }
    cfg_path = write_config(tmp_path, data)
    assert main(["oracle", "--config", cfg_path, "--out", str(tmp_path)]) == EXIT_OK
    report = json.loads((tmp_path / "oracle_report.json").read_text())
    assert report["pass"] is True
    assert all(row["equal"] for row in report["rows"])
    assert len(report["rows"]) == 2 * 3


def test_oracle_exact_flag(tmp_path):
    cfg_path = write_config(tmp_path, cycle_config(layer_counts=[3]))
    assert main(["oracle", "--config", cfg_path, "--exact", "5/3",
                 "--out", str(tmp_path)]) == EXIT_OK
    report = json.loads((tmp_path / "oracle_report.json").read_text())
    assert [row["x"] for row in report["rows"]] == ["5/3"]


def test_maxpres_command(tmp_path):
    data = {
        "family": {"base": {"kind": "cycle", "length": 4},
                   "connection": {"kind": "identity"}, "name": "c4"},
        "grid": {"kind": "linear", "lo": -3.0, "hi": 3.0, "n": 13},
    }
    cfg_path = write_config(tmp_path, data)
    assert main(["maxpres", "--config", cfg_path, "--out", str(tmp_path)]) == EXIT_OK
    report = json.loads((tmp_path / "maxpres_report.json").read_text())
    assert report["pass"] is True
    assert report["connections"] >= 4


def test_bounds_command(tmp_path):
    rc = main(["bounds", "--names", "ghl,low1,gh,low1-gh", "--r", "4",
               "--pgrid", "0:1:41", "--out", str(tmp_path)])
    assert rc == EXIT_OK
    lines = (tmp_path / "bounds.csv").read_text().splitlines()
    assert lines[0] == "p,ghl,low1,gh,low1-gh"
    assert len(lines) == 42
    script = (tmp_path / "bounds.gp").read_text()
    assert "bounds.csv" in script


def test_usage_errors():
    assert main(["bounds", "--pgrid", "nonsense"]) == EXIT_USAGE
    assert main(["no-such-command"]) == EXIT_USAGE


def test_console_script_runs(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "matchent.cli", "bounds", "--names", "gh",
         "--r", "3", "--pgrid", "0:1:11", "--out", str(tmp_path)],
        capture_output=True, text=True)
    assert proc.returncode == 0
    assert (tmp_path / "bounds.csv").exists()
