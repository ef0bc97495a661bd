import json

import numpy as np
import pytest

from confmod import cli


def test_group_suite_passes(tmp_path):
    out = tmp_path / "report.json"
    config = cli.SuiteConfig(suite="group", dims=(2, 3), seed=42, out=str(out))
    report = cli.run(config)
    assert not report.failed()
    data = json.loads(out.read_text())
    assert data["tool"] == "confmod"
    assert data["summary"]["fail"] == 0
    assert all(c["anchor"] for c in data["checks"])


def test_reports_are_deterministic():
    config = cli.SuiteConfig(suite="modular", dims=(2,), seed=7)
    a = cli.run(config).to_dict()
    b = cli.run(config).to_dict()
    a.pop("wall_clock_s")
    b.pop("wall_clock_s")
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)


def test_bw_suite_deterministic_and_green():
    config = cli.SuiteConfig(suite="bw", sizes=(64, 128, 256), seed=7)
    r1 = cli.run(config)
    r2 = cli.run(config)
    assert [c["value"] for c in r1.checks] == [c["value"] for c in r2.checks]
    assert not r1.failed()


def test_unknown_suite_is_configuration_error(tmp_path):
    out = tmp_path / "never.json"
    config = cli.SuiteConfig(suite="frobnicate", out=str(out))
    with pytest.raises(cli.ConfigurationError):
        cli.run(config)
    assert not out.exists()          # no partial report


def test_invalid_dimension_rejected():
    with pytest.raises(cli.ConfigurationError):
        cli.run(cli.SuiteConfig(suite="group", dims=(1,)))


def test_tolerance_floor_validation():
    with pytest.raises(cli.ConfigurationError):
        cli.run(cli.SuiteConfig(suite="group", tolerances={"group_identity": 1e-30}))


def test_main_exit_codes(tmp_path):
    assert cli.main(["--suite", "group", "--d", "2", "--seed", "1"]) == 0
    assert cli.main(["--suite", "nope"]) == 2
    assert cli.main(["--suite", "group", "--d", "1,2"]) == 2
    # duality suite reports the non-converging ladder as a failure
    assert cli.main(["--suite", "duality", "--sizes", "64,128"]) == 1


def test_trajectory_export(tmp_path):
    path = tmp_path / "traj.csv"
    cli.export_trajectory("cone", 4, [1, 0, 0, 0], np.linspace(-2, 2, 5), str(path))
    lines = path.read_text().splitlines()
    assert lines[0] == "t,x0,x1,x2,x3"
    assert len(lines) == 6               # header + 5 rows
    t, x0 = lines[-1].split(",")[:2]
    assert float(x0) == pytest.approx(np.exp(2.0))


def test_trajectory_main(tmp_path):
    path = tmp_path / "w.csv"
    code = cli.main(["--trajectory", "wedge", "--point", "0,1,0,0",
                     "--t-grid=-1,1,5", "--csv", str(path)])
    assert code == 0
    lines = path.read_text().splitlines()
    assert len(lines) == 6


def test_csv_formatting(tmp_path):
    path = tmp_path / "vals.csv"
    cli.export_csv([[1.0 / 3.0, "x"]], ["v", "s"], str(path))
    text = path.read_text()
    assert "\r" not in text
    assert "0.33333333333333331" in text     # 17 significant digits


def test_empty_trajectory_header_only(tmp_path):
    path = tmp_path / "empty.csv"
    cli.export_csv([], ["t", "x0"], str(path))
    assert path.read_text() == "t,x0\n"


def test_report_csv(tmp_path):
    config = cli.SuiteConfig(suite="group", dims=(2,), seed=3)
    report = cli.run(config)
    path = tmp_path / "checks.csv"
    cli.export_report_csv(report, str(path))
    lines = path.read_text().splitlines()
    assert lines[0] == "name,anchor,status,value,threshold"
    assert len(lines) == len(report.checks) + 1


def test_bw_csv_one_row_per_ladder_size(tmp_path):
    config = cli.SuiteConfig(suite="bw", sizes=(64, 128, 256), seed=7)
    report = cli.run(config)
    path = tmp_path / "bw.csv"
    cli.export_report_csv(report, str(path))
    lines = path.read_text().splitlines()
    for L in (64, 128, 256):
        assert sum(line.startswith(f"bw-defect-L{L},") for line in lines) == 1


def test_tolerance_override_through_main(tmp_path):
    out = tmp_path / "r.json"
    # an absurdly tight override makes the group suite fail: the override
    # is wired through, and failures drive the exit code
    code = cli.main(["--suite", "group", "--d", "2", "--seed", "1",
                     "--tol", "group_identity=1e-15", "--out", str(out)])
    assert code == 1
    data = json.loads(out.read_text())
    assert any(c["status"] == "fail" for c in data["checks"])
