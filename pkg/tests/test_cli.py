import json

import pytest

from coarsefill import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    return code, capsys.readouterr()


def test_parse_verify_flags():
    cfg = cli.parse_config(["verify", "chains", "--n-max", "4", "--trials", "200", "--seed", "7"])
    assert (cfg.command, cfg.action) == ("verify", "chains")
    assert cfg.params["n_max"] == 4 and cfg.params["trials"] == 200 and cfg.params["seed"] == 7


@pytest.mark.parametrize("argv", [[], ["verify", "chains", "--format", "xml"], ["verify", "chains", "--bogus"],
                                  ["verify", "chains", "--trials", "0"], ["filling", "scale", "--lmin", "50",
                                                                           "--lmax", "10"],
                                  ["asym", "beta", "--k", "11"], ["weyl", "inspect", "--type", "A"]])
def test_usage_errors(capsys, argv):
    code, out = run(capsys, *argv)
    assert code == cli.EXIT_USAGE
    assert "usage" in out.err


def test_config_file_and_override(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"trials": 5, "seed": 3, "n-max": 2}))
    cfg = cli.parse_config(["verify", "weyl", "--config", str(path), "--seed", "9"])
    assert cfg.params["trials"] == 5 and cfg.params["n_max"] == 2 and cfg.params["seed"] == 9


def test_unknown_config_key(tmp_path, capsys):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"colour": "red"}))
    code, out = run(capsys, "verify", "weyl", "--config", str(path))
    assert code == cli.EXIT_USAGE and "unknown config key" in out.err


def test_verify_report_schema(capsys):
    code, out = run(capsys, "verify", "asym")
    report = json.loads(out.out)
    assert code == 0
    assert report["schema"] == "report-v1"
    assert report["status"] == "pass"
    assert report["config"]["seed"] == 1
    assert {c["status"] for c in report["checks"]} <= {"pass", "demonstrated"}
    assert any(c["status"] == "demonstrated" for c in report["checks"])


def test_verify_is_deterministic(capsys):
    first = run(capsys, "verify", "chains", "--trials", "10", "--seed", "4")[1].out
    second = run(capsys, "verify", "chains", "--trials", "10", "--seed", "4")[1].out
    assert first == second


def test_time_budget_aborts(capsys):
    code, out = run(capsys, "verify", "all", "--time-budget", "1e-9")
    report = json.loads(out.out)
    assert code == cli.EXIT_ABORTED and report["status"] == "aborted"


def test_filling_scale_csv(capsys):
    code, out = run(capsys, "filling", "scale", "--family", "z2-rect", "--format", "csv")
    lines = out.out.splitlines()
    assert code == 0
    assert lines[0] == "ell,fill_mass"
    assert lines[1] == "40.0,100.0" and lines[-2] == "400.0,10000.0"
    assert lines[-1].startswith("# exponent=")
    assert abs(float(lines[-1].split("=")[1]) - 2) < 0.05


def test_growth_csv(capsys):
    code, out = run(capsys, "spaces", "growth", "--space", "z1", "--rmax", "4", "--format", "csv")
    assert out.out.splitlines()[:6] == ["r,lower,upper", "0,1,1", "1,1,1", "2,2,2", "3,3,3", "4,3,3"]


def test_distort_json(capsys):
    code, out = run(capsys, "spaces", "distort", "--rmax", "10000", "--points", "5")
    data = json.loads(out.out)
    assert [row["r"] for row in data["rows"]] == [1, 10, 100, 1000, 10000]
    assert abs(data["rows"][-1]["gap"]) < 1e-7
    assert "sublinear-compression" in data["flags"]


def test_weyl_inspect(capsys):
    code, out = run(capsys, "weyl", "inspect", "--type", "G", "--rank", "2")
    data = json.loads(out.out)
    assert data["generator_gram"] == [["2/1", "3/1"], ["3/1", "6/1"]]
    code, out = run(capsys, "weyl", "inspect", "--label", "A1xA1", "--format", "csv")
    assert out.out.splitlines()[1].startswith("0,")


def test_asym_commands(capsys):
    code, out = run(capsys, "asym", "beta", "--k", "6")
    data = json.loads(out.out)
    assert code == 0 and data["raw"][0] == "154/1"
    assert data["differences"]["factorial_pattern"]
    code, out = run(capsys, "asym", "phi", "--k", "4", "--grid", "log:1e2:1e6:9")
    assert code == 0
    code, out = run(capsys, "asym", "phi", "--k", "3", "--family", "alpha")
    assert code == cli.EXIT_FAIL


def test_output_directory_from_environment(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv(cli.OUTPUT_DIR_ENV, str(tmp_path))
    code, out = run(capsys, "asym", "beta", "--k", "3")
    assert out.out == ""
    assert json.loads((tmp_path / "asym-beta.json").read_text())["k"] == 3


def test_explicit_output_file(tmp_path, capsys):
    target = tmp_path / "sub" / "g.csv"
    run(capsys, "spaces", "growth", "--rmax", "2", "--format", "csv", "--output", str(target))
    assert target.read_text().startswith("r,lower,upper")
