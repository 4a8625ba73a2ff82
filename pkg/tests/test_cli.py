import re

import pytest

from qbattery.cli import main

ERROR_LINE = re.compile(r"^qbattery: error: [a-z-]+: \S.*\n$")


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def assert_one_line_error(err):
    assert ERROR_LINE.match(err), err


def test_point_prints_observables(capsys):
    code, out, err = run(capsys, "point", "--dmu", "0.5", "--eps-qb", "0.4")
    assert code == 0 and err == ""
    values = dict(line.split(" = ") for line in out.splitlines())
    assert values["regime"] == "off_resonant_empty"
    assert float(values["W_ext_beta"]) > 0


def test_point_rejects_grid(capsys):
    code, _, err = run(capsys, "point", "--dmu", "0,1,3")
    assert code == 2
    assert_one_line_error(err)


def test_sweep_to_stdout_and_file(capsys, tmp_path):
    code, out, _ = run(capsys, "sweep", "--dmu", "0,0.7,15", "--dt", "-0.05,0.05,3", "--eps-qb", "0.4")
    assert code == 0 and out.count("\n") == 46
    path = tmp_path / "s.csv"
    code, out2, _ = run(capsys, "sweep", "--dmu", "0,0.7,15", "--dt", "-0.05,0.05,3", "--eps-qb", "0.4",
                        "--out", str(path), "--jobs", "2")
    assert code == 0 and out2 == ""
    assert path.read_text() == out


def test_sweep_uses_config_paths(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    csv = tmp_path / "out.csv"
    cfg.write_text(f"[sweep]\ndmu = 0, 0.4, 3\n[output]\ncsv_path = {csv}\n")
    code, out, _ = run(capsys, "sweep", "--config", str(cfg))
    assert code == 0 and out == ""
    assert csv.read_text().count("\n") == 4


def test_optimize(capsys):
    code, out, _ = run(capsys, "optimize", "--dmu", "0.5", "--eps-qb", "-0.5,1.0,31")
    assert code == 0
    x = float(out.splitlines()[0].split(" = ")[1])
    assert 0.4 <= x <= 0.6


def test_chart_from_csv(capsys, tmp_path):
    csv = tmp_path / "s.csv"
    run(capsys, "sweep", "--dmu", "0,0.7,8", "--eps-qb", "0.4", "--out", str(csv))
    code, out, _ = run(capsys, "chart", "--csv", str(csv), "--y", "W_ext_beta,W_rho_beta")
    assert code == 0 and out.startswith("<svg") and out.count("<polyline") == 2


def test_chart_fresh_sweep(capsys):
    code, out, _ = run(capsys, "chart", "--dmu", "0,0.5,4")
    assert code == 0 and "<polyline" in out


@pytest.mark.parametrize("argv, code", [
    (["chart", "--dmu", "0,0.5,3", "--y", "nope"], 2),
    (["chart", "--csv", "/nonexistent/x.csv"], 2),
    (["sweep", "--config", "/nonexistent/run.cfg"], 2),
    (["sweep", "--dmu", "0,1,0"], 2),
    (["sweep", "--dmu", "0.1", "--out", "/nonexistent/dir/x.csv"], 2),
    (["optimize", "--axis", "dmu", "--dmu", "0,0.5,3", "--eps-qb", "0,1,3"], 2),
])
def test_failure_paths(capsys, argv, code):
    got, _, err = run(capsys, *argv)
    assert got == code
    assert_one_line_error(err)


def test_bound_state_exit(capsys, tmp_path):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("[leads]\nnu_alpha = 0\n")
    code, _, err = run(capsys, "point", "--config", str(cfg))
    assert code == 2
    assert err.startswith("qbattery: error: bound-state: ")
    assert_one_line_error(err)


def test_non_convergence_exit(capsys, tmp_path):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("[numerics]\nabs_tol = 1e-300\nrel_tol = 1e-300\nmax_subdiv = 1\n")
    code, _, err = run(capsys, "point", "--config", str(cfg), "--dmu", "0.5")
    assert code == 3
    assert err.startswith("qbattery: error: non-convergence: ")
    assert_one_line_error(err)


def test_validate_decoupled_exit(capsys, tmp_path):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("[leads]\nnu_alpha = 0\n")
    code, out, _ = run(capsys, "validate", "--config", str(cfg))
    assert code == 1
    assert out.splitlines()[0].startswith("FAIL bound_states")
    assert sum(line.startswith("SKIP") for line in out.splitlines()) == 13


def test_usage_error_exit(capsys):
    with pytest.raises(SystemExit) as info:
        main(["nosuch"])
    assert info.value.code == 2
