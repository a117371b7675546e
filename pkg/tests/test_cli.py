"""Sweep table emission, the single-case verifier and the argument plumbing."""
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from qslbounds import (
    LandauZenerProblem,
    OptimalProtocol,
    PiecewiseConstantField,
    constrained_protocol,
)
from qslbounds.cli import (
    SWEEP_CSV_HEADER,
    LambdaSpec,
    SweepConfig,
    emit_report,
    main,
    run_sweep,
    verify_case,
)

HALF_PI = 0.5 * math.pi


def bang_bang_config(**overrides) -> SweepConfig:
    base = dict(
        lambda_spec=LambdaSpec("factor", 0.2),
        theta_min=0.3,
        theta_max=1.2,
        theta_count=3,
    )
    base.update(overrides)
    return SweepConfig(**base)


# ---------------------------------------------------------------------------
# cap policy


def test_lambda_spec_resolution():
    assert math.isinf(LambdaSpec("unconstrained").resolve(1.0, 0.4))
    assert LambdaSpec("absolute", 1.5).resolve(1.0, 0.4) == 1.5
    # factor mode scales the critical cap delta^2 / (4 gamma)
    theta = math.atan2(1.0, 2.0)
    assert LambdaSpec("factor", 6.0).resolve(1.0, theta) == pytest.approx(
        1.5, abs=1e-12
    )
    assert math.isinf(LambdaSpec("factor", 6.0).resolve(1.0, HALF_PI))


def test_lambda_spec_validation():
    with pytest.raises(ValueError):
        LambdaSpec("adaptive", 1.0)
    with pytest.raises(ValueError):
        LambdaSpec("unconstrained", 1.0)
    with pytest.raises(ValueError):
        LambdaSpec("factor")
    with pytest.raises(ValueError):
        LambdaSpec("absolute", 0.0)


def test_sweep_config_validation():
    with pytest.raises(ValueError):
        SweepConfig(delta=0.0, lambda_spec=LambdaSpec("unconstrained"))
    with pytest.raises(ValueError):
        SweepConfig(theta_min=0.0)
    with pytest.raises(ValueError):
        SweepConfig(theta_min=1.0, theta_max=0.5)
    with pytest.raises(ValueError):
        SweepConfig(theta_max=HALF_PI + 0.2)
    with pytest.raises(ValueError):
        SweepConfig(theta_count=1)


# ---------------------------------------------------------------------------
# sweep rows


def test_unconstrained_sweep_rows():
    cfg = SweepConfig(
        lambda_spec=LambdaSpec("unconstrained"),
        theta_min=0.3,
        theta_max=HALF_PI,
        theta_count=4,
    )
    rows = run_sweep(cfg)
    assert len(rows) == 4
    assert rows[-1].regime == "trivial"
    assert rows[-1].t_opt == 0.0
    for row in rows[:-1]:
        assert row.regime == "unconstrained-composite"
        # an unbounded window kills the variance-based bounds but not the
        # eigenbasis one
        assert row.tmin_a == 0.0
        assert row.tmin_b == 0.0
        assert row.tmin_c1 > 0.0
        assert row.fidelity >= 0.999
        assert row.pass_a and row.pass_b and row.pass_c1 and row.pass_c2
    t_opts = [r.t_opt for r in rows[:-1]]
    assert all(a > b for a, b in zip(t_opts, t_opts[1:]))


def test_bang_bang_sweep_rows():
    rows = run_sweep(bang_bang_config())
    assert [r.regime for r in rows] == ["bang-bang"] * 3
    for row in rows:
        # below the critical cap the speed-limit time saturates the
        # anchored-variance bound
        assert row.tqsl_closed == pytest.approx(row.tmin_b, abs=1e-12)
        assert abs(row.tqsl_traj - row.tqsl_closed) < 1e-6
        assert row.fidelity >= 0.999


def test_csv_row_shape():
    row = run_sweep(bang_bang_config(theta_count=2))[0]
    cells = row.csv_row().split(",")
    assert len(cells) == len(SWEEP_CSV_HEADER.split(","))
    assert float(cells[0]) == row.theta  # 17-digit cells round-trip exactly
    assert cells[2] == "bang-bang"
    assert cells[11:] == ["1", "1", "1", "1"]


def test_sweep_header_is_frozen():
    assert SWEEP_CSV_HEADER == (
        "theta,gamma,regime,t_opt,tqsl_closed,tqsl_traj,"
        "tmin_a,tmin_b,tmin_c1,tmin_c2,fidelity,pass_a,pass_b,pass_c1,pass_c2"
    )


# ---------------------------------------------------------------------------
# report files


def test_emit_report_writes_csv_and_sidecar(tmp_path):
    cfg = bang_bang_config()
    rows = run_sweep(cfg)
    csv_path, sidecar = emit_report(rows, cfg, tmp_path / "table.csv")
    lines = csv_path.read_text().splitlines()
    assert lines[0] == SWEEP_CSV_HEADER
    assert len(lines) == 1 + len(rows)
    summary = sidecar.read_text()
    assert sidecar.name == "table.summary.txt"
    assert summary.startswith("qslbounds 0.1.0 sweep summary\n")
    assert "lambda_spec=factor=0.20000000000000001" in summary
    assert "rows=3" in summary
    assert "regimes=bang-bang" in summary
    assert "all_pass=1" in summary


def test_emit_report_is_byte_deterministic(tmp_path):
    cfg = bang_bang_config()
    paths = []
    for name in ("one.csv", "two.csv"):
        paths.append(emit_report(run_sweep(cfg), cfg, tmp_path / name))
    assert paths[0][0].read_bytes() == paths[1][0].read_bytes()
    assert paths[0][1].read_bytes() == paths[1][1].read_bytes()


def test_emit_report_refuses_empty_table(tmp_path):
    with pytest.raises(ValueError):
        emit_report([], bang_bang_config(), tmp_path / "empty.csv")


# ---------------------------------------------------------------------------
# single-case verifier


def test_verify_case_passes_on_optimal_protocol():
    report = verify_case(1.0, 0.9, LambdaSpec("factor", 6.0))
    assert report.passed
    assert set(report.checks) >= {
        "fidelity",
        "anandan_aharonov",
        "bhattacharyya",
        "pfeifer_envelope",
        "arenz_overlap",
        "dominance_a",
        "dominance_b",
        "dominance_c1",
        "dominance_c2",
        "closed_form_agreement",
    }
    text = report.text()
    assert "verify: PASS" in text
    assert "protocol: bang-off-bang" in text


def test_verify_case_trivial_angle():
    report = verify_case(1.0, HALF_PI, LambdaSpec("unconstrained"))
    assert report.passed
    assert report.protocol is None
    assert list(report.checks) == ["bounds_vanish"]


def test_verify_case_flags_a_broken_protocol():
    problem = LandauZenerProblem.from_gamma(1.0, 1.0, lambda_cap=1.5)
    good = constrained_protocol(problem)
    half = 0.5 * good.t_lambda
    field = PiecewiseConstantField(
        (
            (half, problem.lambda_cap),
            (good.t_off, 0.0),
            (half, -problem.lambda_cap),
        )
    )
    broken = OptimalProtocol(
        regime=good.regime,
        field=field,
        t_opt=field.total_duration,
        t_lambda=half,
        t_off=good.t_off,
        t_opt_ideal=field.total_duration,
    )
    report = verify_case(1.0, problem.theta, LambdaSpec("factor", 6.0), protocol=broken)
    assert not report.checks["fidelity"].passed
    assert not report.passed
    assert "verify: FAIL" in report.text()


# ---------------------------------------------------------------------------
# command line


def test_main_sweep_writes_files(tmp_path, capsys):
    out = tmp_path / "sweep.csv"
    rc = main(
        [
            "sweep",
            "--lambda-factor",
            "0.2",
            "--theta-min",
            "0.3",
            "--theta-max",
            "1.2",
            "--theta-count",
            "3",
            "--out",
            str(out),
        ]
    )
    assert rc == 0
    assert out.exists()
    assert (tmp_path / "sweep.summary.txt").exists()
    assert "(3 rows)" in capsys.readouterr().out


def test_main_sweep_requires_out():
    with pytest.raises(SystemExit):
        main(["sweep", "--unconstrained"])


def test_main_verify_exit_code_and_text(capsys):
    rc = main(["verify", "--theta", "0.9", "--lambda-factor", "6"])
    assert rc == 0
    assert "verify: PASS" in capsys.readouterr().out


def test_main_verify_writes_report(tmp_path, capsys):
    out = tmp_path / "case.txt"
    rc = main(
        ["verify", "--theta", str(HALF_PI), "--unconstrained", "--out", str(out)]
    )
    assert rc == 0
    assert "bounds_vanish" in out.read_text()
    capsys.readouterr()


def test_main_rejects_conflicting_cap_flags():
    with pytest.raises(SystemExit):
        main(["verify", "--theta", "0.9", "--unconstrained", "--lambda", "1.0"])


def test_main_requires_some_cap_policy():
    with pytest.raises(ValueError, match="drive cap unspecified"):
        main(["verify", "--theta", "0.9"])


def test_config_file_supplies_defaults(tmp_path, capsys):
    cfg_path = tmp_path / "case.json"
    cfg_path.write_text(
        json.dumps({"theta": 0.9, "lambda_factor": 6.0, "delta": 1.0})
    )
    rc = main(["verify", "--config", str(cfg_path)])
    assert rc == 0
    assert "theta=0.90000000000000002" in capsys.readouterr().out


def test_cli_flags_override_config_file(tmp_path, capsys):
    cfg_path = tmp_path / "case.json"
    cfg_path.write_text(json.dumps({"theta": 0.9, "lambda_factor": 6.0}))
    rc = main(["verify", "--config", str(cfg_path), "--theta", "0.7"])
    assert rc == 0
    assert "theta=0.69999999999999996" in capsys.readouterr().out


def test_config_file_must_hold_an_object(tmp_path):
    cfg_path = tmp_path / "bad.json"
    cfg_path.write_text("[1, 2]")
    with pytest.raises(ValueError, match="JSON object"):
        main(["verify", "--config", str(cfg_path), "--theta", "0.9"])


def test_main_proptest_deterministic(capsys):
    rc = main(["proptest", "--instances", "3", "--seed", "7"])
    assert rc == 0
    first = capsys.readouterr().out
    assert main(["proptest", "--instances", "3", "--seed", "7"]) == 0
    assert capsys.readouterr().out == first
    assert "PASS" in first


def test_module_entry_point_runs():
    proc = subprocess.run(
        [
            sys.executable,
            "-m",
            "qslbounds",
            "verify",
            "--theta",
            "0.9",
            "--lambda-factor",
            "6",
        ],
        capture_output=True,
        text=True,
        timeout=120,
    )
    assert proc.returncode == 0
    assert "verify: PASS" in proc.stdout
