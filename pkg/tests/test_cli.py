import json
import math
import subprocess
import sys

import pytest

from obstacle_eigen import analytic, cli

DISK = {"outer": {"circle": {"center": [0, 0], "radius": 1.0}}}
RING_OBSTACLE = {"kind": "region", "fourier": {"center": [0, 0], "a0": 0.5}}


def write(path, data):
    path.write_text(json.dumps(data))
    return str(path)


def run(tmp_path, *argv):
    out = tmp_path / "out"
    code = cli.main([*argv, "--out", str(out)])
    return code, out


def test_eigen_disk(tmp_path, capsys):
    dom = write(tmp_path / "d.json", DISK)
    code, out = run(tmp_path, "eigen", dom, "--h", str(1 / 128), "--json")
    assert code == cli.EXIT_OK
    res = json.loads((out / "eigen.json").read_text())
    assert res["lambda1"] == pytest.approx(analytic.disk_lambda1(1.0), rel=0.01)
    assert json.loads(capsys.readouterr().out)["lambda1"] == res["lambda1"]


def test_eigen_annulus_via_obstacle_and_field(tmp_path):
    dom = write(tmp_path / "d.json", DISK)
    obs = write(tmp_path / "o.json", RING_OBSTACLE)
    code, out = run(tmp_path, "eigen", dom, obs, "--h", str(1 / 128), "--field")
    assert code == cli.EXIT_OK
    res = json.loads((out / "eigen.json").read_text())
    assert res["lambda1"] == pytest.approx(analytic.annulus_lambda1(0.5, 1.0), rel=0.01)
    lines = (out / "field.csv").read_text().splitlines()
    assert lines[0] == "x,y,u" and len(lines[1].split(",")) == 3


def test_eigen_blocked_domain_exits_3(tmp_path):
    dom = write(tmp_path / "d.json", DISK)
    obs = write(tmp_path / "o.json", {"kind": "region", "fourier": {"center": [0, 0], "a0": 1.5}})
    code, out = run(tmp_path, "eigen", dom, obs)
    assert code == cli.EXIT_BLOCKED
    assert json.loads((out / "manifest.json").read_text())["exit_code"] == cli.EXIT_BLOCKED


def test_eigen_solver_failure_exits_2(tmp_path, monkeypatch):
    def failing(*args, **kwargs):
        raise cli.ConvergenceError("no convergence", float("nan"))

    monkeypatch.setattr(cli, "solve", failing)
    dom = write(tmp_path / "d.json", DISK)
    assert run(tmp_path, "eigen", dom)[0] == cli.EXIT_SOLVER


def test_malformed_input_exits_1(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(tmp_path, "eigen", str(bad))[0] == cli.EXIT_INPUT
    assert "malformed" in capsys.readouterr().err
    missing = write(tmp_path / "m.json", {"outer": {"circle": {"center": [0, 0]}}})
    assert run(tmp_path, "eigen", missing)[0] == cli.EXIT_INPUT


def test_usage_errors_exit_1(tmp_path):
    with pytest.raises(SystemExit) as exc:
        cli.main(["eigen", "--h", "abc", "x.json", "--out", str(tmp_path)])
    assert exc.value.code == cli.EXIT_INPUT
    with pytest.raises(SystemExit) as exc:
        cli.main(["nonsense"])
    assert exc.value.code == cli.EXIT_INPUT


def test_minkowski_chain_circle(tmp_path):
    t = [2 * math.pi * k / 400 for k in range(400)]
    verts = [[math.cos(a), math.sin(a)] for a in t]
    obs = write(tmp_path / "c.json", {"kind": "chain", "vertices": verts,
                                      "edges": [[k, (k + 1) % 400] for k in range(400)]})
    code, out = run(tmp_path, "minkowski", obs, "--h", str(1 / 128))
    assert code == cli.EXIT_OK
    est = json.loads((out / "minkowski.json").read_text())
    assert est["content"] == pytest.approx(4 * math.pi, rel=0.02)
    csv = (out / "minkowski.csv").read_bytes()
    assert csv.startswith(b"eps,area,quotient\n") and b"\r" not in csv


def test_minkowski_under_resolved_eps_exits_1(tmp_path):
    obs = write(tmp_path / "o.json", RING_OBSTACLE)
    code, _ = run(tmp_path, "minkowski", obs, "--h", "0.1", "--eps0", "0.05")
    assert code == cli.EXIT_INPUT


def test_optimize_infeasible_budget(tmp_path, capsys):
    cfg = {"domain": {"outer": {"circle": {"center": [0, 0], "radius": 2.25}},
                      "holes": [{"circle": {"center": [0, 0], "radius": 1.0}}]},
           "optimize": {"L": 2 * math.pi * 3.25, "kmax": 2, "h": 1 / 32}}
    code, _ = run(tmp_path, "optimize", write(tmp_path / "c.json", cfg))
    assert code == cli.EXIT_INPUT
    assert "the assumption L < H¹(∂Ω)" in capsys.readouterr().err


def test_optimize_malformed_config(tmp_path):
    cfg = {"domain": DISK, "optimize": {"L": -1.0}}
    assert run(tmp_path, "optimize", write(tmp_path / "c.json", cfg))[0] == cli.EXIT_INPUT


def disk_config(**extra):
    opt = {"L": math.pi, "kmax": 2, "h": 1 / 32, "max_iters": 12,
           "init": [{"center": [0.05, 0.0], "a0": 0.5, "a": [0.0, 0.03], "b": [0.0, 0.0]}]}
    opt.update(extra)
    return {"domain": DISK, "optimize": opt}


def test_optimize_disk_writes_result_and_trace(tmp_path):
    code, out = run(tmp_path, "optimize", write(tmp_path / "c.json", disk_config()))
    assert code in (cli.EXIT_OK, cli.EXIT_STALLED)
    res = json.loads((out / "result.json").read_text())
    assert res["perimeter"] == pytest.approx(math.pi, abs=5e-3)
    assert res["center_offset"] < 0.05
    trace = (out / "trace.csv").read_text().splitlines()
    assert len(trace) >= 2


def test_optimize_stalled_exits_4(tmp_path):
    cfg = disk_config(max_iters=1)
    assert run(tmp_path, "optimize", write(tmp_path / "c.json", cfg))[0] == cli.EXIT_STALLED


def test_optimize_touching_exits_5(tmp_path):
    cfg = disk_config(L=6.0, init=[{"center": [0.02, 0.0], "a0": 0.9, "a": [0.0, 0.01], "b": [0.0, 0.0]}])
    code, out = run(tmp_path, "optimize", write(tmp_path / "c.json", cfg))
    assert code == cli.EXIT_TOUCHING
    assert json.loads((out / "result.json").read_text())["status"] == "touching"


def test_outputs_are_deterministic(tmp_path):
    cfg = write(tmp_path / "c.json", disk_config(max_iters=3))
    cli.main(["optimize", cfg, "--out", str(tmp_path / "a")])
    cli.main(["optimize", cfg, "--out", str(tmp_path / "b")])
    for name in ("result.json", "trace.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_manifest_fields_and_env_default(tmp_path, monkeypatch):
    monkeypatch.setenv(cli.OUT_ENV, str(tmp_path / "env"))
    dom = write(tmp_path / "d.json", DISK)
    assert cli.main(["eigen", dom, "--h", "0.0625", "--seed", "7"]) == cli.EXIT_OK
    manifest = json.loads((tmp_path / "env" / "manifest.json").read_text())
    assert manifest["command"] == "eigen" and manifest["seed"] == 7
    assert manifest["exit_code"] == 0 and manifest["wall_clock_s"] >= 0
    assert {"config", "output_dir", "version", "argv", "started"} <= manifest.keys()


def test_crashed_run_leaves_manifest(tmp_path, monkeypatch):
    def crash(*args, **kwargs):
        raise RuntimeError("boom")

    monkeypatch.setattr(cli, "solve", crash)
    dom = write(tmp_path / "d.json", DISK)
    with pytest.raises(RuntimeError):
        run(tmp_path, "eigen", dom)
    manifest = json.loads((tmp_path / "out" / "manifest.json").read_text())
    assert manifest["exit_code"] is None and "boom" in manifest["error"]


def test_verify_minkowski_suite_json(tmp_path, capsys):
    code, out = run(tmp_path, "verify", "--suite", "minkowski", "--json")
    report = json.loads(capsys.readouterr().out)
    assert code == cli.EXIT_OK and report["all_pass"]
    for check in report["checks"]:
        assert {"check", "expected", "got", "tol", "pass"} <= check.keys()
    assert json.loads((out / "verify.json").read_text()) == report["checks"]


def test_verify_annulus_suite_reports_reference_values(tmp_path):
    code, out = run(tmp_path, "verify", "--suite", "annulus")
    report = {c["check"]: c for c in json.loads((out / "verify.json").read_text())}
    assert code == cli.EXIT_OK
    assert all(c["pass"] for c in report.values())
    expected = sorted(c["expected"] for c in report.values())
    for value in (0.0229, 6.4554, 6.6180):
        assert any(abs(e - value) < 1e-9 for e in expected)


def test_console_script_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "obstacle_eigen.cli", "eigen", "--help"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "--boundary" in proc.stdout
