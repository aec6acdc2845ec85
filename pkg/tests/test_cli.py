import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from qubitkraus import qops
from qubitkraus.cli import main
from qubitkraus.model import ModelParams, damping_rates


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_rates_defaults(capsys):
    code, out, _ = run(capsys, "rates")
    assert code == 0
    (row,) = rows(out)
    assert row["gamma1"] == row["gamma2"]
    assert float(row["nu2"]) == pytest.approx(0.2)


def test_rates_beta100(capsys):
    code, out, _ = run(capsys, "rates", "--beta", "100")
    assert code == 0
    (row,) = rows(out)
    r = damping_rates(ModelParams(beta=100))
    assert row["gamma1"] == f"{r.gamma1:.12g}"
    assert row["gamma2"] == f"{r.gamma2:.12g}"
    assert row["gamma1"] != row["gamma2"]


def test_rates_beta_list(capsys):
    code, out, _ = run(capsys, "rates", "--beta-list", "0,50,100")
    assert code == 0 and [r["beta"] for r in rows(out)] == ["0", "50", "100"]


@pytest.mark.parametrize(
    "argv",
    [
        ["rates", "--omega", "0"],
        ["rates", "--omega", "abc"],
        ["rates", "--beta-list", "50,0"],
        ["rates", "--beta-min", "0"],
        ["evolve", "--steps", "1"],
        ["evolve", "--t-max", "-1"],
        ["evolve", "--beta-list", "0,50"],
        ["esd", "--picture", "sideways"],
        ["nonsense"],
        [],
    ],
)
def test_usage_errors(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == 2


def test_singular_exit_code(capsys):
    code, _, err = run(capsys, "rates", "--beta", "0.2")
    assert code == 3 and "singular" in err


def test_help_lists_defaults(capsys):
    code, out, _ = run(capsys, "rates", "--help")
    assert code == 0
    for text in ("--omega", "0.1", "0.02", "--temperature", "100", "--cutoff"):
        assert text in out


def test_verify_ok(capsys):
    code, out, _ = run(capsys, "verify")
    assert code == 0
    assert "completeness" in out
    assert "tau=0 anchor B = 8" in out and "B=8" in out
    assert "A'=0.0625" in out
    assert "asymptotic sums equal {I/4, 3I/4}" in out
    assert "found sum(K1..K6 K K)=3I/4, sum(K7,K8 K K)=I/4" in out
    assert "-> OK" in out


def test_evolve_csv(capsys, tmp_path):
    out_path = tmp_path / "evolve.csv"
    code, _, _ = run(capsys, "evolve", "--steps", "21", "--out", str(out_path))
    assert code == 0
    data = rows(out_path.read_text(encoding="utf-8"))
    assert list(data[0]) == ["t", "concurrence", "purity", "trace_residual", "oracle_trace_distance"]
    assert float(data[0]["t"]) == 0.0
    assert float(data[0]["concurrence"]) == pytest.approx(1.0, abs=1e-12)
    assert max(float(r["oracle_trace_distance"]) for r in data) <= 1e-6
    assert out_path.read_bytes().endswith(b"\n")


def test_esd_csv(capsys):
    code, out, _ = run(capsys, "esd", "--beta-list", "0,50,100")
    assert code == 0
    data = rows(out)
    assert len(data) == 3
    times = [float(r["esd_time"]) for r in data]
    assert times[0] < times[1] < times[2]
    for r in data:
        assert float(r["bracket_lo"]) < float(r["esd_time"]) < float(r["bracket_hi"])


def test_surface_deterministic(capsys, monkeypatch):
    argv = ["surface", "--beta-min", "0", "--beta-max", "100", "--beta-steps", "3", "--steps", "5"]
    monkeypatch.setenv("QUBITKRAUS_WORKERS", "1")
    _, one, _ = run(capsys, *argv)
    monkeypatch.setenv("QUBITKRAUS_WORKERS", "3")
    _, many, _ = run(capsys, *argv)
    assert one == many
    data = rows(one)
    assert list(data[0]) == ["beta", "t", "concurrence"]
    assert len(data) == 15


def test_kraus_analytic_t0(capsys):
    code, out, _ = run(capsys, "kraus", "--t", "0", "--source", "analytic", "--picture", "interaction")
    assert code == 0
    dump = json.loads(out)
    (entry,) = dump["entries"]
    assert entry["time"] == 0.0 and entry["picture"] == "interaction"
    assert entry["weights"].count(0.0) == 7
    k8 = np.array(entry["operators"][7]["real"]) + 1j * np.array(entry["operators"][7]["imag"])
    assert np.array_equal(k8, -np.eye(4))
    assert entry["completeness_residual"] == 0.0


def test_kraus_analytic_printed_fails_beyond_t0(capsys):
    code, _, err = run(capsys, "kraus", "--t", "0.001", "--source", "analytic")
    assert code == 1 and "radicand" in err
    code, out, _ = run(capsys, "kraus", "--t", "0.001", "--source", "analytic", "--b-form", "corrected")
    assert code == 0 and json.loads(out)["entries"][0]["completeness_residual"] <= 1e-9


def test_kraus_numeric(capsys):
    code, out, _ = run(capsys, "kraus", "--t", "0,0.002", "--beta", "50")
    assert code == 0
    entries = json.loads(out)["entries"]
    assert len(entries[0]["weights"]) == 1 and len(entries[1]["weights"]) == 8
    assert sum(entries[1]["weights"]) == pytest.approx(4.0)


def test_reduce_dump(capsys, tmp_path):
    path = tmp_path / "partner.txt"
    np.savetxt(path, np.diag([0.25, 0.75]))
    code, out, _ = run(capsys, "reduce", "--t", "0.002", "--partner", str(path), "--trace-out", "2")
    assert code == 0
    dump = json.loads(out)
    assert dump["trace_out"] == 2
    assert dump["entries"][0]["completeness_residual"] <= 1e-9
    assert sum(dump["entries"][0]["weights"]) == pytest.approx(2.0)


def test_initial_state_file(capsys, tmp_path):
    good = tmp_path / "rho.npy"
    np.save(good, qops.bell_plus())
    code, out, _ = run(capsys, "evolve", "--steps", "3", "--initial", str(good))
    assert code == 0 and float(rows(out)[0]["concurrence"]) == pytest.approx(1.0)
    bad = tmp_path / "bad.npy"
    np.save(bad, np.eye(4))
    code, _, _ = run(capsys, "evolve", "--steps", "3", "--initial", str(bad))
    assert code == 2
    code, _, _ = run(capsys, "evolve", "--initial", str(tmp_path / "missing.txt"))
    assert code == 4


def test_io_error(capsys, tmp_path):
    code, _, _ = run(capsys, "rates", "--out", str(tmp_path / "no" / "such" / "dir.csv"))
    assert code == 4


def test_config_file_and_override(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# parameters\nbeta = 100\nomega=0.1\n", encoding="utf-8")
    _, from_file, _ = run(capsys, "rates", "--config", str(cfg))
    assert rows(from_file)[0]["beta"] == "100"
    _, overridden, _ = run(capsys, "rates", "--config", str(cfg), "--beta", "50")
    assert rows(overridden)[0]["beta"] == "50"
    cfg.write_text("colour = blue\n", encoding="utf-8")
    assert run(capsys, "rates", "--config", str(cfg))[0] == 2
    cfg.write_text("picture = sideways\n", encoding="utf-8")
    assert run(capsys, "rates", "--config", str(cfg))[0] == 2
    assert run(capsys, "rates", "--config", str(tmp_path / "missing.cfg"))[0] == 4


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "qubitkraus.cli", "rates", "--beta", "50"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert proc.stdout.startswith("beta,nu1,nu2,nu3,gamma1,gamma2\n")
