import math
import subprocess
import sys

import numpy as np
import pytest

from gardner_ostrovsky.cli import OUTDIR_ENV, main, read_profile

FAST_BRANCH = ["branch", "--beta", "0.25", "--eps-max", "0.1", "--eps-step", "0.03", "--n", "64", "--max-n", "64"]


def data_rows(path):
    return [line for line in path.read_text().splitlines() if not line.startswith("#")]


def test_branch_rejects_beta_outside_range(capsys):
    assert main(["branch", "--beta", "2", "--k0", "1"]) == 2
    assert "beta in [0, 1)" in capsys.readouterr().err


def test_invalid_inputs_exit_2(tmp_path, capsys):
    assert main(FAST_BRANCH + ["--n", "7", "--outdir", str(tmp_path)]) == 2
    assert main(["verify-exact", "--family", "modified", "--alpha", "-1"]) == 2
    assert main(["evolve", "--dt", "-1", "--outdir", str(tmp_path)]) == 2
    with pytest.raises(SystemExit) as exc:
        main(["branch", "--beta", "abc"])
    assert exc.value.code == 2


def test_branch_outputs(tmp_path):
    assert main(FAST_BRANCH + ["--outdir", str(tmp_path)]) == 0
    text = (tmp_path / "branch.csv").read_text()
    assert text.startswith("# gardner_ostrovsky")
    assert "# beta = 0.25" in text
    rows = data_rows(tmp_path / "branch.csv")
    assert rows[0] == "eps,c,max_phi,min_phi,slack,residual,crest_count,asymmetry,fourier_decay,holder_exponent_or_blank"
    assert all(r.endswith(",") for r in rows[1:])  # smooth: no Holder exponent
    manifest = dict(line.split(" = ", 1) for line in data_rows(tmp_path / "manifest.txt"))
    assert manifest["termination"] == "amplitude_target" and "git_describe" in manifest
    prof = read_profile(str(sorted((tmp_path / "profiles").iterdir())[-1]))
    assert prof.grid.n == 64 and prof.cosines()[0] == pytest.approx(0.1)


def test_branch_output_is_reproducible(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for d in (a, b):
        assert main(FAST_BRANCH + ["--outdir", str(d), "--seed", "3", "--perturb", "0.1"]) == 0
    assert (a / "branch.csv").read_text().replace(str(a), "") == (b / "branch.csv").read_text().replace(str(b), "")


def test_config_file_and_flag_precedence(tmp_path, monkeypatch):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# test\nbeta = 0.25\neps_max = 0.05\neps-step = 0.02\nn = 64\nmax_n = 64\noutdir = ignored\n")
    env_dir = tmp_path / "env"
    monkeypatch.setenv(OUTDIR_ENV, str(env_dir))
    assert main(["branch", "--config", str(cfg), "--eps-max", "0.07"]) == 0
    text = (env_dir / "branch.csv").read_text()
    assert "# eps_max = 0.07" in text and "# n = 64" in text
    assert main(["branch", "--config", str(cfg), "--outdir", str(tmp_path / "flag")]) == 0
    assert (tmp_path / "flag" / "branch.csv").exists()
    bad = tmp_path / "bad.cfg"
    bad.write_text("no_such_key = 1\n")
    assert main(["branch", "--config", str(bad)]) == 2


@pytest.mark.slow
def test_reduced_branch_reaches_highest_wave_speed(tmp_path):
    assert main(["branch", "--beta", "0", "--sigma", "1", "--alpha", "0", "--k0", "1", "--eps-max", "0.9", "--outdir", str(tmp_path)]) == 0
    manifest = dict(line.split(" = ", 1) for line in data_rows(tmp_path / "manifest.txt"))
    assert abs(float(manifest["terminal_c"]) / (math.pi**2 / 9) - 1) < 0.02
    last = data_rows(tmp_path / "branch.csv")[-1].split(",")
    assert last[-1] != ""  # near-singular terminal point carries a Holder exponent


def test_verify_exact(capsys):
    assert main(["verify-exact", "--family", "reduced", "--sigma", "1", "--n", "4096"]) == 0
    assert main(["verify-exact", "--family", "modified", "--alpha", "2"]) == 0
    out = capsys.readouterr().out
    assert "PASS" in out
    assert main(["verify-exact", "--family", "reduced", "--use-printed-form"]) == 3
    assert "FAIL" in capsys.readouterr().out


def test_kernels(tmp_path, capsys):
    assert main(["kernels", "--outdir", str(tmp_path)]) == 0
    rows = data_rows(tmp_path / "kernels.csv")
    vals = np.array([[float(v) for v in r.split(",")] for r in rows[1:]])
    assert len(vals) == 1000
    assert vals[:, 3].max() <= 1e-4 and vals[:, 6].max() <= 1e-5
    assert main(["kernels", "--paper-G-form", "--outdir", str(tmp_path / "p")]) == 0
    assert "mismatch" in capsys.readouterr().out


def test_evolve_zero_and_branch_wave(tmp_path, capsys):
    assert main(["evolve", "--n", "32", "--outdir", str(tmp_path / "z")]) == 0
    rows = data_rows(tmp_path / "z" / "snapshots.csv")
    assert rows[0] == "t,x,u" and all(r.endswith(",0.0") for r in rows[1:])
    assert main(["evolve", "--beta", "0.25", "--eps", "0.2", "--n", "128", "--outdir", str(tmp_path / "w")]) == 0
    summary = dict(line.split(" = ", 1) for line in data_rows(tmp_path / "w" / "summary.txt"))
    assert float(summary["traveling_error"]) <= 1e-6


def test_evolve_from_profile_file(tmp_path):
    assert main(FAST_BRANCH + ["--outdir", str(tmp_path)]) == 0
    prof = sorted((tmp_path / "profiles").iterdir())[-1]
    c = float([l for l in prof.read_text().splitlines() if l.startswith("# c = ")][0][6:])
    out = tmp_path / "ev"
    assert main(["evolve", "--beta", "0.25", "--profile", str(prof), "--c", repr(c), "--outdir", str(out)]) == 0
    summary = dict(line.split(" = ", 1) for line in data_rows(out / "summary.txt"))
    assert float(summary["traveling_error"]) <= 1e-6


def test_evolve_breaking_exits_4(tmp_path):
    code = main(["evolve", "--cosine", "1", "--n", "64", "--t-final", "10", "--breaking-factor", "10", "--outdir", str(tmp_path)])
    assert code == 4
    summary = dict(line.split(" = ", 1) for line in data_rows(tmp_path / "summary.txt"))
    assert summary["breaking"] == "1"
    assert (tmp_path / "snapshots.csv").exists()


def test_diagnose(tmp_path, capsys):
    assert main(FAST_BRANCH + ["--outdir", str(tmp_path)]) == 0
    prof = sorted((tmp_path / "profiles").iterdir())[-1]
    assert main(["diagnose", "--beta", "0.25", "--profile", str(prof), "--c", "0.76", "--outdir", str(tmp_path)]) == 0
    assert "crest_count = 1" in capsys.readouterr().out
    assert main(["diagnose", "--profile", str(tmp_path / "missing.txt"), "--c", "1"]) == 2


def test_console_script_entry_point():
    out = subprocess.run([sys.executable, "-m", "gardner_ostrovsky.cli", "--version"], capture_output=True, text=True)
    assert out.returncode == 0 and out.stdout.strip()
