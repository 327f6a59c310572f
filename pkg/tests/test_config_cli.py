import json

import pytest

from patchflow.cli import main
from patchflow.config import ConfigError, dump_config, parse_config
from patchflow.experiments import PatchRunConfig

SMALL = """\
# quick run
grid.n = 64
grid.L = 8.0
solver.dt = 0.02
solver.t_end = 0.1
patch.shape = perturbed_disc
patch.eta = 0.05
patch.amplitude = 0.1
patch.modes = 1, 3
vorticity.amplitude = 0.01
diagnostics.every = 2
seed = 3
"""


class TestParseConfig:
    def test_values(self):
        cfg = parse_config(SMALL)
        assert cfg.n == 64 and cfg.dt == 0.02 and cfg.modes == (1, 3) and cfg.seed == 3
        assert cfg.shape == "perturbed_disc"

    def test_defaults(self):
        assert parse_config("") == PatchRunConfig()

    def test_round_trip(self):
        cfg = parse_config(SMALL)
        assert parse_config(dump_config(cfg)) == cfg

    @pytest.mark.parametrize("text,key", [
        ("solver.dt = abc", "solver.dt"),
        ("grid.n = 100", "grid.n"),
        ("grid.q = 1", "grid.q"),
        ("patch.eta = 1.5", "patch.eta"),
        ("patch.modes = 1", "patch.modes"),
        ("seed = 1\nseed = 2", "seed"),
        ("solver.t_end =", "solver.t_end"),
        ("patch.shape = ellipse", "patch.semi_axes"),
    ])
    def test_errors_name_key(self, text, key):
        with pytest.raises(ConfigError) as info:
            parse_config(text)
        assert info.value.key == key
        assert str(info.value).startswith(key)


@pytest.fixture
def config_file(tmp_path):
    p = tmp_path / "run.cfg"
    p.write_text(SMALL)
    return p


class TestCli:
    def test_verify_spectral(self, capsys):
        assert main(["verify", "--suite", "spectral"]) == 0
        out = capsys.readouterr().out
        assert out.startswith("criterion,check,measured,tolerance,status")
        assert "FAIL" not in out

    def test_patch_too_large(self, tmp_path, capsys):
        p = tmp_path / "big.cfg"
        p.write_text("grid.n = 64\npatch.radius = 3.0\n")
        assert main(["run", str(p), "--out", str(tmp_path / "o")]) == 2
        assert "patch too large" in capsys.readouterr().err

    def test_bad_key_exit(self, tmp_path, capsys):
        p = tmp_path / "bad.cfg"
        p.write_text("solver.dt = abc\n")
        assert main(["run", str(p)]) == 2
        assert "solver.dt" in capsys.readouterr().err

    def test_missing_file(self, tmp_path):
        assert main(["run", str(tmp_path / "nope.cfg")]) == 2

    def test_numerical_failure(self, tmp_path, capsys):
        p = tmp_path / "cfl.cfg"
        p.write_text("grid.n = 64\nsolver.dt = 5.0\nsolver.t_end = 10\nvorticity.amplitude = 1.0\n")
        assert main(["run", str(p), "--out", str(tmp_path / "o"), "--quiet"]) == 3
        assert "CFL" in capsys.readouterr().err

    def test_run_and_analyze(self, tmp_path, config_file, capsys):
        out = tmp_path / "o"
        assert main(["run", str(config_file), "--out", str(out), "--quiet"]) == 0
        lines = (out / "series.csv").read_text().splitlines()
        assert lines[0].split(",")[:3] == ["t", "holder_X", "besov_dXu"]
        assert len(lines) == 1 + 4
        snap = out / "X_000005.snap"
        assert snap.exists()
        capsys.readouterr()
        assert main(["analyze", str(snap), "--norms", "besov:0.5:3:1,holder:0.5"]) == 0
        text = capsys.readouterr().out
        summary = json.loads(text[text.index("{"):])
        assert summary["name"] == "X" and summary["norms"]["holder:0.5"] > 0

    def test_deterministic_csv(self, tmp_path, config_file):
        for name in ("a", "b"):
            assert main(["run", str(config_file), "--out", str(tmp_path / name), "--quiet"]) == 0
        assert (tmp_path / "a" / "series.csv").read_bytes() == (tmp_path / "b" / "series.csv").read_bytes()

    def test_bad_norm_spec(self, tmp_path, config_file):
        out = tmp_path / "o"
        main(["run", str(config_file), "--out", str(out), "--quiet"])
        assert main(["analyze", str(out / "u_000000.snap"), "--norms", "sobolev:1"]) == 2
