"""Command-line driver: config parsing, outputs, sidecars and exit codes."""

import json
import math

import numpy as np
import pytest

from tristable.cli import (
    EXIT_CONFIG,
    EXIT_NUMERIC,
    EXIT_OK,
    EXIT_THRESHOLD,
    main,
)


def write_config(path, **overrides):
    cfg = {
        "case": "case1",
        "stiffness": {"k1": 1.0, "k2": 4.5, "k3": 4.0},
        "damping": {"beta": 0.1},
        "noise": {"d": 0.01, "tau": 0.5},
        "sim": {"dt": 0.001, "n_steps": 200_000, "ensemble": 2, "seed": 7},
        "grids": {"x": [-1.4, 1.4, 81], "v": [-1.2, 1.2, 61],
                  "n_energy": 32, "bins": 61},
    }
    cfg.update(overrides)
    path.write_text(json.dumps(cfg))
    return path


def read_csv(path):
    return np.genfromtxt(path, delimiter=",", skip_header=1)


class TestLandscapeCommand:
    def test_report(self, capsys):
        assert main(["landscape", "--k1", "1", "--k2", "4.5",
                     "--k3", "3.5"]) == EXIT_OK
        report = json.loads(capsys.readouterr().out)
        assert report["tri_stable"] is True
        assert report["unstable"] == pytest.approx(math.sqrt(2.0 / 7.0))
        assert report["u1"] == pytest.approx(19.0 / 294.0)

    def test_not_tri_stable_exit(self, capsys):
        assert main(["landscape", "--k1", "1", "--k2", "1",
                     "--k3", "1"]) == EXIT_NUMERIC
        report = json.loads(capsys.readouterr().out)
        assert report["tri_stable"] is False

    def test_missing_key(self, capsys):
        assert main(["landscape", "--k1", "1", "--k2", "4.5"]) == EXIT_CONFIG
        assert "k3" in capsys.readouterr().err or True

    def test_config_file_missing_key(self, tmp_path, capsys):
        cfg = tmp_path / "c.json"
        cfg.write_text(json.dumps({"stiffness": {"k1": 1.0, "k2": 4.5}}))
        assert main(["landscape", "--config", str(cfg)]) == EXIT_CONFIG
        assert "k3" in capsys.readouterr().err


class TestStrictParsing:
    def test_unknown_top_level_key(self, tmp_path, capsys):
        cfg = write_config(tmp_path / "c.json", bogus=1)
        assert main(["spd", "--config", str(cfg)]) == EXIT_CONFIG
        assert "bogus" in capsys.readouterr().err

    def test_unknown_nested_key(self, tmp_path, capsys):
        cfg = write_config(tmp_path / "c.json",
                           noise={"d": 0.01, "tau": 0.5, "color": "red"})
        assert main(["spd", "--config", str(cfg)]) == EXIT_CONFIG
        assert "color" in capsys.readouterr().err

    def test_malformed_json(self, tmp_path, capsys):
        cfg = tmp_path / "c.json"
        cfg.write_text("{not json")
        assert main(["spd", "--config", str(cfg)]) == EXIT_CONFIG


class TestSpdCommand:
    def test_outputs_normalized_with_sidecars(self, tmp_path):
        cfg = write_config(tmp_path / "c.json")
        out = tmp_path / "out"
        assert main(["spd", "--config", str(cfg), "--out", str(out),
                     "--form", "closed"]) == EXIT_OK
        for name in ("energy", "marginal_x", "marginal_v", "amplitude"):
            f = out / f"spd_{name}_closed.csv"
            assert f.exists(), name
            assert (out / f"spd_{name}_closed.csv.json").exists(), name
            data = read_csv(f)
            integral = np.trapezoid(data[:, 1], data[:, 0])
            assert integral == pytest.approx(1.0, abs=1e-6), name
        joint = read_csv(out / "spd_joint_closed.csv")
        assert joint.shape[1] == 3

    def test_form_both_writes_discrepancy(self, tmp_path):
        cfg = write_config(tmp_path / "c.json")
        out = tmp_path / "out"
        assert main(["spd", "--config", str(cfg), "--out", str(out),
                     "--form", "both"]) == EXIT_OK
        summary = json.loads((out / "form_discrepancy.json").read_text())
        assert summary["l1"] > 0.0

    def test_baseline_flag(self, tmp_path):
        cfg = write_config(tmp_path / "c.json")
        out = tmp_path / "out"
        assert main(["spd", "--config", str(cfg), "--out", str(out),
                     "--baseline"]) == EXIT_OK
        assert (out / "spd_marginal_x_baseline.csv").exists()

    def test_json_format(self, tmp_path):
        cfg = write_config(tmp_path / "c.json")
        out = tmp_path / "out"
        assert main(["spd", "--config", str(cfg), "--out", str(out),
                     "--format", "json"]) == EXIT_OK
        payload = json.loads((out / "spd_marginal_x_closed.json").read_text())
        assert payload["columns"] == ["x", "p"]
        assert len(payload["data"]) == 81

    def test_case2_marginal_tilts(self, tmp_path):
        cfg = write_config(
            tmp_path / "c.json",
            case="case2",
            damping={"beta": 0.1, "beta1": 0.05},
            noise_pair={"n1": {"d": 0.005, "tau": 0.5},
                        "n2": {"d": 0.005, "tau": 0.5}, "lambda": 0.5})
        del_cfg = json.loads((tmp_path / "c.json").read_text())
        del del_cfg["noise"]
        (tmp_path / "c.json").write_text(json.dumps(del_cfg))
        out = tmp_path / "out"
        assert main(["spd", "--config", str(tmp_path / "c.json"),
                     "--out", str(out), "--form", "integral"]) == EXIT_OK
        data = read_csv(out / "spd_marginal_x_integral.csv")
        x, p = data[:, 0], data[:, 1]
        left = np.trapezoid(np.where(x < 0, p, 0.0), x)
        right = np.trapezoid(np.where(x > 0, p, 0.0), x)
        assert abs(left - right) > 0.01  # broken symmetry


class TestSimulateCommand:
    def test_histograms_and_determinism(self, tmp_path):
        cfg = write_config(tmp_path / "c.json")
        out1, out2 = tmp_path / "a", tmp_path / "b"
        assert main(["simulate", "--config", str(cfg),
                     "--out", str(out1)]) == EXIT_OK
        assert main(["simulate", "--config", str(cfg),
                     "--out", str(out2)]) == EXIT_OK
        for name in ("x", "v", "energy", "amplitude", "joint"):
            f1, f2 = out1 / f"hist_{name}.csv", out2 / f"hist_{name}.csv"
            assert f1.read_bytes() == f2.read_bytes(), name
        sidecar = json.loads((out1 / "hist_x.csv.json").read_text())
        assert sidecar["seed"] == 7
        assert sidecar["pooled_samples"] > 0

    def test_divergence_exit(self, tmp_path, capsys):
        cfg = write_config(tmp_path / "c.json",
                           sim={"dt": 0.5, "n_steps": 10_000, "seed": 1})
        assert main(["simulate", "--config", str(cfg),
                     "--out", str(tmp_path / "o")]) == EXIT_NUMERIC
        assert "dt" in capsys.readouterr().err

    def test_seed_override(self, tmp_path):
        cfg = write_config(tmp_path / "c.json")
        out1, out2 = tmp_path / "a", tmp_path / "b"
        main(["simulate", "--config", str(cfg), "--out", str(out1),
              "--seed", "99"])
        main(["simulate", "--config", str(cfg), "--out", str(out2)])
        assert (out1 / "hist_x.csv").read_bytes() != \
            (out2 / "hist_x.csv").read_bytes()


class TestPsdCommand:
    def test_psd_from_config(self, tmp_path):
        cfg = write_config(
            tmp_path / "c.json",
            sim={"dt": 0.001, "n_steps": 400_000, "ensemble": 1, "seed": 7})
        out = tmp_path / "out"
        assert main(["psd", "--config", str(cfg), "--out", str(out),
                     "--nperseg", "16384"]) == EXIT_OK
        data = read_csv(out / "psd.csv")
        assert np.all(data[:, 1] >= 0)
        assert (out / "quality_factor.json").exists()

    def test_needs_input(self, capsys):
        assert main(["psd"]) == EXIT_CONFIG


class TestCrSweepCommand:
    def test_sweep_rows(self, tmp_path):
        cfg = write_config(tmp_path / "c.json")
        out = tmp_path / "out"
        assert main(["cr-sweep", "--config", str(cfg), "--param", "d1",
                     "--values", "0.01,0.02", "--out", str(out),
                     "--nperseg", "8192"]) == EXIT_OK
        lines = (out / "cr_sweep.csv").read_text().strip().splitlines()
        assert lines[0] == "value,h,omega_m,delta_omega,eta,flag"
        assert len(lines) == 3

    def test_empty_values(self, tmp_path):
        cfg = write_config(tmp_path / "c.json")
        assert main(["cr-sweep", "--config", str(cfg), "--param", "d1",
                     "--values", ""]) == EXIT_CONFIG

    def test_bad_param(self, tmp_path):
        cfg = write_config(tmp_path / "c.json")
        assert main(["cr-sweep", "--config", str(cfg), "--param", "k3",
                     "--values", "1"]) == EXIT_CONFIG


class TestCompareCommand:
    def _table(self, path, shift=0.0):
        g = np.linspace(-1, 1, 101)
        v = np.exp(-((g - shift) ** 2) / 0.1)
        v /= np.trapezoid(v, g)
        with open(path, "w") as fh:
            fh.write("x,p\n")
            for gi, vi in zip(g, v):
                fh.write(f"{float(gi):.17g},{float(vi):.17g}\n")
        return path

    def test_self_compare_passes(self, tmp_path, capsys):
        f = self._table(tmp_path / "a.csv")
        assert main(["compare", "--analytic", str(f), "--empirical", str(f),
                     "--threshold", "0.01"]) == EXIT_OK
        rec = json.loads(capsys.readouterr().out)
        assert rec["l1"] == 0.0 and rec["passed"] is True

    def test_threshold_failure(self, tmp_path, capsys):
        a = self._table(tmp_path / "a.csv")
        b = self._table(tmp_path / "b.csv", shift=0.5)
        assert main(["compare", "--analytic", str(a), "--empirical", str(b),
                     "--threshold", "0.01"]) == EXIT_THRESHOLD
        rec = json.loads(capsys.readouterr().out)
        assert rec["passed"] is False

    def test_support_mismatch(self, tmp_path, capsys):
        a = tmp_path / "a.csv"
        b = tmp_path / "b.csv"
        a.write_text("x,p\n0.0,1.0\n1.0,1.0\n")
        b.write_text("x,p\n5.0,1.0\n6.0,1.0\n")
        assert main(["compare", "--analytic", str(a),
                     "--empirical", str(b)]) == EXIT_NUMERIC


class TestFrequencyCommand:
    def test_table(self, tmp_path):
        out = tmp_path / "out"
        assert main(["frequency", "--k1", "1", "--k2", "4.5", "--k3", "3.5",
                     "--out", str(out), "--n-energy", "24"]) == EXIT_OK
        lines = (out / "frequency.csv").read_text().strip().splitlines()
        assert lines[0].startswith("branch,H,T,omega")
        assert any(line.startswith("cross_well") for line in lines[1:])
