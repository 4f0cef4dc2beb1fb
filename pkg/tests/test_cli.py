import json
import subprocess
import sys

import numpy as np
import pytest

from paircompare.cli import main

SKEWED_ROWS = 120
NORMAL_ROWS = 400


@pytest.fixture
def normal_csv(tmp_path):
    rng = np.random.default_rng(7)
    a = rng.normal(0.62, 0.08, NORMAL_ROWS)
    b = a - rng.normal(0.01, 0.05, NORMAL_ROWS)
    path = tmp_path / "scores.csv"
    path.write_text("\n".join(f"{x:.9f},{y:.9f}" for x, y in zip(a, b)) + "\n")
    return path


@pytest.fixture
def skewed_csv(tmp_path):
    rng = np.random.default_rng(8)
    b = rng.uniform(0.3, 0.5, SKEWED_ROWS)
    a = b + rng.exponential(0.2, SKEWED_ROWS) ** 2
    path = tmp_path / "skewed.csv"
    path.write_text("\n".join(f"{x:.9f},{y:.9f}" for x, y in zip(a, b)) + "\n")
    return path


def run_cli(*argv):
    return main([str(a) for a in argv])


class TestAnalyzeCommand:
    def test_stdout_json(self, normal_csv, capsys):
        assert run_cli("analyze", normal_csv) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["analysis"]["recommended_tests"]
        assert doc["provenance"]["source_name"] == "scores.csv"

    def test_out_dir_files(self, normal_csv, tmp_path):
        out = tmp_path / "out"
        assert run_cli("analyze", normal_csv, "--out", out) == 0
        assert (out / "analysis.json").exists()
        for name in ("hist_u.csv", "hist_v.csv", "hist_diff.csv"):
            assert (out / name).read_text().startswith("bin_start,bin_end,count")

    def test_eu_aggregation_flags(self, normal_csv, capsys):
        assert run_cli("analyze", normal_csv, "--eu-size", "15", "--aggregator", "median",
                       "--shuffle-seed", "42") == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["provenance"]["eu_size"] == 15
        assert doc["provenance"]["shuffle_seed"] == 42
        assert doc["analysis"]["stats_diff"]["count"] == NORMAL_ROWS // 15


class TestTestCommand:
    def test_runs_recommended_by_default(self, normal_csv, capsys):
        assert run_cli("test", normal_csv) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["test"]["p_value"] <= 1.0

    def test_override_warns_but_proceeds(self, skewed_csv, capsys, caplog):
        code = run_cli("test", skewed_csv, "--test", "t_test")
        assert code == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["test"]["config"]["test_id"] == "t_test"
        assert any("not recommended" in r.message for r in caplog.records)

    def test_delta_and_direction_flags(self, normal_csv, capsys):
        assert run_cli("test", normal_csv, "--test", "t_test", "--delta", "0.005",
                       "--direction", "right") == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["test"]["config"]["delta"] == 0.005
        assert doc["test"]["config"]["direction"] == "right"


class TestExitCodes:
    def test_missing_file_is_data_error(self, capsys):
        assert run_cli("analyze", "/nonexistent/scores.csv") == 3

    def test_malformed_file_is_data_error(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("1,2\n3,oops\n")
        assert run_cli("analyze", bad) == 3

    def test_degenerate_sample_is_exit_4(self, tmp_path):
        flat = tmp_path / "flat.csv"
        rows = [f"{0.5 + 0.01 * i},{0.5 + 0.01 * i}" for i in range(20)]  # u == v
        flat.write_text("\n".join(rows) + "\n")
        assert run_cli("test", flat, "--test", "wilcoxon_signed_rank") == 4

    def test_unknown_flag_is_usage_error(self, normal_csv):
        assert run_cli("analyze", normal_csv, "--frobnicate") == 2

    def test_unknown_command_is_usage_error(self):
        assert run_cli("transmogrify") == 2


class TestEffectCommand:
    def test_all_indices(self, normal_csv, capsys):
        assert run_cli("effect", normal_csv) == 0
        doc = json.loads(capsys.readouterr().out)
        assert [e["index"] for e in doc["effect_sizes"]] == [
            "cohens_d", "hedges_g", "wilcoxon_r", "hodges_lehmann",
        ]

    def test_selected_indices(self, normal_csv, capsys):
        assert run_cli("effect", normal_csv, "--indices", "hodges_lehmann") == 0
        doc = json.loads(capsys.readouterr().out)
        assert len(doc["effect_sizes"]) == 1


class TestPowerCommand:
    def test_prospective(self, capsys):
        assert run_cli("power", "--method", "prospective", "--mean-diff", "0.5",
                       "--std-dev", "1.0") == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["prospective"]["closed_form_n"] == 32
        assert doc["prospective"]["refined_n"] == 34

    def test_mc_curve(self, tmp_path):
        out = tmp_path / "p"
        assert run_cli("power", "--method", "mc", "--mean-diff", "0.5", "--std-dev", "1.0",
                       "--sizes", "10,20", "--power-trials", "200", "--out", out) == 0
        doc = json.loads((out / "power_curve.json").read_text())
        assert len(doc["power"]["points"]) == 2
        assert (out / "power_curve.csv").read_text().startswith("sample_size,power,mc_stderr")

    def test_bootstrap_needs_scores(self):
        assert run_cli("power", "--method", "bootstrap") == 3

    def test_bootstrap_curve(self, normal_csv, capsys):
        assert run_cli("power", "--method", "bootstrap", normal_csv,
                       "--sizes", "20,40", "--power-trials", "150") == 0
        doc = json.loads(capsys.readouterr().out)
        assert [p["sample_size"] for p in doc["power"]["points"]] == [20, 40]


class TestSweepCommand:
    def test_small_sweep(self, tmp_path):
        out = tmp_path / "s"
        assert run_cli("sweep", "--sizes", "30,60", "--iterations", "3", "--out", out) == 0
        doc = json.loads((out / "sweep.json").read_text())
        assert len(doc["sweep"]["rows"]) == 2
        csv_text = (out / "sweep.csv").read_text()
        assert csv_text.splitlines()[0] == "sample_size,p_min,p_mean,p_max"

    def test_beta_generator_requires_params(self):
        assert run_cli("sweep", "--generator", "beta", "--sizes", "30", "--iterations", "2") == 3


class TestGridCommand:
    @pytest.fixture
    def multi_csv(self, tmp_path):
        rng = np.random.default_rng(9)
        cols = {
            "alpha": rng.normal(0.5, 0.1, 40),
            "beta": rng.normal(0.5, 0.1, 40),
            "gamma": rng.normal(0.9, 0.1, 40),
        }
        path = tmp_path / "multi.csv"
        header = ",".join(cols)
        rows = [",".join(f"{cols[name][i]:.8f}" for name in cols) for i in range(40)]
        path.write_text(header + "\n" + "\n".join(rows) + "\n")
        return path

    def test_grid_outputs(self, multi_csv, tmp_path):
        out = tmp_path / "g"
        assert run_cli("grid", multi_csv, "--test", "t_test", "--out", out) == 0
        doc = json.loads((out / "grid.json").read_text())
        assert doc["grid"]["n_comparisons"] == 3
        assert doc["grid"]["significant"][0][2] is True
        assert doc["grid"]["significant"][0][1] is False
        cells = (out / "grid_cells.csv").read_text()
        assert cells.splitlines()[0] == "row,col,adjusted_p,significant"
        matrix = (out / "grid_matrix.csv").read_text()
        assert matrix.splitlines()[0] == "system,alpha,beta,gamma"


class TestCompareCommand:
    def test_report_structure(self, normal_csv, tmp_path):
        out = tmp_path / "r"
        assert run_cli("compare", normal_csv, "--eu-size", "4", "--seed", "42",
                       "--power-trials", "120", "--out", out) == 0
        doc = json.loads((out / "report.json").read_text())
        assert doc["schema_version"] == "1"
        assert doc["test"] is not None
        assert doc["effect_sizes"]
        assert doc["power"] is not None
        assert doc["provenance"]["master_seed"] == 42
        md = (out / "report.md").read_text()
        assert "significance level" in md
        assert (out / "hist_diff.csv").exists()
        assert (out / "power_curve.csv").exists()

    def test_median_statistic_gets_median_indices(self, skewed_csv, capsys):
        assert run_cli("compare", skewed_csv, "--power", "none") == 0
        doc = json.loads(capsys.readouterr().out)
        indices = [e["index"] for e in doc["effect_sizes"]]
        assert indices == ["wilcoxon_r", "hodges_lehmann"]

    def test_byte_identical_across_runs(self, normal_csv, tmp_path):
        out1, out2 = tmp_path / "r1", tmp_path / "r2"
        args = ["compare", str(normal_csv), "--eu-size", "4", "--seed", "9",
                "--shuffle-seed", "5", "--power-trials", "120"]
        assert main(args + ["--out", str(out1)]) == 0
        assert main(args + ["--out", str(out2)]) == 0
        for name in ("report.json", "report.md", "hist_u.csv", "hist_v.csv",
                     "hist_diff.csv", "power_curve.csv"):
            assert (out1 / name).read_bytes() == (out2 / name).read_bytes(), name

    def test_power_skipped_below_floor(self, tmp_path, capsys):
        small = tmp_path / "small.csv"
        rng = np.random.default_rng(10)
        small.write_text("\n".join(f"{x:.6f},{y:.6f}"
                                   for x, y in rng.normal(0.5, 0.1, (8, 2))) + "\n")
        assert run_cli("compare", small, "--power", "bootstrap") == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["power"] is None
        assert any("power analysis skipped" in w for w in doc["warnings"])


class TestSubprocessEntry:
    def test_module_invocation(self, tmp_path):
        csv = tmp_path / "d.csv"
        csv.write_text("\n".join(f"{0.5 + 0.01 * i},{0.4 + 0.01 * i}" for i in range(20)) + "\n")
        proc = subprocess.run(
            [sys.executable, "-m", "paircompare", "analyze", str(csv)],
            capture_output=True, text=True, timeout=120,
        )
        assert proc.returncode == 0, proc.stderr
        assert json.loads(proc.stdout)["analysis"]["stats_diff"]["count"] == 20

    def test_version_flag(self):
        proc = subprocess.run(
            [sys.executable, "-m", "paircompare", "--version"],
            capture_output=True, text=True, timeout=60,
        )
        assert proc.returncode == 0
        assert "paircompare" in proc.stdout
