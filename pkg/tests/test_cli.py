import json
import subprocess
import sys

import numpy as np
import pytest

from stablegof.cli import main, read_csv_matrix, CliError


def run_cli(args, tmp_path=None):
    from io import StringIO
    import contextlib
    buf = StringIO()
    with contextlib.redirect_stdout(buf):
        code = main(args)
    return code, buf.getvalue()


class TestCsvReader:
    def test_reads_plain_matrix(self, tmp_path):
        path = tmp_path / "x.csv"
        path.write_text("1.0,2.0\n3.0,4.0\n")
        x = read_csv_matrix(str(path))
        assert np.array_equal(x, [[1.0, 2.0], [3.0, 4.0]])

    def test_header_skipped(self, tmp_path):
        path = tmp_path / "x.csv"
        path.write_text("a,b\n1.0,2.0\n")
        assert read_csv_matrix(str(path)).shape == (1, 2)

    def test_malformed_line_number(self, tmp_path):
        path = tmp_path / "x.csv"
        path.write_text("1.0,2.0\n3.0,oops\n")
        with pytest.raises(CliError, match="line 2") as err:
            read_csv_matrix(str(path))
        assert err.value.code == 2

    def test_ragged_rejected(self, tmp_path):
        path = tmp_path / "x.csv"
        path.write_text("1.0,2.0\n3.0\n")
        with pytest.raises(CliError, match="line 2"):
            read_csv_matrix(str(path))

    def test_nonfinite_rejected(self, tmp_path):
        path = tmp_path / "x.csv"
        path.write_text("1.0,nan\n")
        with pytest.raises(CliError, match="line 1"):
            read_csv_matrix(str(path))

    def test_missing_file(self):
        with pytest.raises(CliError):
            read_csv_matrix("/nonexistent/x.csv")


class TestSimulate:
    def test_byte_reproducible(self, tmp_path):
        out1 = tmp_path / "a.csv"
        out2 = tmp_path / "b.csv"
        for out in (out1, out2):
            code, _ = run_cli(["simulate", "--law", "stable", "--alpha", "1.7",
                               "--p", "4", "--n", "100", "--seed", "1",
                               "--out", str(out)])
            assert code == 0
        assert out1.read_bytes() == out2.read_bytes()
        x = read_csv_matrix(str(out1))
        assert x.shape == (100, 4)

    def test_different_seed_differs(self, tmp_path):
        out1 = tmp_path / "a.csv"
        out2 = tmp_path / "b.csv"
        run_cli(["simulate", "--law", "stable", "--alpha", "1.7", "--p", "2",
                 "--n", "10", "--seed", "1", "--out", str(out1)])
        run_cli(["simulate", "--law", "stable", "--alpha", "1.7", "--p", "2",
                 "--n", "10", "--seed", "2", "--out", str(out2)])
        assert out1.read_bytes() != out2.read_bytes()

    def test_unknown_law_exit2(self):
        code, _ = run_cli(["simulate", "--law", "pareto", "--p", "2", "--n", "5"])
        assert code == 2

    def test_garch_and_alternatives(self, tmp_path):
        for law in ("garch", "mv-t", "laplace"):
            args = ["simulate", "--law", law, "--p", "2", "--n", "20",
                    "--seed", "3", "--out", str(tmp_path / f"{law}.csv")]
            if law == "mv-t":
                args += ["--nu", "5"]
            code, _ = run_cli(args)
            assert code == 0


class TestExitCodes:
    def test_unknown_flag_exits_2(self):
        with pytest.raises(SystemExit) as exc:
            main(["test-iid", "--bogus-flag", "1"])
        assert exc.value.code == 2

    def test_malformed_csv_exit2(self, tmp_path):
        path = tmp_path / "x.csv"
        path.write_text("1.0,zzz\n2.0,3.0\n")
        code, _ = run_cli(["test-iid", "--input", str(path), "--alpha0", "2",
                           "--boot", "19"])
        assert code == 2

    def test_validation_error_exit2(self, tmp_path):
        path = tmp_path / "x.csv"
        np.savetxt(path, np.random.default_rng(0).standard_normal((30, 2)),
                   delimiter=",")
        # skew test needs p=2 but degenerate alpha0 triggers validation
        code, _ = run_cli(["test-iid", "--input", str(path), "--alpha0", "2.7",
                           "--boot", "19"])
        assert code == 2


class TestPipelines:
    def test_test_iid_json(self, tmp_path):
        path = tmp_path / "x.csv"
        rng = np.random.default_rng(5)
        np.savetxt(path, np.sqrt(2.0) * rng.standard_normal((80, 2)),
                   delimiter=",")
        out_path = tmp_path / "res.json"
        code, out = run_cli(["test-iid", "--input", str(path), "--alpha0", "2",
                             "--r", "1.0", "--boot", "99", "--seed", "7",
                             "--out", str(out_path)])
        assert code == 0
        doc = json.loads(out_path.read_text())
        assert doc["library"] == "stablegof"
        assert doc["command"] == "test-iid"
        assert 0.0 < doc["result"]["p_value"] <= 1.0

    def test_fit_gaussian(self, tmp_path):
        path = tmp_path / "x.csv"
        rng = np.random.default_rng(6)
        np.savetxt(path, rng.standard_normal((200, 2)), delimiter=",")
        code, out = run_cli(["fit", "--input", str(path), "--alpha0", "2",
                             "--mode", "iid"])
        assert code == 0
        doc = json.loads(out)
        assert doc["result"]["converged"] is True

    def test_power_study_from_config(self, tmp_path):
        cfg = tmp_path / "study.cfg"
        cfg.write_text("mode = iid\nalpha0 = 2.0\nalt.kind = stable\n"
                       "alt.alpha = 1.7\nn = 50\np = 2\nr = 1.0\n"
                       "replications = 20\nbootstrap = 30\nseed = 9\n")
        out_path = tmp_path / "res.json"
        code, out = run_cli(["power-study", "--config", str(cfg),
                             "--out", str(out_path), "--pretty"])
        assert code == 0
        doc = json.loads(out_path.read_text())
        table = doc["result"]["table"]
        assert len(table) == 1
        rec = table[0]
        assert set(rec) >= {"method", "tuning", "alt", "n", "p", "rejections",
                            "reps", "se", "seed"}

    @pytest.mark.slow
    def test_var_backtest_smoke(self, tmp_path):
        from stablegof.garch import default_simulation_preset, sample_ccc
        from stablegof.sampling import sample_spherical, substream
        x = sample_ccc(default_simulation_preset(2), 1200,
                       lambda n, rng: sample_spherical(1.8, 2, n, rng),
                       substream(10, 0))
        path = tmp_path / "ccc.csv"
        np.savetxt(path, x, delimiter=",")
        code, out = run_cli(["var-backtest", "--input", str(path),
                             "--alpha0", "1.8", "--level", "0.05",
                             "--window", "1000", "--weights", "0.5,0.5"])
        assert code == 0
        doc = json.loads(out)
        rate = doc["result"]["levels"]["0.05"]["long"]["violation_rate"]
        assert 0.0 <= rate <= 0.15

    def test_console_script_help(self):
        proc = subprocess.run([sys.executable, "-m", "stablegof.cli", "--help"],
                              capture_output=True, text=True)
        assert proc.returncode == 0
        assert "test-iid" in proc.stdout
