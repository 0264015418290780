import json
import subprocess
import sys

import pytest

from barrier_sta.cli import (
    CSV_HEADER,
    EXIT_CONFIG,
    EXIT_OK,
    EXIT_OVERFLOW,
    EXIT_SELFTEST,
    apply_overrides,
    main,
)


def run_cli(*args):
    return main(list(args))


class TestRun:
    def test_short_steps_run_writes_csv_and_diag(self, tmp_path, capsys):
        out = tmp_path / "steps.csv"
        code = run_cli("run", "--scenario", "steps", "--out", str(out),
                       "--set", "horizon=0.02")
        assert code == EXIT_OK
        lines = out.read_text().splitlines()
        assert lines[0] == CSV_HEADER
        assert len(lines) == 1 + round(0.02 / 1e-4) + 1
        diag = json.loads((tmp_path / "steps.csv.diag").read_text())
        assert set(diag) == {"decrease_fraction", "violations", "reach_time",
                             "mode_occupancy", "switch_counts"}

    def test_sentinel_fields_are_empty(self, tmp_path):
        out = tmp_path / "steps.csv"
        assert run_cli("run", "--scenario", "steps", "--out", str(out),
                       "--set", "horizon=0.01") == EXIT_OK
        rows = out.read_text().splitlines()
        first = rows[1].split(",")
        assert first[0] == "0.0"
        assert first[8] == ""  # rate undefined on the initial step edge
        # s0=0.5 starts in dynamic mode: V_out must be present there
        assert first[9] != ""

    def test_csv_floats_round_trip(self, tmp_path):
        out = tmp_path / "r.csv"
        assert run_cli("run", "--scenario", "sinusoid", "--out", str(out),
                       "--set", "horizon=0.01") == EXIT_OK
        for row in out.read_text().splitlines()[1:3]:
            fields = row.split(",")
            assert repr(float(fields[1])) == fields[1]
            assert repr(float(fields[4])) == fields[4]

    def test_bit_identical_reruns(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        for path in (a, b):
            assert run_cli("run", "--scenario", "sinusoid", "--out", str(path),
                           "--set", "horizon=0.05") == EXIT_OK
        assert a.read_bytes() == b.read_bytes()

    def test_config_file_and_dotted_overrides(self, tmp_path):
        cfg_path = tmp_path / "cfg.json"
        cfg_path.write_text(json.dumps({
            "horizon": 0.01,
            "scenario": {"kind": "steps", "amplitude": 10.0},
        }))
        out = tmp_path / "o.csv"
        code = run_cli("run", "--config", str(cfg_path), "--out", str(out),
                       "--set", "scenario.amplitude=50")
        assert code == EXIT_OK
        row = out.read_text().splitlines()[1].split(",")
        assert float(row[7]) == 50.0

    def test_invalid_layers_exit_one_naming_key(self, tmp_path, capsys):
        out = tmp_path / "x.csv"
        code = run_cli("run", "--out", str(out), "--set", "layers=[1e-1,1e-4]")
        assert code == EXIT_CONFIG
        assert "layers" in capsys.readouterr().err
        assert not out.exists()

    def test_unknown_override_key_exit_one(self, tmp_path, capsys):
        code = run_cli("run", "--out", str(tmp_path / "x.csv"), "--set", "bogus=1")
        assert code == EXIT_CONFIG
        assert "bogus" in capsys.readouterr().err

    def test_unknown_config_file_key_exit_one(self, tmp_path, capsys):
        cfg_path = tmp_path / "cfg.json"
        cfg_path.write_text(json.dumps({"frequency": 1.0}))
        code = run_cli("run", "--config", str(cfg_path), "--out", str(tmp_path / "x.csv"))
        assert code == EXIT_CONFIG
        assert "frequency" in capsys.readouterr().err

    def test_overflow_path(self, tmp_path, capsys):
        cfg_path = tmp_path / "cfg.json"
        cfg_path.write_text(json.dumps({
            "alpha": 2.0, "s0": 1e300, "horizon": 0.01,
            "scenario": {"kind": "table", "table": [[0.0, 0.0]]},
        }))
        code = run_cli("run", "--config", str(cfg_path), "--out", str(tmp_path / "x.csv"))
        assert code == EXIT_OVERFLOW
        assert "sample" in capsys.readouterr().err


class TestCompare:
    def test_compare_writes_pair_and_summary(self, tmp_path):
        out = tmp_path / "cmp.csv"
        code = run_cli("compare", "--scenario", "steps", "--out", str(out),
                       "--set", "horizon=1.2")
        assert code == EXIT_OK
        single = tmp_path / "cmp_single.csv"
        double = tmp_path / "cmp_double.csv"
        summary = json.loads((tmp_path / "cmp_summary.json").read_text())
        assert single.exists() and double.exists()
        for tag in ("single", "double"):
            assert set(summary[tag]) == {"a0_activations_after_1s",
                                         "max_abs_s_after_1s", "csv"}

    def test_compare_requires_two_layers(self, tmp_path, capsys):
        code = run_cli("compare", "--out", str(tmp_path / "c.csv"),
                       "--set", "layers=[1e-4]")
        assert code == EXIT_CONFIG
        assert "two layers" in capsys.readouterr().err


class TestSelftest:
    def test_passes_and_reports(self, tmp_path, capsys):
        report = tmp_path / "selftest.txt"
        code = run_cli("selftest", "--out", str(report))
        assert code == EXIT_OK
        text = report.read_text()
        assert "omega-gain-identity" in text
        assert "chain-rule-gain-derivative" in text
        out = capsys.readouterr().out
        assert "FAIL" not in out

    def test_injected_fault_exits_three(self, capsys):
        code = run_cli("selftest", "--inject-fault")
        assert code == EXIT_SELFTEST
        err = capsys.readouterr().err
        assert "k2-equals-k1-squared" in err


class TestOverrides:
    def test_apply_overrides_types(self):
        data = apply_overrides({}, ("alpha=0.75", "layers=[1e-3,1e-1]",
                                    "scenario.kind=steps"))
        assert data["alpha"] == 0.75
        assert data["layers"] == [1e-3, 1e-1]
        assert data["scenario"]["kind"] == "steps"

    def test_malformed_override_rejected(self):
        with pytest.raises(ValueError):
            apply_overrides({}, ("alpha",))

    def test_unknown_scenario_key_rejected(self):
        with pytest.raises(ValueError):
            apply_overrides({}, ("scenario.bogus=1",))


def test_module_entry_point_runs(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "barrier_sta", "run", "--scenario", "steps",
         "--out", "smoke.csv", "--set", "horizon=0.005"],
        capture_output=True, text=True, cwd=str(tmp_path),
    )
    assert proc.returncode == 0, proc.stderr
    assert "wrote" in proc.stdout
    assert (tmp_path / "smoke.csv").exists()
