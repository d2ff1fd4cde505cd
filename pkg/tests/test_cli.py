import csv
import json
import math

import pytest

from grlab import __version__
from grlab.cli import build_parser, run


def run_cli(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestParser:
    def test_requires_subcommand(self):
        with pytest.raises(SystemExit) as exc:
            build_parser().parse_args([])
        assert exc.value.code == 2

    def test_unknown_formula_rejected(self):
        with pytest.raises(SystemExit) as exc:
            build_parser().parse_args(["asymptotics", "nope"])
        assert exc.value.code == 2


class TestExactConstants:
    def test_piterbarg_value(self, capsys):
        code, out, _ = run_cli(capsys, "constants", "exact", "--alpha", "1",
                               "--a", "1")
        assert code == 0
        payload = json.loads(out)
        assert payload["result"]["value"] == 2.0
        assert payload["toolkit_version"] == __version__

    def test_pickands_only(self, capsys):
        code, out, _ = run_cli(capsys, "constants", "exact", "--alpha", "2")
        assert code == 0
        assert json.loads(out)["result"]["value"] == pytest.approx(
            1 / math.sqrt(math.pi))

    def test_unsupported_alpha_is_domain_error(self, capsys):
        code, _, err = run_cli(capsys, "constants", "exact", "--alpha", "1.5")
        assert code == 3
        assert "alpha" in err


class TestAsymptotics:
    def test_ratio_constant_high_hurst_finite_horizon(self, capsys):
        code, out, _ = run_cli(capsys, "asymptotics", "ratio-constant",
                               "--H", "0.75", "--gamma", "0.3", "--T", "1")
        assert code == 0
        result = json.loads(out)["result"]
        assert result["value"] == 1.0
        assert result["provenance"] == "exact"

    def test_psi_formula_payload(self, capsys):
        code, out, _ = run_cli(capsys, "asymptotics", "psi-gamma-inf",
                               "--u", "4", "--H", "0.5", "--c", "1",
                               "--gamma", "0.5")
        assert code == 0
        payload = json.loads(out)
        assert payload["config"]["gamma"] == 0.5
        assert payload["result"]["value"] > 0

    def test_maximizer(self, capsys):
        code, out, _ = run_cli(capsys, "asymptotics", "maximizer-y",
                               "--H", "0.5", "--c", "1")
        result = json.loads(out)["result"]
        assert code == 0
        assert result["s0"] == 0.0 and result["t0"] == 1.0

    def test_domain_error_exit_code(self, capsys):
        code, _, err = run_cli(capsys, "asymptotics", "psi0-inf", "--H", "1.5")
        assert code == 3
        assert "error" in err


class TestTail:
    def test_brownian_infinite_horizon(self, capsys):
        code, out, _ = run_cli(capsys, "tail", "--H", "0.5", "--c", "1",
                               "--gamma", "0", "--T", "inf", "--u", "1",
                               "--n", "20000", "--step", str(2.0**-8),
                               "--seed", "7")
        assert code == 0
        payload = json.loads(out)
        p = payload["result"]["probability"]
        assert p == pytest.approx(math.exp(-2.0), abs=0.02)
        assert payload["result"]["params"]["horizon"] == "inf"

    def test_output_is_reproducible(self, capsys):
        argv = ("tail", "--H", "0.5", "--c", "1", "--gamma", "0.5", "--T", "1",
                "--u", "0.5", "--n", "8192", "--step", str(2.0**-6),
                "--seed", "3")
        _, out1, _ = run_cli(capsys, *argv)
        _, out2, _ = run_cli(capsys, *argv)
        assert out1 == out2

    def test_env_seed_fallback(self, capsys, monkeypatch):
        argv = ("tail", "--H", "0.5", "--c", "1", "--gamma", "0", "--T", "1",
                "--u", "0.5", "--n", "8192", "--step", str(2.0**-6))
        monkeypatch.setenv("GRL_SEED", "3")
        _, out_env, _ = run_cli(capsys, *argv)
        monkeypatch.delenv("GRL_SEED")
        _, out_flag, _ = run_cli(capsys, *argv, "--seed", "3")
        assert (json.loads(out_env)["result"]["probability"]
                == json.loads(out_flag)["result"]["probability"])

    def test_output_file(self, capsys, tmp_path):
        target = tmp_path / "tail.json"
        code, out, _ = run_cli(capsys, "tail", "--H", "0.5", "--c", "1",
                               "--gamma", "0", "--T", "1", "--u", "0.5",
                               "--n", "4096", "--step", str(2.0**-6),
                               "--seed", "1", "--output", str(target))
        assert code == 0 and out == ""
        payload = json.loads(target.read_text())
        assert 0.0 < payload["result"]["probability"] < 1.0


class TestRatio:
    def test_brownian_tax_ratio(self, capsys):
        code, out, _ = run_cli(capsys, "ratio", "--H", "0.5", "--c", "1",
                               "--gamma", "0.5", "--T", "inf", "--u", "0.5",
                               "--n", "20000", "--step", str(2.0**-8),
                               "--seed", "11")
        assert code == 0
        result = json.loads(out)["result"]
        assert result["ratio"] >= 1.0
        assert result["numerator"]["probability"] >= result["denominator"]["probability"]


class TestSimulate:
    def test_csv_path_output(self, capsys, tmp_path):
        target = tmp_path / "path.csv"
        code, _, _ = run_cli(capsys, "simulate", "--kind", "fbm", "--H", "0.7",
                             "--T", "1", "--step", "0.25", "--seed", "5",
                             "--output", str(target))
        assert code == 0
        rows = list(csv.reader(target.open()))
        assert rows[0] == ["t", "value"]
        assert len(rows) == 6
        assert float(rows[1][1]) == 0.0

    def test_reflected_kind(self, capsys, tmp_path):
        target = tmp_path / "w.csv"
        code, _, _ = run_cli(capsys, "simulate", "--kind", "reflected",
                             "--H", "0.5", "--T", "1", "--step", "0.125",
                             "--c", "1", "--gamma", "1", "--seed", "2",
                             "--output", str(target))
        assert code == 0
        values = [float(r[1]) for r in list(csv.reader(target.open()))[1:]]
        assert min(values) >= -1e-12  # gamma = 1 workload stays nonnegative


class TestConfigFile:
    def test_config_supplies_defaults(self, capsys, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"H": 0.75, "gamma": 0.3, "T": "1"}))
        code, out, _ = run_cli(capsys, "--config", str(cfg),
                               "asymptotics", "ratio-constant")
        assert code == 0
        assert json.loads(out)["result"]["value"] == 1.0

    def test_explicit_flag_overrides_config(self, capsys, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"H": 0.75, "gamma": 0.3, "T": "1"}))
        code, out, _ = run_cli(capsys, "--config", str(cfg),
                               "asymptotics", "ratio-constant", "--H", "0.5")
        assert code == 0
        assert json.loads(out)["result"]["value"] == pytest.approx(2.0 / 1.7)


class TestFieldLab:
    def test_spec_file_round_trip(self, capsys, tmp_path):
        spec = tmp_path / "spec.json"
        spec.write_text(json.dumps({
            "S": 1.0, "T": 1.0, "s0": 0.0, "t0": 0.0, "b1": 1.0, "b2": 1.0,
            "beta1": 1.0, "beta2": 1.0, "alpha1": 1.0, "alpha2": 1.0,
            "a1": 0.5, "a2": 1.0, "resolution": 12,
        }))
        target = tmp_path / "rows.csv"
        code, _, _ = run_cli(capsys, "fieldlab", "--spec", str(spec),
                             "--u", "2,3", "--n", "5000", "--seed", "4",
                             "--output", str(target))
        assert code == 0
        rows = list(csv.reader(target.open()))
        assert rows[0][0] == "u"
        assert len(rows) == 3
