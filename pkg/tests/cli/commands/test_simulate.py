import json

import pandas as pd
import pytest

from hbn_relax.cli.main import cli


def read_record(directory, command):
    return json.loads((directory / f"{command}_result.json").read_text())


class TestSimulateCommand:
    """Tests for simulate."""

    def test_writes_curves_and_record(self, cli_runner, tmp_path):
        result = cli_runner.invoke(cli, ["simulate", "--out-dir", str(tmp_path), "--seed", "5"])
        assert result.exit_code == 0, result.output
        f1 = pd.read_csv(tmp_path / "f1.csv")
        assert list(f1.columns) == ["tau_us", "signal", "sigma"]
        assert len(f1) == 20
        assert (tmp_path / "f2.csv").is_file()

        record = read_record(tmp_path, "simulate")
        assert record["status"] == "ok"
        assert record["seed"] == 5
        assert record["outputs"] == ["f1.csv", "f2.csv"]
        assert record["derived"]["summary"]["t1_us"] == pytest.approx(1000.0 / (3 * 33.26 + 81.60))

    def test_same_seed_same_bytes(self, cli_runner, tmp_path):
        for name in ("a", "b"):
            result = cli_runner.invoke(cli, ["simulate", "--out-dir", str(tmp_path / name), "--seed", "11"])
            assert result.exit_code == 0, result.output
        assert (tmp_path / "a" / "f1.csv").read_bytes() == (tmp_path / "b" / "f1.csv").read_bytes()
        first = read_record(tmp_path / "a", "simulate")
        second = read_record(tmp_path / "b", "simulate")
        assert first["derived"] == second["derived"]
        assert first["input_digest"] == second["input_digest"]

    def test_seed_changes_noise(self, cli_runner, tmp_path):
        cli_runner.invoke(cli, ["simulate", "--out-dir", str(tmp_path / "a"), "--seed", "1"])
        cli_runner.invoke(cli, ["simulate", "--out-dir", str(tmp_path / "b"), "--seed", "2"])
        assert (tmp_path / "a" / "f1.csv").read_bytes() != (tmp_path / "b" / "f1.csv").read_bytes()

    def test_odmr_does_not_shift_decay_noise(self, cli_runner, tmp_path):
        cli_runner.invoke(cli, ["simulate", "--out-dir", str(tmp_path / "a"), "--seed", "3"])
        result = cli_runner.invoke(cli, ["simulate", "--out-dir", str(tmp_path / "b"), "--seed", "3", "--odmr"])
        assert result.exit_code == 0, result.output
        assert (tmp_path / "b" / "odmr.csv").is_file()
        assert (tmp_path / "a" / "f2.csv").read_bytes() == (tmp_path / "b" / "f2.csv").read_bytes()

    def test_json_format(self, cli_runner, tmp_path):
        result = cli_runner.invoke(
            cli, ["simulate", "--out-dir", str(tmp_path), "--format", "json", "--tau-points", "4"]
        )
        assert result.exit_code == 0, result.output
        rows = json.loads((tmp_path / "f1.json").read_text())
        assert len(rows) == 4
        assert set(rows[0]) == {"tau_us", "signal", "sigma"}

    def test_zero_rates_give_infinite_t1(self, cli_runner, tmp_path):
        result = cli_runner.invoke(
            cli, ["simulate", "--out-dir", str(tmp_path), "--omega", "0", "--gamma", "0"]
        )
        assert result.exit_code == 0, result.output
        assert "inf" in result.output
        assert read_record(tmp_path, "simulate")["derived"]["summary"]["t1_us"] is None

    def test_negative_rate_is_config_error(self, cli_runner, tmp_path):
        result = cli_runner.invoke(cli, ["simulate", "--out-dir", str(tmp_path), "--omega", "-1"])
        assert result.exit_code == 2
        assert not (tmp_path / "f1.csv").exists()

    def test_config_file(self, cli_runner, tmp_path):
        config = tmp_path / "run.json"
        config.write_text(json.dumps({"grid": {"tau_values": [0.0, 5.0, 10.0]}, "seed": 8}))
        out = tmp_path / "out"
        result = cli_runner.invoke(cli, ["simulate", "--config", str(config), "--out-dir", str(out)])
        assert result.exit_code == 0, result.output
        assert pd.read_csv(out / "f1.csv")["tau_us"].tolist() == [0.0, 5.0, 10.0]
        assert read_record(out, "simulate")["seed"] == 8

    def test_out_dir_is_a_file(self, cli_runner, tmp_path):
        blocker = tmp_path / "blocker"
        blocker.write_text("")
        result = cli_runner.invoke(cli, ["simulate", "--out-dir", str(blocker)])
        assert result.exit_code == 4
