import json
import os
from pathlib import Path

import numpy as np
import pandas as pd
import pytest

from hbn_relax.cli.main import cli
from hbn_relax.core.constants import SERIES_COLUMNS, SERIES_LABEL_COLUMN
from hbn_relax.models.sequence import CurveKind, DecayDataset
from hbn_relax.services.table_service import decay_frame, read_series_csv, write_table


def read_record(directory):
    return json.loads((directory / "fit_decay_result.json").read_text())


class TestFitDecayCommand:
    """Tests for fit-decay."""

    def test_recovers_rates(self, cli_runner, tmp_path, decay_files):
        f1, f2 = decay_files
        out = tmp_path / "out"
        result = cli_runner.invoke(cli, ["fit-decay", "--f1", str(f1), "--f2", str(f2), "--out-dir", str(out)])
        assert result.exit_code == 0, result.output

        record = read_record(out)
        assert record["status"] == "ok"
        assert set(record["fits"]) == {"f1", "f2"}
        assert record["derived"]["omega_khz"] == pytest.approx(33.26, rel=1e-6)
        assert record["derived"]["gamma_khz"] == pytest.approx(81.60, rel=1e-6)
        assert record["derived"]["method"] == "independent"
        assert record["derived"]["consistent"] is True
        assert record["outputs"] == ["f1_fit.csv", "f1_fit.svg", "f2_fit.csv", "f2_fit.svg", "rates.csv"]
        assert record["derived"]["temperature_k"] == 293.0

        fit_table = pd.read_csv(out / "f1_fit.csv")
        assert list(fit_table.columns) == ["tau_us", "data", "sigma", "fit"]
        assert np.allclose(fit_table["fit"], fit_table["data"], atol=1e-6)

    def test_joint_fit(self, cli_runner, tmp_path, decay_files):
        f1, f2 = decay_files
        out = tmp_path / "out"
        result = cli_runner.invoke(
            cli, ["fit-decay", "--f1", str(f1), "--f2", str(f2), "--out-dir", str(out), "--joint"]
        )
        assert result.exit_code == 0, result.output
        record = read_record(out)
        assert "joint" in record["fits"]
        assert record["derived"]["method"] == "joint"
        assert record["derived"]["omega_khz"] == pytest.approx(33.26, rel=1e-6)

    def test_identical_runs_match(self, cli_runner, tmp_path, decay_files):
        f1, f2 = decay_files
        records = []
        for name in ("a", "b"):
            out = tmp_path / name
            cli_runner.invoke(cli, ["fit-decay", "--f1", str(f1), "--f2", str(f2), "--out-dir", str(out)])
            records.append(read_record(out))
        assert records[0]["fits"] == records[1]["fits"]
        assert records[0]["derived"] == records[1]["derived"]

    def test_inputs_from_config(self, cli_runner, tmp_path, decay_files):
        f1, f2 = decay_files
        config = tmp_path / "run.json"
        config.write_text(json.dumps({"inputs": {"f1": str(f1), "f2": str(f2)}, "out_dir": str(tmp_path / "o")}))
        result = cli_runner.invoke(cli, ["fit-decay", "--config", str(config)])
        assert result.exit_code == 0, result.output
        assert (tmp_path / "o" / "fit_decay_result.json").is_file()

    def test_missing_f2(self, cli_runner, tmp_path, decay_files):
        result = cli_runner.invoke(cli, ["fit-decay", "--f1", str(decay_files[0]), "--out-dir", str(tmp_path)])
        assert result.exit_code == 2
        assert "--f2" in result.output

    def test_nonexistent_file(self, cli_runner, tmp_path, decay_files):
        result = cli_runner.invoke(
            cli,
            ["fit-decay", "--f1", str(tmp_path / "nope.csv"), "--f2", str(decay_files[1]), "--out-dir", str(tmp_path)],
        )
        assert result.exit_code == 2

    def test_bad_header(self, cli_runner, tmp_path, decay_files):
        bad = tmp_path / "bad.csv"
        bad.write_text("delay,signal,sigma\n0,1,0.1\n")
        result = cli_runner.invoke(
            cli, ["fit-decay", "--f1", str(bad), "--f2", str(decay_files[1]), "--out-dir", str(tmp_path / "o")]
        )
        assert result.exit_code == 2

    def test_rising_curve_fails_with_record(self, cli_runner, tmp_path, decay_files):
        taus = np.linspace(0.0, 30.0, 20)
        rising = DecayDataset.from_arrays(CurveKind.F1, taus, 1.0 - 0.8 * np.exp(-0.1 * taus), np.full(20, 0.01))
        path = write_table(decay_frame(rising), tmp_path / "rising.csv")
        out = tmp_path / "out"
        result = cli_runner.invoke(
            cli, ["fit-decay", "--f1", str(path), "--f2", str(decay_files[1]), "--out-dir", str(out)]
        )
        assert result.exit_code == 3
        record = read_record(out)
        assert record["status"] == "failed"
        assert record["diagnostics"][0].startswith("DecayFitError")
        assert not (out / "f1_fit.csv").exists()
        assert not any(p.name.endswith(".tmp") for p in out.iterdir())


    def test_rate_row_in_series_schema(self, cli_runner, tmp_path, decay_files):
        f1, f2 = decay_files
        out = tmp_path / "out"
        result = cli_runner.invoke(
            cli,
            ["fit-decay", "--f1", str(f1), "--f2", str(f2), "--out-dir", str(out),
             "--temperature", "320", "--spot-label", "A"],
        )
        assert result.exit_code == 0, result.output
        record = read_record(out)
        assert record["derived"]["temperature_k"] == 320.0
        assert record["derived"]["spot_label"] == "A"

        row = pd.read_csv(out / "rates.csv")
        assert list(row.columns) == SERIES_COLUMNS + [SERIES_LABEL_COLUMN]
        assert row["T_K"].tolist() == [320.0]
        assert row["spot_label"].tolist() == ["A"]
        assert row["omega_kHz"].iloc[0] == pytest.approx(record["derived"]["omega_khz"])
        assert row["sigma_gamma_kHz"].iloc[0] == pytest.approx(record["derived"]["sigma_gamma_khz"])

    def test_unlabeled_rate_row_reads_back(self, cli_runner, tmp_path, decay_files):
        f1, f2 = decay_files
        out = tmp_path / "out"
        result = cli_runner.invoke(
            cli, ["fit-decay", "--f1", str(f1), "--f2", str(f2), "--out-dir", str(out), "--temperature", "350"]
        )
        assert result.exit_code == 0, result.output
        (spot,) = read_series_csv(out / "rates.csv")
        assert spot.spot_label == ""
        assert spot.column("temperature") == [350.0]
        assert spot.points[0].omega == pytest.approx(33.26, rel=1e-6)

    def test_invalid_temperature(self, cli_runner, tmp_path, decay_files):
        f1, f2 = decay_files
        result = cli_runner.invoke(
            cli, ["fit-decay", "--f1", str(f1), "--f2", str(f2), "--out-dir", str(tmp_path), "--temperature", "-5"]
        )
        assert result.exit_code == 2

    def test_record_commits_with_outputs(self, cli_runner, tmp_path, decay_files, mocker):
        """If the record cannot be renamed into place, no table or figure is left either."""
        f1, f2 = decay_files
        out = tmp_path / "out"
        real_replace = os.replace

        def replace(src, dst):
            if Path(dst).name == "fit_decay_result.json":
                raise OSError("read-only file system")
            real_replace(src, dst)

        mocker.patch("hbn_relax.services.table_service.os.replace", side_effect=replace)
        result = cli_runner.invoke(cli, ["fit-decay", "--f1", str(f1), "--f2", str(f2), "--out-dir", str(out)])
        assert result.exit_code == 4
        assert list(out.iterdir()) == []


class TestSimulateThenFit:
    """Synthetic curves feed straight into fit-decay."""

    def test_round_trip(self, cli_runner, tmp_path):
        data = tmp_path / "data"
        fits = tmp_path / "fits"
        result = cli_runner.invoke(cli, ["simulate", "--out-dir", str(data), "--seed", "2024"])
        assert result.exit_code == 0, result.output
        result = cli_runner.invoke(
            cli, ["fit-decay", "--f1", str(data / "f1.csv"), "--f2", str(data / "f2.csv"), "--out-dir", str(fits)]
        )
        assert result.exit_code == 0, result.output
        derived = read_record(fits)["derived"]
        assert derived["omega_khz"] == pytest.approx(33.26, abs=5.0)
        assert derived["gamma_khz"] == pytest.approx(81.60, abs=25.0)
        assert derived["sigma_omega_khz"] > 0
