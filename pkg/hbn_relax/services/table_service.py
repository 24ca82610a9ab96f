"""CSV and JSON tables: input schemas, result tables and staged writes."""

import json
import logging
import os
import tempfile
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from ..core.constants import (
    DECAY_COLUMNS,
    FLOAT_FORMAT,
    ODMR_COLUMNS,
    PDOS_COLUMNS,
    SERIES_COLUMNS,
    SERIES_LABEL_COLUMN,
    T1_CURVE_COLUMNS,
)
from ..models.phonon import T1Prediction, TemperaturePoint, TemperatureSeries
from ..models.record import ResultRecord
from ..models.sequence import CurveKind, DecayDataset
from .exceptions import OutputError, SchemaError

logger = logging.getLogger(__name__)

HEADER_LINES = 1


def _line_of(row: int) -> int:
    """1-based file line of a 0-based data row."""
    return row + HEADER_LINES + 1


def _read_frame(path: Path, columns: Sequence[str], optional: Sequence[str] = ()) -> pd.DataFrame:
    """Read a headed CSV whose header is `columns` plus any trailing optional columns.

    Raises:
        SchemaError: For empty files, wrong headers or non-numeric cells
    """
    path = Path(path)
    try:
        frame = pd.read_csv(
            path,
            float_precision="round_trip",
            dtype={name: str for name in optional},
            keep_default_na=False,
            na_values=[""],
            skipinitialspace=True,
        )
    except pd.errors.EmptyDataError as e:
        raise SchemaError("file is empty", str(path)) from e
    except pd.errors.ParserError as e:
        raise SchemaError(f"malformed CSV: {e}", str(path)) from e

    header = [str(c) for c in frame.columns]
    required = list(columns)
    if header[: len(required)] != required or any(c not in optional for c in header[len(required):]):
        raise SchemaError(f"expected header {','.join(required)}, got {','.join(header)}", str(path), 1)
    if frame.empty:
        raise SchemaError("no data rows", str(path))

    for name in required:
        values = pd.to_numeric(frame[name], errors="coerce")
        bad = np.flatnonzero(~np.isfinite(values.to_numpy(dtype=float)))
        if bad.size:
            row = int(bad[0])
            raise SchemaError(
                f"column {name} needs a finite number, got {frame[name].iloc[row]!r}", str(path), _line_of(row)
            )
        if frame[name].dtype == object:
            # Mixed columns were parsed as text; reparse the clean values exactly.
            frame[name] = [float(v) for v in frame[name]]
        else:
            frame[name] = frame[name].astype(float)
    return frame


def _check_increasing(values: np.ndarray, name: str, path: Path, start: int = 0) -> None:
    for i in range(1, values.size):
        if values[i] <= values[i - 1]:
            raise SchemaError(
                f"{name} must be strictly increasing, {values[i]!r} follows {values[i - 1]!r}",
                str(path),
                _line_of(start + i),
            )


def _check_positive(values: np.ndarray, name: str, path: Path) -> None:
    bad = np.flatnonzero(values <= 0.0)
    if bad.size:
        row = int(bad[0])
        raise SchemaError(f"{name} must be > 0, got {values[row]!r}", str(path), _line_of(row))


def read_decay_csv(path: Path, curve_kind: CurveKind, temperature: Optional[float] = None) -> DecayDataset:
    """Load a `tau_us,signal,sigma` decay curve."""
    frame = _read_frame(path, DECAY_COLUMNS)
    taus = frame["tau_us"].to_numpy()
    sigmas = frame["sigma"].to_numpy()
    _check_increasing(taus, "tau_us", path)
    if taus[0] < 0.0:
        raise SchemaError(f"tau_us must be >= 0, got {taus[0]!r}", str(path), _line_of(0))
    _check_positive(sigmas, "sigma", path)
    logger.debug(f"Read {len(frame)} {CurveKind(curve_kind).value} points from {path}")
    return DecayDataset.from_arrays(curve_kind, taus, frame["signal"].to_numpy(), sigmas, temperature=temperature)


def read_spectrum_csv(path: Path) -> Tuple[np.ndarray, np.ndarray]:
    """Load a `freq_MHz,contrast` ODMR spectrum."""
    frame = _read_frame(path, ODMR_COLUMNS)
    return frame["freq_MHz"].to_numpy(), frame["contrast"].to_numpy()


def read_pdos_csv(path: Path) -> Tuple[np.ndarray, np.ndarray]:
    """Load an `energy_meV,density` phonon density of states."""
    frame = _read_frame(path, PDOS_COLUMNS)
    energies = frame["energy_meV"].to_numpy()
    _check_increasing(energies, "energy_meV", path)
    return energies, frame["density"].to_numpy()


def read_series_csv(path: Path) -> List[TemperatureSeries]:
    """Load a temperature series, one TemperatureSeries per spot label.

    Spots keep the order of their first appearance; without a
    `spot_label` column the whole file is one unlabeled spot.
    """
    frame = _read_frame(path, SERIES_COLUMNS, optional=(SERIES_LABEL_COLUMN,))
    if SERIES_LABEL_COLUMN in frame.columns:
        labels = frame[SERIES_LABEL_COLUMN].fillna("").astype(str).str.strip()
    else:
        labels = pd.Series([""] * len(frame))

    _check_positive(frame["sigma_omega_kHz"].to_numpy(), "sigma_omega_kHz", path)
    _check_positive(frame["sigma_gamma_kHz"].to_numpy(), "sigma_gamma_kHz", path)
    _check_positive(frame["T_K"].to_numpy(), "T_K", path)

    series = []
    for label in dict.fromkeys(labels):
        rows = np.flatnonzero((labels == label).to_numpy())
        temperatures = frame["T_K"].to_numpy()[rows]
        for i in range(1, rows.size):
            if temperatures[i] <= temperatures[i - 1]:
                raise SchemaError(
                    f"T_K must be strictly increasing within a spot, {temperatures[i]!r} "
                    f"follows {temperatures[i - 1]!r}",
                    str(path),
                    _line_of(int(rows[i])),
                )
        points = [
            TemperaturePoint(
                temperature=float(frame["T_K"].iloc[r]),
                omega=float(frame["omega_kHz"].iloc[r]),
                sigma_omega=float(frame["sigma_omega_kHz"].iloc[r]),
                gamma=float(frame["gamma_kHz"].iloc[r]),
                sigma_gamma=float(frame["sigma_gamma_kHz"].iloc[r]),
            )
            for r in rows
        ]
        series.append(TemperatureSeries(points=points, spot_label=label))
    return series


def decay_frame(dataset: DecayDataset) -> pd.DataFrame:
    return pd.DataFrame(
        {"tau_us": dataset.taus, "signal": dataset.signals, "sigma": dataset.sigmas}, columns=DECAY_COLUMNS
    )


def spectrum_frame(freqs, contrast) -> pd.DataFrame:
    return pd.DataFrame(
        {"freq_MHz": np.asarray(freqs, dtype=float), "contrast": np.asarray(contrast, dtype=float)},
        columns=ODMR_COLUMNS,
    )


def series_frame(series: Sequence[TemperatureSeries]) -> pd.DataFrame:
    """Series rows in file schema; the label column appears only when a spot is labeled."""
    rows = []
    for spot in series:
        for p in spot.points:
            rows.append([p.temperature, p.omega, p.sigma_omega, p.gamma, p.sigma_gamma, spot.spot_label])
    frame = pd.DataFrame(rows, columns=SERIES_COLUMNS + [SERIES_LABEL_COLUMN])
    if not any(spot.spot_label for spot in series):
        frame = frame.drop(columns=[SERIES_LABEL_COLUMN])
    return frame


def merge_series(spots: Iterable[TemperatureSeries]) -> List[TemperatureSeries]:
    """Combine series that share a spot label, points sorted by temperature.

    Raises:
        SchemaError: If one spot has two rows at the same temperature
    """
    grouped: Dict[str, List[TemperaturePoint]] = {}
    for spot in spots:
        grouped.setdefault(spot.spot_label, []).extend(spot.points)
    merged = []
    for label, points in grouped.items():
        points = sorted(points, key=lambda p: p.temperature)
        for earlier, later in zip(points, points[1:]):
            if later.temperature == earlier.temperature:
                raise SchemaError(f"spot {label or 'default'!r} has two rows at {later.temperature!r} K")
        merged.append(TemperatureSeries(points=points, spot_label=label))
    return merged


def t1_curve_frame(predictions: Sequence[T1Prediction]) -> pd.DataFrame:
    """Predicted rates and T1 per temperature; infinite T1 is a missing value."""
    rows = [[p.temperature, p.omega, p.gamma, np.nan if p.t1_us is None else p.t1_us] for p in predictions]
    return pd.DataFrame(rows, columns=T1_CURVE_COLUMNS, dtype=float)


def table_file_name(stem: str, fmt: str) -> str:
    return f"{stem}.{fmt}"


def write_table(frame: pd.DataFrame, path: Path, fmt: str = "csv") -> Path:
    """Write a table as CSV (17 significant digits) or as a JSON list of rows.

    Missing values become empty CSV cells or JSON nulls.
    """
    path = Path(path)
    if fmt == "csv":
        frame.to_csv(path, index=False, float_format=FLOAT_FORMAT)
    elif fmt == "json":
        rows = frame.astype(object).where(frame.notna(), None).to_dict(orient="records")
        path.write_text(json.dumps(rows, indent=2) + "\n")
    else:
        raise OutputError(f"unknown table format: {fmt}")
    return path


class OutputStager:
    """Collects outputs in temporary files and renames them into place together.

    Used as a context manager: outputs are committed when the block exits
    normally and discarded when it raises. A failed commit also removes the
    files it had already renamed.
    """

    def __init__(self, out_dir: Path):
        self.out_dir = Path(out_dir)
        self._staged: Dict[Path, Path] = {}

    def path_for(self, name: str) -> Path:
        """Temporary path that becomes out_dir/name on commit."""
        final = self.out_dir / name
        try:
            fd, temp = tempfile.mkstemp(prefix=f".{name}.", suffix=".tmp", dir=self.out_dir)
        except OSError as e:
            raise OutputError(f"cannot stage {final}: {e}") from e
        os.close(fd)
        self._staged[Path(temp)] = final
        return Path(temp)

    @property
    def targets(self) -> List[Path]:
        return list(self._staged.values())

    def commit(self) -> List[Path]:
        written = []
        try:
            for temp, final in self._staged.items():
                os.replace(temp, final)
                written.append(final)
                logger.info(f"Wrote {final}")
        except OSError as e:
            for final in written:
                final.unlink(missing_ok=True)
            self.discard()
            raise OutputError(f"failed to write outputs to {self.out_dir}: {e}") from e
        self._staged.clear()
        return written

    def discard(self) -> None:
        for temp in self._staged:
            try:
                temp.unlink()
            except FileNotFoundError:
                pass
        self._staged.clear()

    def __enter__(self) -> "OutputStager":
        return self

    def __exit__(self, exc_type, exc, tb) -> None:
        if exc_type is None:
            self.commit()
        else:
            self.discard()


def stage_record(stager: OutputStager, record: ResultRecord, name: str) -> Path:
    """Stage a result record so it commits together with the other outputs.

    Returns:
        Final path of the record
    """
    temp = stager.path_for(name)
    try:
        temp.write_text(record.model_dump_json(indent=2) + "\n")
    except OSError as e:
        raise OutputError(f"failed to stage result record {name}: {e}") from e
    return stager.out_dir / name


def write_record(record: ResultRecord, path: Path) -> Path:
    """Atomically write a result record as indented JSON."""
    path = Path(path)
    try:
        fd, temp = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=path.parent)
        with os.fdopen(fd, "w") as handle:
            handle.write(record.model_dump_json(indent=2) + "\n")
        os.replace(temp, path)
    except OSError as e:
        raise OutputError(f"failed to write result record {path}: {e}") from e
    logger.info(f"Wrote {path}")
    return path


def read_record(path: Path) -> ResultRecord:
    try:
        return ResultRecord.model_validate_json(Path(path).read_text())
    except ValueError as e:
        raise SchemaError(f"not a result record: {e}", str(path)) from e
