"""Run configuration for the command-line tools."""

from pathlib import Path
from typing import List, Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..core.constants import (
    DEFAULT_RATE_BRIGHT,
    DEFAULT_RATE_DARK,
    DEFAULT_SHOTS,
    DEFAULT_T_START_K,
    DEFAULT_T_STEP_K,
    DEFAULT_T_STOP_K,
    REFERENCE_GAMMA_KHZ,
    REFERENCE_ODMR_NU1_MHZ,
    REFERENCE_ODMR_NU2_MHZ,
    REFERENCE_OMEGA_KHZ,
)
from .kinetics import RatePair
from .phonon import CouplingSet
from .sequence import ReadoutModel

MAX_SEED = 2**64 - 1


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid")


class RatesSection(_Section):
    """Relaxation rates used for simulation, in kHz."""

    omega: float = Field(REFERENCE_OMEGA_KHZ, ge=0.0, allow_inf_nan=False)
    gamma: float = Field(REFERENCE_GAMMA_KHZ, ge=0.0, allow_inf_nan=False)

    def to_rate_pair(self) -> RatePair:
        return RatePair(omega=self.omega, gamma=self.gamma)


class ReadoutSection(_Section):
    """Photon-count readout model and π-pulse quality."""

    rate_bright: float = Field(DEFAULT_RATE_BRIGHT, ge=0.0, allow_inf_nan=False)
    rate_dark: float = Field(DEFAULT_RATE_DARK, ge=0.0, allow_inf_nan=False)
    shots: int = Field(DEFAULT_SHOTS, ge=1)
    pi_fidelity: float = Field(1.0, ge=0.0, le=1.0)

    @model_validator(mode="after")
    def _check_contrast(self) -> "ReadoutSection":
        if self.rate_bright <= self.rate_dark:
            raise ValueError("readout.rate_bright must exceed rate_dark")
        return self

    def to_readout_model(self) -> ReadoutModel:
        return ReadoutModel(rate_bright=self.rate_bright, rate_dark=self.rate_dark, shots=self.shots)


class GridSection(_Section):
    """Delay grid for synthetic decay curves, in µs."""

    tau_points: int = Field(20, ge=1)
    tau_max_us: float = Field(50.0, gt=0.0, allow_inf_nan=False)
    tau_values: Optional[List[float]] = None

    @field_validator("tau_values")
    @classmethod
    def _check_values(cls, values: Optional[List[float]]) -> Optional[List[float]]:
        if values is None:
            return values
        if not values:
            raise ValueError("tau_values must not be empty")
        if any(v < 0.0 for v in values):
            raise ValueError("tau_values must be >= 0")
        if any(b <= a for a, b in zip(values, values[1:])):
            raise ValueError("tau_values must be strictly increasing")
        return values

    def taus(self) -> List[float]:
        if self.tau_values is not None:
            return list(self.tau_values)
        return [float(v) for v in np.linspace(0.0, self.tau_max_us, self.tau_points)]


class InputsSection(_Section):
    """Input files; every given path must exist."""

    f1: Optional[Path] = None
    f2: Optional[Path] = None
    spectrum: Optional[Path] = None
    series: Optional[Path] = None
    pdos: Optional[Path] = None
    record: Optional[Path] = None  # fit-temp result record holding a coupling set

    @field_validator("*")
    @classmethod
    def _check_exists(cls, path: Optional[Path]) -> Optional[Path]:
        if path is not None and not path.is_file():
            raise ValueError(f"input file not found: {path}")
        return path


class TemperatureGridSection(_Section):
    """Temperature grid for predicted curves, in K."""

    start: float = Field(DEFAULT_T_START_K, gt=0.0, allow_inf_nan=False)
    stop: float = Field(DEFAULT_T_STOP_K, gt=0.0, allow_inf_nan=False)
    step: float = Field(DEFAULT_T_STEP_K, gt=0.0, allow_inf_nan=False)

    @model_validator(mode="after")
    def _check_order(self) -> "TemperatureGridSection":
        if self.stop < self.start:
            raise ValueError("temperature_grid.stop must not be below start")
        return self

    def temperatures(self) -> List[float]:
        count = int(np.floor((self.stop - self.start) / self.step + 1e-9)) + 1
        return [float(self.start + i * self.step) for i in range(count)]


class OdmrSection(_Section):
    """Synthetic two-dip ODMR spectrum (MHz, contrast units)."""

    baseline: float = 1.0
    depth1: float = Field(0.02, gt=0.0)
    nu1: float = REFERENCE_ODMR_NU1_MHZ
    width1: float = Field(20.0, gt=0.0)
    depth2: float = Field(0.02, gt=0.0)
    nu2: float = REFERENCE_ODMR_NU2_MHZ
    width2: float = Field(20.0, gt=0.0)
    freq_start: float = 3300.0
    freq_stop: float = 3650.0
    points: int = Field(351, ge=8)
    noise_sigma: float = Field(0.0, ge=0.0)

    @model_validator(mode="after")
    def _check_band(self) -> "OdmrSection":
        if self.freq_stop <= self.freq_start:
            raise ValueError("odmr.freq_stop must exceed freq_start")
        return self

    def params(self) -> List[float]:
        return [self.baseline, self.depth1, self.nu1, self.width1, self.depth2, self.nu2, self.width2]

    def freqs(self) -> List[float]:
        return [float(v) for v in np.linspace(self.freq_start, self.freq_stop, self.points)]


class RunConfig(_Section):
    """Everything a command needs; defaults < config file < flags."""

    rates: RatesSection = Field(default_factory=RatesSection)
    readout: ReadoutSection = Field(default_factory=ReadoutSection)
    grid: GridSection = Field(default_factory=GridSection)
    inputs: InputsSection = Field(default_factory=InputsSection)
    temperature_grid: TemperatureGridSection = Field(default_factory=TemperatureGridSection)
    odmr: OdmrSection = Field(default_factory=OdmrSection)
    coupling: Optional[CouplingSet] = None
    seed: int = Field(0, ge=0, le=MAX_SEED)
    out_dir: Path = Path("results")
    format: Literal["csv", "json"] = "csv"
    joint: bool = False
    mode_count: int = Field(3, ge=1)
    temperature_k: Optional[float] = Field(293.0, gt=0.0)
    spot_label: str = ""
