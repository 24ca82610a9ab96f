"""Phonon modes, coupling sets and temperature series."""

from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class PhononMode(BaseModel):
    """An effective phonon mode of energy ħω in meV."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    energy: float = Field(..., gt=0.0, allow_inf_nan=False)


class CouplingSet(BaseModel):
    """Coefficients of Ω(T) = Σ Aᵢ nᵢ(nᵢ+1) + A_S and γ(T) = Σ Bᵢ nᵢ(nᵢ+1) + B_S, in kHz."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    modes: List[PhononMode]
    a_coeffs: List[float]
    a_offset: float = Field(0.0, ge=0.0, allow_inf_nan=False)
    b_coeffs: List[float]
    b_offset: float = Field(0.0, ge=0.0, allow_inf_nan=False)

    @field_validator("a_coeffs", "b_coeffs")
    @classmethod
    def _check_nonnegative(cls, coeffs: List[float]) -> List[float]:
        for value in coeffs:
            if not value >= 0.0 or value == float("inf"):
                raise ValueError(f"coupling coefficients must be finite and >= 0, got {value!r}")
        return coeffs

    @model_validator(mode="after")
    def _check_lengths(self) -> "CouplingSet":
        if not (len(self.a_coeffs) == len(self.b_coeffs) == len(self.modes)):
            raise ValueError("coefficient lists must match the number of modes")
        return self

    @property
    def energies(self) -> List[float]:
        return [mode.energy for mode in self.modes]


class TemperaturePoint(BaseModel):
    """Rates measured at one temperature."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    temperature: float = Field(..., gt=0.0, allow_inf_nan=False)
    omega: float = Field(..., allow_inf_nan=False)
    sigma_omega: float = Field(..., gt=0.0, allow_inf_nan=False)
    gamma: float = Field(..., allow_inf_nan=False)
    sigma_gamma: float = Field(..., gt=0.0, allow_inf_nan=False)


class TemperatureSeries(BaseModel):
    """Ω(T), γ(T) measurements of one sample spot."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    points: List[TemperaturePoint]
    spot_label: str = ""

    @field_validator("points")
    @classmethod
    def _check_increasing(cls, points: List[TemperaturePoint]) -> List[TemperaturePoint]:
        for previous, current in zip(points, points[1:]):
            if current.temperature <= previous.temperature:
                raise ValueError(
                    f"temperatures must be strictly increasing, {current.temperature} follows {previous.temperature}"
                )
        return points

    def column(self, name: str) -> List[float]:
        return [getattr(p, name) for p in self.points]


class T1Prediction(BaseModel):
    """Model rates and T1 at one temperature."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    temperature: float
    omega: float
    gamma: float
    t1_us: Optional[float]
