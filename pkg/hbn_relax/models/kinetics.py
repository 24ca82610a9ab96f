"""Rate and population models for the spin-1 ground-state triplet.

Basis ordering everywhere is (|mₛ=−1⟩, |mₛ=0⟩, |mₛ=+1⟩).
"""

import math
from typing import Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..core.constants import GENERATOR_TOL, PROBABILITY_TOL

Vector3 = Tuple[float, float, float]
Matrix3 = Tuple[Vector3, Vector3, Vector3]


class RatePair(BaseModel):
    """Single-quantum (Ω) and double-quantum (γ) relaxation rates in kHz."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    omega: float = Field(..., ge=0.0, allow_inf_nan=False, description="|0⟩↔|±1⟩ rate, kHz")
    gamma: float = Field(..., ge=0.0, allow_inf_nan=False, description="|−1⟩↔|+1⟩ rate, kHz")


class PopulationState(BaseModel):
    """Occupation probabilities of the three sublevels."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    p_minus: float = Field(..., ge=0.0, le=1.0)
    p_zero: float = Field(..., ge=0.0, le=1.0)
    p_plus: float = Field(..., ge=0.0, le=1.0)

    @model_validator(mode="after")
    def _check_normalized(self) -> "PopulationState":
        total = self.p_minus + self.p_zero + self.p_plus
        if abs(total - 1.0) > PROBABILITY_TOL:
            raise ValueError(f"populations must sum to 1, got {total!r}")
        return self

    @classmethod
    def polarized(cls) -> "PopulationState":
        """All population in |mₛ=0⟩."""
        return cls(p_minus=0.0, p_zero=1.0, p_plus=0.0)

    @classmethod
    def thermal(cls) -> "PopulationState":
        """Uniform equilibrium of a symmetric generator."""
        third = 1.0 / 3.0
        return cls(p_minus=third, p_zero=1.0 - 2.0 * third, p_plus=third)

    @classmethod
    def from_vector(cls, values) -> "PopulationState":
        p_minus, p_zero, p_plus = (float(v) for v in values)
        return cls(p_minus=p_minus, p_zero=p_zero, p_plus=p_plus)

    def as_tuple(self) -> Vector3:
        return (self.p_minus, self.p_zero, self.p_plus)


class RateMatrix(BaseModel):
    """Generator of the population rate equations dp/dt = M·p, in kHz."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    entries: Matrix3

    @field_validator("entries")
    @classmethod
    def _check_generator(cls, entries: Matrix3) -> Matrix3:
        for row in entries:
            for value in row:
                if not math.isfinite(value):
                    raise ValueError("rate matrix entries must be finite")
        for i in range(3):
            for j in range(3):
                if abs(entries[i][j] - entries[j][i]) > GENERATOR_TOL * max(1.0, abs(entries[i][j])):
                    raise ValueError("rate matrix must be symmetric")
                if i != j and entries[i][j] < 0.0:
                    raise ValueError("off-diagonal rates must be nonnegative")
            if entries[i][i] > 0.0:
                raise ValueError("diagonal entries must be nonpositive")
        for j in range(3):
            column_sum = sum(entries[i][j] for i in range(3))
            scale = max(1.0, max(abs(entries[i][j]) for i in range(3)))
            if abs(column_sum) > GENERATOR_TOL * scale:
                raise ValueError(f"column {j} sums to {column_sum!r}, expected 0")
        return entries


class KineticEigenmodes(BaseModel):
    """Decay rates (kHz, ascending) and the population-difference modes they damp."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    rates: Vector3
    modes: Matrix3


class NumericEvolution(BaseModel):
    """Outcome of a fixed-step integration of the rate equations."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    state: PopulationState
    steps: int
    renormalized: bool = False


class RelaxationSummary(BaseModel):
    """Observable decay rates and time constants for a rate pair."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    f1_rate_khz: float
    f2_rate_khz: float
    f1_time_us: Optional[float]
    f2_time_us: Optional[float]
    t1_us: Optional[float]


class RateEstimate(BaseModel):
    """Rates recovered from decay fits, with 1σ uncertainties."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    rates: RatePair
    sigma_omega: float = Field(..., ge=0.0)
    sigma_gamma: float = Field(..., ge=0.0)
    raw_gamma: float
    consistent: bool = True
