"""Pulse-sequence elements, readout model and decay datasets."""

from enum import Enum
from typing import Annotated, List, Literal, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..core.constants import DEFAULT_RATE_BRIGHT, DEFAULT_RATE_DARK, DEFAULT_SHOTS


class Transition(str, Enum):
    """Microwave transitions addressed by a π-pulse."""

    ZERO_MINUS = "0<->-1"
    ZERO_PLUS = "0<->+1"


class CurveKind(str, Enum):
    """The two measured fluorescence-difference curves."""

    F1 = "F1"  # S(0,0) − S(0,−1), decays at 3Ω
    F2 = "F2"  # S(−1,−1) − S(−1,+1), decays at Ω + 2γ


class Polarize(BaseModel):
    """Optical pumping into |mₛ=0⟩."""

    model_config = ConfigDict(frozen=True, extra="forbid")
    kind: Literal["polarize"] = "polarize"


class Wait(BaseModel):
    """Dark free evolution for tau µs."""

    model_config = ConfigDict(frozen=True, extra="forbid")
    kind: Literal["wait"] = "wait"
    tau: float = Field(..., ge=0.0, allow_inf_nan=False)


class PiPulse(BaseModel):
    """Population swap on one transition with fidelity f."""

    model_config = ConfigDict(frozen=True, extra="forbid")
    kind: Literal["pi"] = "pi"
    transition: Transition
    fidelity: float = Field(1.0, ge=0.0, le=1.0)


class Readout(BaseModel):
    """Fluorescence readout, always the final element."""

    model_config = ConfigDict(frozen=True, extra="forbid")
    kind: Literal["readout"] = "readout"


PulseElement = Annotated[Union[Polarize, Wait, PiPulse, Readout], Field(discriminator="kind")]


class PulseSequence(BaseModel):
    """Ordered protocol terminated by exactly one readout."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    elements: List[PulseElement]

    @model_validator(mode="after")
    def _check_readout(self) -> "PulseSequence":
        readouts = [i for i, e in enumerate(self.elements) if isinstance(e, Readout)]
        if len(readouts) != 1:
            raise ValueError(f"sequence needs exactly one readout, found {len(readouts)}")
        if readouts[0] != len(self.elements) - 1:
            raise ValueError("readout must be the last element")
        return self


class ReadoutModel(BaseModel):
    """Photon counts per shot for bright |0⟩ and dark |±1⟩ populations."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    rate_bright: float = Field(DEFAULT_RATE_BRIGHT, ge=0.0, allow_inf_nan=False)
    rate_dark: float = Field(DEFAULT_RATE_DARK, ge=0.0, allow_inf_nan=False)
    shots: int = Field(DEFAULT_SHOTS, ge=1)

    @model_validator(mode="after")
    def _check_contrast(self) -> "ReadoutModel":
        if self.rate_bright <= self.rate_dark:
            raise ValueError("rate_bright must exceed rate_dark")
        return self

    @classmethod
    def perfect(cls) -> "ReadoutModel":
        """Unit contrast, single shot: counts equal the |0⟩ population."""
        return cls(rate_bright=1.0, rate_dark=0.0, shots=1)


class DecayPoint(BaseModel):
    """One delay of a decay curve."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    tau: float = Field(..., ge=0.0, allow_inf_nan=False)
    signal: float = Field(..., allow_inf_nan=False)
    sigma: float = Field(..., gt=0.0, allow_inf_nan=False)


class DecayDataset(BaseModel):
    """Normalized fluorescence-difference data for an F1 or F2 curve."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    curve_kind: CurveKind
    points: List[DecayPoint]
    temperature: Optional[float] = Field(None, gt=0.0)

    @field_validator("points")
    @classmethod
    def _check_increasing(cls, points: List[DecayPoint]) -> List[DecayPoint]:
        for previous, current in zip(points, points[1:]):
            if current.tau <= previous.tau:
                raise ValueError(f"taus must be strictly increasing, {current.tau} follows {previous.tau}")
        return points

    @classmethod
    def from_arrays(cls, curve_kind, taus, signals, sigmas, temperature=None) -> "DecayDataset":
        return cls(
            curve_kind=curve_kind,
            points=[
                DecayPoint(tau=float(t), signal=float(s), sigma=float(e))
                for t, s, e in zip(taus, signals, sigmas)
            ],
            temperature=temperature,
        )

    @property
    def taus(self) -> np.ndarray:
        return np.array([p.tau for p in self.points], dtype=float)

    @property
    def signals(self) -> np.ndarray:
        return np.array([p.signal for p in self.points], dtype=float)

    @property
    def sigmas(self) -> np.ndarray:
        return np.array([p.sigma for p in self.points], dtype=float)
