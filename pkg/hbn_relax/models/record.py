"""Result records written by every command."""

import math
from datetime import datetime, timezone
from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field

from .fit import FitResult


def _finite_or_none(value: float) -> Optional[float]:
    return float(value) if math.isfinite(value) else None


class ParameterEstimate(BaseModel):
    """A fitted value and its 1σ standard error."""

    model_config = ConfigDict(extra="forbid")

    value: Optional[float]
    stderr: Optional[float]


class FitSummary(BaseModel):
    """Serializable view of a FitResult."""

    model_config = ConfigDict(extra="forbid")

    model: str
    params: Dict[str, ParameterEstimate]
    chi2: Optional[float]
    dof: int
    reduced_chi2: Optional[float]
    converged: bool
    iterations: int
    message: str = ""

    @classmethod
    def from_result(cls, result: FitResult) -> "FitSummary":
        reduced = result.chi2 / result.dof if result.dof > 0 else float("nan")
        return cls(
            model=result.model_name,
            params={
                name: ParameterEstimate(value=_finite_or_none(v), stderr=_finite_or_none(e))
                for name, (v, e) in result.as_dict().items()
            },
            chi2=_finite_or_none(result.chi2),
            dof=result.dof,
            reduced_chi2=_finite_or_none(reduced),
            converged=result.converged,
            iterations=result.iterations,
            message=result.message,
        )


class ResultRecord(BaseModel):
    """JSON record of one command run.

    Identical inputs and seed reproduce every field except timestamp.
    """

    model_config = ConfigDict(extra="forbid")

    command: str
    status: Literal["ok", "failed"] = "ok"
    input_digest: str
    seed: int
    fits: Dict[str, FitSummary] = Field(default_factory=dict)
    derived: Dict[str, Any] = Field(default_factory=dict)
    outputs: List[str] = Field(default_factory=list)
    diagnostics: List[str] = Field(default_factory=list)
    toolkit_version: str
    timestamp: str = Field(default_factory=lambda: datetime.now(timezone.utc).isoformat())

    def numeric_fields(self) -> Dict[str, Any]:
        """The fields that must match between identical runs."""
        return self.model_dump(include={"fits", "derived"}, mode="json")
