"""Fit model and fit result containers."""

from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

ModelFunction = Callable[[np.ndarray, np.ndarray], np.ndarray]
Bounds = Sequence[Tuple[float, float]]


@dataclass(frozen=True)
class FitModel:
    """A parametric model y = func(params, x) with optional box bounds."""

    name: str
    param_names: Tuple[str, ...]
    func: ModelFunction
    bounds: Optional[Bounds] = None
    jacobian: Optional[ModelFunction] = None  # analytic, used for verification

    @property
    def arity(self) -> int:
        return len(self.param_names)

    def eval(self, params, x) -> np.ndarray:
        return np.asarray(self.func(np.asarray(params, dtype=float), np.asarray(x, dtype=float)), dtype=float)

    def lower_upper(self) -> Tuple[np.ndarray, np.ndarray]:
        """Bounds as two arrays, unbounded sides as ±inf."""
        if self.bounds is None:
            return np.full(self.arity, -np.inf), np.full(self.arity, np.inf)
        lower = np.array([b[0] for b in self.bounds], dtype=float)
        upper = np.array([b[1] for b in self.bounds], dtype=float)
        return lower, upper


@dataclass(frozen=True)
class FitResult:
    """Best-fit parameters with their uncertainties."""

    model_name: str
    param_names: Tuple[str, ...]
    params: np.ndarray
    stderr: np.ndarray
    covariance: np.ndarray
    chi2: float
    dof: int
    converged: bool
    iterations: int
    message: str = ""
    notes: List[str] = field(default_factory=list)

    @property
    def reduced_chi2(self) -> float:
        return self.chi2 / self.dof

    def value(self, name: str) -> float:
        return float(self.params[self.param_names.index(name)])

    def error(self, name: str) -> float:
        return float(self.stderr[self.param_names.index(name)])

    def as_dict(self) -> Dict[str, Tuple[float, float]]:
        """Parameter name -> (value, stderr)."""
        return {
            name: (float(v), float(e))
            for name, v, e in zip(self.param_names, self.params, self.stderr)
        }


@dataclass(frozen=True)
class OdmrFit:
    """Two-Lorentzian ODMR fit with the derived resonance quantities (MHz)."""

    fit: FitResult
    nu1: float
    nu2: float
    nu0: float
    sigma_nu1: float
    sigma_nu2: float
    sigma_nu0: float
    width1: float
    width2: float
    splitting_e: float  # |ν₂ − ν₁| / 2
    sigma_e: float

    @property
    def zero_field_splitting(self) -> float:
        """D equals the center frequency ν₀ at zero field."""
        return self.nu0
