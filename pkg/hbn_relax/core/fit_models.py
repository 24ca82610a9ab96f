"""Model families fitted by the toolkit.

Each factory returns a FitModel carrying its analytic Jacobian, which the
tests use to check the numeric one.
"""

from typing import Sequence

import numpy as np

from ..models.fit import FitModel
from .constants import K_B_MEV_PER_K, KHZ_US

INF = np.inf


def _exponential(p, tau):
    amplitude, rate, baseline = p
    return amplitude * np.exp(-rate * tau * KHZ_US) + baseline


def _exponential_jacobian(p, tau):
    amplitude, rate, _ = p
    decay = np.exp(-rate * tau * KHZ_US)
    return np.column_stack([decay, -amplitude * tau * KHZ_US * decay, np.ones_like(tau)])


def exponential_model() -> FitModel:
    """y = A·exp(−k·τ) + c with k in kHz and τ in µs."""
    return FitModel(
        name="single_exponential",
        param_names=("amplitude", "rate", "baseline"),
        func=_exponential,
        bounds=((0.0, INF), (0.0, INF), (-INF, INF)),
        jacobian=_exponential_jacobian,
    )


def lorentzian_dip(nu, depth, center, width):
    """Dip of given depth and half width at half maximum."""
    return depth * width**2 / ((nu - center) ** 2 + width**2)


def _two_lorentzian(p, nu):
    c0, a1, nu1, w1, a2, nu2, w2 = p
    return c0 - lorentzian_dip(nu, a1, nu1, w1) - lorentzian_dip(nu, a2, nu2, w2)


def _dip_jacobian(nu, depth, center, width):
    d2 = (nu - center) ** 2
    denominator = d2 + width**2
    shape = width**2 / denominator
    d_depth = shape
    d_center = depth * width**2 * 2.0 * (nu - center) / denominator**2
    d_width = depth * 2.0 * width * d2 / denominator**2
    return d_depth, d_center, d_width


def _two_lorentzian_jacobian(p, nu):
    _, a1, nu1, w1, a2, nu2, w2 = p
    first = _dip_jacobian(nu, a1, nu1, w1)
    second = _dip_jacobian(nu, a2, nu2, w2)
    return np.column_stack(
        [np.ones_like(nu)]
        + [-column for column in first]
        + [-column for column in second]
    )


def two_lorentzian_model(freq_min: float = -INF, freq_max: float = INF) -> FitModel:
    """C(ν) = c₀ − A₁·L(ν; ν₁, w₁) − A₂·L(ν; ν₂, w₂), dips below baseline."""
    return FitModel(
        name="two_lorentzian",
        param_names=("c0", "A1", "nu1", "w1", "A2", "nu2", "w2"),
        func=_two_lorentzian,
        bounds=(
            (-INF, INF),
            (0.0, INF),
            (freq_min, freq_max),
            (0.0, INF),
            (0.0, INF),
            (freq_min, freq_max),
            (0.0, INF),
        ),
        jacobian=_two_lorentzian_jacobian,
    )


def occupation_factors(energies: Sequence[float], temperatures) -> np.ndarray:
    """Design matrix n(n+1), shape (len(temperatures), len(energies))."""
    t = np.asarray(temperatures, dtype=float)[:, None]
    e = np.asarray(energies, dtype=float)[None, :]
    with np.errstate(over="ignore"):
        n = 1.0 / np.expm1(e / (K_B_MEV_PER_K * t))
    return n * (n + 1.0)


def phonon_rate_model(energies: Sequence[float], name: str = "phonon_rate") -> FitModel:
    """Rate(T) = Σ cᵢ·nᵢ(nᵢ+1) + offset for fixed mode energies in meV."""
    energies = tuple(float(e) for e in energies)

    def func(p, temperatures):
        return occupation_factors(energies, temperatures) @ p[:-1] + p[-1]

    def jacobian(p, temperatures):
        design = occupation_factors(energies, temperatures)
        return np.column_stack([design, np.ones(design.shape[0])])

    param_names = tuple(f"c{i + 1}" for i in range(len(energies))) + ("offset",)
    return FitModel(
        name=name,
        param_names=param_names,
        func=func,
        bounds=tuple((0.0, INF) for _ in param_names),
        jacobian=jacobian,
    )
