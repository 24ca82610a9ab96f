"""Two-phonon (Raman-type) temperature models of the relaxation rates.

Both rates follow Σᵢ cᵢ·nᵢ(nᵢ+1) + offset with nᵢ the Bose-Einstein
occupation of an effective phonon mode. Mode energies are fixed inputs,
normally the strongest peaks of a phonon density of states.
"""

import logging
from enum import Enum
from typing import List, Sequence, Tuple, Union

import numpy as np
from scipy.optimize import brentq, nnls

from ..models.fit import FitResult
from ..models.kinetics import RatePair
from ..models.phonon import CouplingSet, PhononMode, T1Prediction, TemperaturePoint, TemperatureSeries
from ..services.exceptions import InfiniteT1Error, PeakExtractionError, TemperatureFitError, ThermoError
from .constants import K_B_MEV_PER_K
from .fit_models import occupation_factors, phonon_rate_model
from .kinetics import t1_from_rates
from .lm import levenberg_marquardt
from .signal import local_maxima, moving_average

logger = logging.getLogger(__name__)

MIN_SERIES_POINTS = 5
MIN_PDOS_POINTS = 16

SeedLike = Union[int, np.random.SeedSequence]


class RateKind(str, Enum):
    """Which relaxation rate a coupling model describes."""

    OMEGA = "omega"
    GAMMA = "gamma"


def _check_temperature(temperature) -> np.ndarray:
    t = np.asarray(temperature, dtype=float)
    if np.any(~np.isfinite(t)) or np.any(t <= 0.0):
        raise ThermoError(f"temperatures must be finite and > 0 K, got {temperature!r}")
    return t


def _scalar_or_array(values: np.ndarray, like) -> Union[float, np.ndarray]:
    return float(values) if np.ndim(like) == 0 else values


def bose_occupation(energy, temperature):
    """Mean phonon number 1/(exp(E/k_BT) − 1), energy in meV, temperature in K.

    Frozen modes (E ≫ k_BT) give 0 without overflow warnings.

    Raises:
        ThermoError: If temperature <= 0 or energy <= 0
    """
    t = _check_temperature(temperature)
    e = np.asarray(energy, dtype=float)
    if np.any(~np.isfinite(e)) or np.any(e <= 0.0):
        raise ThermoError(f"phonon energies must be finite and > 0 meV, got {energy!r}")
    with np.errstate(over="ignore"):
        n = 1.0 / np.expm1(e / (K_B_MEV_PER_K * t))
    return _scalar_or_array(n, np.broadcast(e, t))


def occupation_factor(energy, temperature):
    """n(n+1), the two-phonon population factor."""
    n = np.asarray(bose_occupation(energy, temperature))
    return _scalar_or_array(n * (n + 1.0), n)


def _coefficients(kind: RateKind, coupling: CouplingSet) -> Tuple[np.ndarray, float]:
    if RateKind(kind) is RateKind.OMEGA:
        return np.asarray(coupling.a_coeffs, dtype=float), coupling.a_offset
    return np.asarray(coupling.b_coeffs, dtype=float), coupling.b_offset


def rate_model(kind: RateKind, coupling: CouplingSet, temperature):
    """Ω(T) or γ(T) in kHz: Σ coeffᵢ·nᵢ(nᵢ+1) + offset."""
    t = _check_temperature(temperature)
    coeffs, offset = _coefficients(kind, coupling)
    if coeffs.size == 0:
        return _scalar_or_array(np.full(t.shape, offset), t)
    rates = occupation_factors(coupling.energies, np.atleast_1d(t)) @ coeffs + offset
    return _scalar_or_array(rates.reshape(t.shape), t)


def mode_contributions(kind: RateKind, coupling: CouplingSet, temperature: float) -> List[float]:
    """Partial rate (kHz) of each mode at one temperature, offset excluded."""
    t = _check_temperature(temperature)
    coeffs, _ = _coefficients(kind, coupling)
    factors = occupation_factors(coupling.energies, np.atleast_1d(t))[0]
    return [float(c * f) for c, f in zip(coeffs, factors)]


def _fit_rate(
    kind: RateKind, temperatures: np.ndarray, rates: np.ndarray, sigmas: np.ndarray, energies: List[float]
) -> FitResult:
    design = np.column_stack([occupation_factors(energies, temperatures), np.ones(temperatures.size)])
    solution, residual_norm = nnls(design / sigmas[:, None], rates / sigmas)
    logger.debug(f"{kind.value} NNLS solution {solution.tolist()} (weighted residual {residual_norm:.3e})")

    model = phonon_rate_model(energies, name=f"{kind.value}_temperature")
    result = levenberg_marquardt(model, temperatures, rates, sigmas, solution)
    logger.debug(f"{kind.value} LM refinement: chi2 {result.chi2:.6e} in {result.iterations} iterations")
    return result


def fit_temperature_series(
    series: TemperatureSeries, modes: Sequence[PhononMode]
) -> Tuple[CouplingSet, Tuple[FitResult, FitResult]]:
    """Fit Ω(T) and γ(T) independently with fixed mode energies.

    The model is linear in its nonnegative coefficients, so weighted
    nonnegative least squares gives the exact optimum; Levenberg-Marquardt
    started there confirms it and supplies the covariance.

    Returns:
        (coupling set, (Ω fit, γ fit))

    Raises:
        TemperatureFitError: With fewer than 5 temperatures or too many modes
    """
    if len(series.points) < MIN_SERIES_POINTS:
        raise TemperatureFitError(
            f"temperature series needs at least {MIN_SERIES_POINTS} points, got {len(series.points)}"
        )
    energies = [mode.energy for mode in modes]
    if len(energies) + 2 > len(series.points):
        raise TemperatureFitError(f"{len(energies)} modes are under-determined by {len(series.points)} points")

    temperatures = np.asarray(series.column("temperature"), dtype=float)
    omega_fit = _fit_rate(
        RateKind.OMEGA,
        temperatures,
        np.asarray(series.column("omega"), dtype=float),
        np.asarray(series.column("sigma_omega"), dtype=float),
        energies,
    )
    gamma_fit = _fit_rate(
        RateKind.GAMMA,
        temperatures,
        np.asarray(series.column("gamma"), dtype=float),
        np.asarray(series.column("sigma_gamma"), dtype=float),
        energies,
    )
    coupling = CouplingSet(
        modes=list(modes),
        a_coeffs=[float(v) for v in omega_fit.params[:-1]],
        a_offset=float(omega_fit.params[-1]),
        b_coeffs=[float(v) for v in gamma_fit.params[:-1]],
        b_offset=float(gamma_fit.params[-1]),
    )
    label = f" ({series.spot_label})" if series.spot_label else ""
    logger.info(f"Fitted temperature series{label} with {len(series.points)} points")
    return coupling, (omega_fit, gamma_fit)


def predict_t1_curve(coupling: CouplingSet, t_grid: Sequence[float]) -> List[T1Prediction]:
    """Ω(T), γ(T) and T1(T) on a temperature grid; T1 is None where 3Ω + γ = 0."""
    temperatures = [float(t) for t in t_grid]
    if not temperatures:
        return []
    _check_temperature(temperatures)
    omegas = np.atleast_1d(rate_model(RateKind.OMEGA, coupling, temperatures))
    gammas = np.atleast_1d(rate_model(RateKind.GAMMA, coupling, temperatures))

    predictions = []
    for t, omega, gamma in zip(temperatures, omegas, gammas):
        try:
            t1 = t1_from_rates(RatePair(omega=float(omega), gamma=float(gamma)))
        except InfiniteT1Error:
            t1 = None
        predictions.append(T1Prediction(temperature=t, omega=float(omega), gamma=float(gamma), t1_us=t1))
    return predictions


def crossover_temperature(coupling: CouplingSet, ratio: float, t_low: float, t_high: float) -> float:
    """Temperature in [t_low, t_high] where γ(T)/Ω(T) equals ratio.

    Raises:
        ThermoError: If the ratio is not crossed inside the interval
    """
    _check_temperature([t_low, t_high])

    def excess(t: float) -> float:
        return rate_model(RateKind.GAMMA, coupling, t) - ratio * rate_model(RateKind.OMEGA, coupling, t)

    low, high = excess(t_low), excess(t_high)
    if low == 0.0:
        return float(t_low)
    if high == 0.0:
        return float(t_high)
    if np.sign(low) == np.sign(high):
        raise ThermoError(f"γ/Ω does not cross {ratio} between {t_low} K and {t_high} K")
    return float(brentq(excess, t_low, t_high, xtol=1e-9))


def synth_temperature_series(
    coupling: CouplingSet,
    temperatures: Sequence[float],
    rel_noise: float = 0.0,
    seed: SeedLike = 0,
    spot_label: str = "",
) -> TemperatureSeries:
    """Rates from a coupling set with Gaussian noise of relative size rel_noise.

    Sigmas equal rel_noise times the true rate (1e-6 relative when noise-free).
    """
    t = _check_temperature(list(temperatures))
    rng = np.random.default_rng(seed)
    omega = np.atleast_1d(rate_model(RateKind.OMEGA, coupling, t))
    gamma = np.atleast_1d(rate_model(RateKind.GAMMA, coupling, t))
    scale = rel_noise if rel_noise > 0.0 else 1e-6
    sigma_omega = np.maximum(scale * np.abs(omega), 1e-12)
    sigma_gamma = np.maximum(scale * np.abs(gamma), 1e-12)
    if rel_noise > 0.0:
        omega = omega + rng.normal(0.0, sigma_omega)
        gamma = gamma + rng.normal(0.0, sigma_gamma)
    points = [
        TemperaturePoint(
            temperature=float(ti), omega=float(o), sigma_omega=float(so), gamma=float(g), sigma_gamma=float(sg)
        )
        for ti, o, so, g, sg in zip(t, omega, sigma_omega, gamma, sigma_gamma)
    ]
    return TemperatureSeries(points=points, spot_label=spot_label)


def pdos_peaks(energies: Sequence[float], density: Sequence[float], count: int = 3) -> List[PhononMode]:
    """The `count` most prominent PDOS maxima, in ascending energy.

    The density is smoothed with a 5-point moving average before the
    search; peak energies are grid energies.

    Raises:
        PeakExtractionError: For short or unordered grids, or fewer peaks than requested
    """
    e = np.asarray(energies, dtype=float)
    d = np.asarray(density, dtype=float)
    if e.size < MIN_PDOS_POINTS:
        raise PeakExtractionError(f"PDOS needs at least {MIN_PDOS_POINTS} points, got {e.size}")
    if np.any(np.diff(e) <= 0.0):
        raise PeakExtractionError("PDOS energies must be strictly increasing")

    peaks, prominences = local_maxima(moving_average(d))
    if peaks.size < count:
        found = ", ".join(f"{e[i]:.3f}" for i in peaks) or "none"
        raise PeakExtractionError(f"requested {count} PDOS peaks, found {peaks.size} (at meV: {found})")

    ranked = peaks[np.argsort(-prominences, kind="stable")][:count]
    selected = sorted(float(e[i]) for i in ranked)
    logger.info(f"PDOS peaks at {', '.join(f'{v:.2f}' for v in selected)} meV")
    return [PhononMode(energy=v) for v in selected]
