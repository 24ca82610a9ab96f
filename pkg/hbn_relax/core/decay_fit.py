"""Single-exponential fits of F1/F2 curves and rate extraction."""

import logging
import math
from typing import Tuple

import numpy as np

from ..models.fit import FitModel, FitResult
from ..models.kinetics import RateEstimate, RatePair
from ..models.sequence import DecayDataset
from ..services.exceptions import DecayFitError, FitError
from .constants import KHZ_US
from .fit_models import INF, exponential_model
from .lm import levenberg_marquardt

logger = logging.getLogger(__name__)

MIN_DECAY_POINTS = 4


def initial_guess(taus: np.ndarray, signals: np.ndarray) -> Tuple[float, float, float]:
    """Amplitude, rate (kHz) and baseline guesses for an exponential decay.

    The baseline is the mean of the last 10% of points, the amplitude the
    first point above it, and the rate a log-linear regression over the
    first half of the curve.

    Raises:
        DecayFitError: If the data does not lie above its baseline
    """
    n = taus.size
    tail = max(1, math.ceil(0.1 * n))
    baseline = float(np.mean(signals[-tail:]))
    amplitude = float(signals[0] - baseline)
    if not amplitude > 0.0:
        raise DecayFitError(
            f"amplitude guess {amplitude:.3g} <= 0 after baseline subtraction; data is not a decay"
        )

    half = max(2, n // 2)
    head_t = taus[:half]
    head_y = signals[:half] - baseline
    positive = head_y > 0.0
    rate = float("nan")
    if np.count_nonzero(positive) >= 2 and np.ptp(head_t[positive]) > 0.0:
        slope = np.polyfit(head_t[positive], np.log(head_y[positive]), 1)[0]
        rate = -slope / KHZ_US
    if not (math.isfinite(rate) and rate > 0.0):
        span = float(taus[-1] - taus[0])
        rate = 1.0 / (span * KHZ_US)
        logger.debug(f"Log-linear rate guess unusable, falling back to {rate:.4g} kHz")
    return amplitude, rate, baseline


def fit_single_exponential(data: DecayDataset, absolute_sigma: bool = True) -> FitResult:
    """Fit y = A·exp(−k·τ) + c to a decay curve.

    For F1 the fitted k is 3Ω, for F2 it is 2γ + Ω. The point sigmas are
    treated as known standard errors unless absolute_sigma is False.

    Raises:
        DecayFitError: For fewer than 4 points or non-decaying data
    """
    if len(data.points) < MIN_DECAY_POINTS:
        raise DecayFitError(f"need at least {MIN_DECAY_POINTS} points, got {len(data.points)}")
    taus, signals, sigmas = data.taus, data.signals, data.sigmas
    init = initial_guess(taus, signals)
    logger.debug(f"{data.curve_kind.value} initial guess A={init[0]:.4g} k={init[1]:.4g} c={init[2]:.4g}")

    result = levenberg_marquardt(exponential_model(), taus, signals, sigmas, init, absolute_sigma=absolute_sigma)
    logger.info(
        f"{data.curve_kind.value} fit: k = {result.value('rate'):.4f} ± {result.error('rate'):.4f} kHz "
        f"(chi2/dof = {result.reduced_chi2:.3f})"
    )
    return result


def extract_rates(f1_fit: FitResult, f2_fit: FitResult) -> RateEstimate:
    """Invert k₁ = 3Ω and k₂ = 2γ + Ω.

    Errors propagate assuming independent fits: σ_Ω = σ_k1/3 and
    σ_γ = sqrt(σ_k2² + σ_Ω²)/2, ignoring any Ω–k₂ covariance. When k₂
    falls below Ω by 3σ or more the estimate is flagged inconsistent and
    γ is clipped to 0.

    Raises:
        FitError: If either fit did not converge
    """
    if not (f1_fit.converged and f2_fit.converged):
        raise FitError("rate extraction needs two converged decay fits")

    k1, sigma_k1 = f1_fit.value("rate"), f1_fit.error("rate")
    k2, sigma_k2 = f2_fit.value("rate"), f2_fit.error("rate")
    omega = k1 / 3.0
    sigma_omega = sigma_k1 / 3.0
    excess = k2 - omega
    sigma_excess = math.hypot(sigma_k2, sigma_omega)
    raw_gamma = excess / 2.0

    consistent = excess > -3.0 * sigma_excess
    if not consistent:
        logger.warning(
            f"F2 rate {k2:.4g} kHz lies below Ω = {omega:.4g} kHz by >= 3σ; γ would be negative"
        )
    return RateEstimate(
        rates=RatePair(omega=omega, gamma=max(raw_gamma, 0.0)),
        sigma_omega=sigma_omega,
        sigma_gamma=sigma_excess / 2.0,
        raw_gamma=raw_gamma,
        consistent=consistent,
    )


def _joint_model(f1: DecayDataset, f2: DecayDataset) -> FitModel:
    taus = np.concatenate([f1.taus, f2.taus])
    n1 = len(f1.points)

    def func(p, index):
        idx = index.astype(int)
        t = taus[idx] * KHZ_US
        a1, omega, c1, a2, gamma, c2 = p
        first = a1 * np.exp(-3.0 * omega * t) + c1
        second = a2 * np.exp(-(omega + 2.0 * gamma) * t) + c2
        return np.where(idx >= n1, second, first)

    return FitModel(
        name="joint_decay",
        param_names=("A1", "omega", "c1", "A2", "gamma", "c2"),
        func=func,
        bounds=((0.0, INF), (0.0, INF), (-INF, INF), (0.0, INF), (0.0, INF), (-INF, INF)),
    )


def fit_rates_joint(
    f1: DecayDataset, f2: DecayDataset, absolute_sigma: bool = True
) -> Tuple[RateEstimate, FitResult]:
    """Fit both curves at once with Ω shared between them.

    Independent fits seed the joint fit; Ω and γ then come straight from
    one covariance matrix, so their correlation is accounted for.
    """
    first = fit_single_exponential(f1, absolute_sigma=absolute_sigma)
    second = fit_single_exponential(f2, absolute_sigma=absolute_sigma)
    omega0 = first.value("rate") / 3.0
    gamma0 = max((second.value("rate") - omega0) / 2.0, 1e-6 * max(omega0, 1.0))
    init = (
        first.value("amplitude"),
        omega0,
        first.value("baseline"),
        second.value("amplitude"),
        gamma0,
        second.value("baseline"),
    )

    index = np.arange(len(f1.points) + len(f2.points), dtype=float)
    signals = np.concatenate([f1.signals, f2.signals])
    sigmas = np.concatenate([f1.sigmas, f2.sigmas])
    result = levenberg_marquardt(
        _joint_model(f1, f2), index, signals, sigmas, init, absolute_sigma=absolute_sigma
    )
    if not result.converged:
        raise FitError("joint decay fit did not converge")

    estimate = RateEstimate(
        rates=RatePair(omega=result.value("omega"), gamma=result.value("gamma")),
        sigma_omega=result.error("omega"),
        sigma_gamma=result.error("gamma"),
        raw_gamma=result.value("gamma"),
        consistent=True,
    )
    logger.info(
        f"Joint fit: Ω = {estimate.rates.omega:.4f} ± {estimate.sigma_omega:.4f} kHz, "
        f"γ = {estimate.rates.gamma:.4f} ± {estimate.sigma_gamma:.4f} kHz"
    )
    return estimate, result
