"""Two-Lorentzian ODMR fitting and synthetic spectra."""

import logging
import math
from typing import Sequence, Tuple, Union

import numpy as np

from ..models.fit import FitResult, OdmrFit
from ..services.exceptions import LorentzianFitError
from .fit_models import two_lorentzian_model
from .lm import levenberg_marquardt
from .signal import local_maxima, moving_average

logger = logging.getLogger(__name__)

MIN_SPECTRUM_POINTS = 8
MIN_DIP_FRACTION = 0.1  # dips shallower than this share of the contrast range are noise

SeedLike = Union[int, np.random.SeedSequence]


def _half_width(freqs: np.ndarray, smooth: np.ndarray, index: int, level: float) -> float:
    left = index
    while left > 0 and smooth[left] < level:
        left -= 1
    right = index
    while right < smooth.size - 1 and smooth[right] < level:
        right += 1
    width = 0.5 * (freqs[right] - freqs[left])
    spacing = float(np.median(np.diff(freqs)))
    return max(width, 2.0 * spacing)


def initial_guess(freqs: np.ndarray, contrast: np.ndarray) -> Tuple[float, ...]:
    """(c₀, A₁, ν₁, w₁, A₂, ν₂, w₂) from the two deepest smoothed minima.

    Raises:
        LorentzianFitError: If fewer than two dips are resolvable
    """
    smooth = moving_average(contrast)
    span = float(np.ptp(smooth))
    minima, _ = local_maxima(-smooth, min_prominence=MIN_DIP_FRACTION * span)
    if minima.size < 2:
        found = ", ".join(f"{freqs[i]:.3f}" for i in minima) or "none"
        raise LorentzianFitError(
            f"two-Lorentzian fit needs two resolvable dips, found {minima.size} (at MHz: {found})"
        )

    deepest = sorted(minima, key=lambda i: smooth[i])[:2]
    first, second = sorted(deepest)
    baseline = float(np.max(smooth))
    guess = [baseline]
    for index in (first, second):
        depth = baseline - float(smooth[index])
        width = _half_width(freqs, smooth, index, baseline - 0.5 * depth)
        guess.extend([depth, float(freqs[index]), width])
    return tuple(guess)


def fit_two_lorentzian(freqs: Sequence[float], contrast: Sequence[float]) -> OdmrFit:
    """Fit two Lorentzian dips and report ν₁ < ν₂, ν₀ = (ν₁+ν₂)/2 and E.

    Args:
        freqs: Microwave frequencies in MHz (any order)
        contrast: Normalized fluorescence contrast

    Raises:
        LorentzianFitError: For short spectra or fewer than two dips
    """
    f = np.asarray(freqs, dtype=float)
    c = np.asarray(contrast, dtype=float)
    if f.size < MIN_SPECTRUM_POINTS:
        raise LorentzianFitError(f"need at least {MIN_SPECTRUM_POINTS} spectrum points, got {f.size}")
    order = np.argsort(f, kind="stable")
    f, c = f[order], c[order]

    init = initial_guess(f, c)
    logger.debug(f"ODMR initial guess: {init}")
    model = two_lorentzian_model(float(f[0]), float(f[-1]))
    # Spectra carry no per-point errors; unit weights with χ²/dof scaling.
    result = levenberg_marquardt(model, f, c, np.ones_like(c), init)
    result = _ordered(result)

    cov = result.covariance
    nu1, nu2 = result.value("nu1"), result.value("nu2")
    sigma_nu0 = 0.5 * math.sqrt(max(cov[2, 2] + cov[5, 5] + 2.0 * cov[2, 5], 0.0))
    sigma_e = 0.5 * math.sqrt(max(cov[2, 2] + cov[5, 5] - 2.0 * cov[2, 5], 0.0))
    odmr = OdmrFit(
        fit=result,
        nu1=nu1,
        nu2=nu2,
        nu0=0.5 * (nu1 + nu2),
        sigma_nu1=result.error("nu1"),
        sigma_nu2=result.error("nu2"),
        sigma_nu0=sigma_nu0,
        width1=result.value("w1"),
        width2=result.value("w2"),
        splitting_e=0.5 * abs(nu2 - nu1),
        sigma_e=sigma_e,
    )
    logger.info(f"ODMR: ν1 = {nu1:.3f} MHz, ν2 = {nu2:.3f} MHz, ν0 = {odmr.nu0:.3f} ± {sigma_nu0:.3f} MHz")
    return odmr


def _ordered(result: FitResult) -> FitResult:
    """Swap the two dips if the fit crossed them over."""
    if result.value("nu1") <= result.value("nu2"):
        return result
    perm = np.array([0, 4, 5, 6, 1, 2, 3])
    return FitResult(
        model_name=result.model_name,
        param_names=result.param_names,
        params=result.params[perm],
        stderr=result.stderr[perm],
        covariance=result.covariance[np.ix_(perm, perm)],
        chi2=result.chi2,
        dof=result.dof,
        converged=result.converged,
        iterations=result.iterations,
        message=result.message,
    )


def synth_odmr_spectrum(
    params: Sequence[float],
    freqs: Sequence[float],
    noise_sigma: float = 0.0,
    seed: SeedLike = 0,
) -> Tuple[np.ndarray, np.ndarray]:
    """Two-Lorentzian spectrum (c₀, A₁, ν₁, w₁, A₂, ν₂, w₂) plus Gaussian contrast noise."""
    f = np.asarray(freqs, dtype=float)
    contrast = two_lorentzian_model().eval(params, f)
    if noise_sigma > 0.0:
        contrast = contrast + np.random.default_rng(seed).normal(0.0, noise_sigma, size=f.size)
    return f, contrast
