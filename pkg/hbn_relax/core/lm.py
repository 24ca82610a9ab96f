"""Weighted Levenberg-Marquardt least squares with box bounds."""

import logging

import numpy as np

from ..models.fit import FitModel, FitResult
from ..services.exceptions import FitError, SingularMatrixError
from .constants import (
    JACOBIAN_MIN_STEP,
    JACOBIAN_REL_STEP,
    LM_CHI2_RTOL,
    LM_DAMPING_FACTOR,
    LM_INITIAL_DAMPING,
    LM_MAX_DAMPING,
    LM_MAX_ITERATIONS,
    LM_STEP_TOL,
)

logger = logging.getLogger(__name__)


def numeric_jacobian(model: FitModel, params, x_values) -> np.ndarray:
    """Central-difference Jacobian ∂model/∂pᵢ, shape (len(x), arity).

    Each parameter is stepped by hᵢ = max(1e-8, 1e-6·|pᵢ|).
    """
    p = np.asarray(params, dtype=float)
    x = np.asarray(x_values, dtype=float)
    jac = np.empty((x.size, p.size), dtype=float)
    for i in range(p.size):
        h = max(JACOBIAN_MIN_STEP, JACOBIAN_REL_STEP * abs(p[i]))
        up = p.copy()
        down = p.copy()
        up[i] += h
        down[i] -= h
        jac[:, i] = (model.eval(up, x) - model.eval(down, x)) / (up[i] - down[i])
    return jac


def _weighted_residuals(model, params, x, y, weights):
    residuals = (y - model.eval(params, x)) * weights
    return residuals, float(residuals @ residuals)


def _normal_matrix(model, params, x, weights):
    jac = numeric_jacobian(model, params, x) * weights[:, None]
    return jac, jac.T @ jac


def covariance_from(normal: np.ndarray, chi2: float, dof: int, absolute_sigma: bool) -> np.ndarray:
    """(JᵀWJ)⁻¹, scaled by χ²/dof unless sigmas are taken as absolute.

    Raises:
        SingularMatrixError: If JᵀWJ is numerically singular
    """
    diagonal = np.diag(normal)
    if np.any(~np.isfinite(diagonal)) or np.any(diagonal <= 0.0):
        raise SingularMatrixError("JᵀWJ is singular (a parameter does not affect the model)")
    scale = np.sqrt(diagonal)
    correlation = normal / np.outer(scale, scale)
    condition = np.linalg.cond(correlation)
    if not np.isfinite(condition) or condition > 1.0 / np.finfo(float).eps:
        raise SingularMatrixError(f"JᵀWJ is singular (condition number {condition:.3e})")
    covariance = np.linalg.inv(correlation) / np.outer(scale, scale)
    covariance = 0.5 * (covariance + covariance.T)
    if not absolute_sigma:
        covariance = covariance * (chi2 / dof)
    return covariance


def levenberg_marquardt(
    model: FitModel,
    x,
    y,
    sigma,
    init,
    max_iterations: int = LM_MAX_ITERATIONS,
    absolute_sigma: bool = False,
) -> FitResult:
    """Minimize Σ((y − model)/σ)² from an initial parameter vector.

    Damping starts at 1e-3 and is multiplied by 10 on a rejected step and
    divided by 10 on an accepted one; trial points are projected onto the
    bounds. Convergence is declared when the relative χ² decrease drops
    below 1e-10, the step becomes negligible (1e-12 relative to |p|), or no
    downhill step exists at any damping.

    Args:
        model: Model to fit
        x: Abscissae
        y: Observations
        sigma: Standard errors of y, all > 0
        init: Starting parameters, inside the bounds
        max_iterations: Jacobian evaluations before giving up
        absolute_sigma: Keep the covariance unscaled by χ²/dof

    Returns:
        FitResult; converged is False if max_iterations was reached

    Raises:
        FitError: On invalid inputs
        SingularMatrixError: If the final JᵀWJ cannot be inverted
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    sigma = np.asarray(sigma, dtype=float)
    p = np.asarray(init, dtype=float).copy()

    if not (x.shape == y.shape == sigma.shape) or x.ndim != 1:
        raise FitError("x, y and sigma must be 1-D arrays of equal length")
    if p.size != model.arity:
        raise FitError(f"{model.name} takes {model.arity} parameters, got {p.size}")
    if x.size < model.arity + 1:
        raise FitError(f"{model.name} needs at least {model.arity + 1} points, got {x.size}")
    if np.any(~np.isfinite(sigma)) or np.any(sigma <= 0.0):
        raise FitError("all sigmas must be finite and > 0")
    lower, upper = model.lower_upper()
    if np.any(p < lower) or np.any(p > upper):
        raise FitError(f"initial parameters {p.tolist()} lie outside the bounds")

    weights = 1.0 / sigma
    dof = x.size - model.arity
    residuals, chi2 = _weighted_residuals(model, p, x, y, weights)
    if not np.isfinite(chi2):
        raise FitError(f"{model.name} is not finite at the initial parameters")

    damping = LM_INITIAL_DAMPING
    iterations = 0
    converged = False
    message = "maximum iterations reached"

    while iterations < max_iterations:
        if chi2 == 0.0:
            converged, message = True, "exact fit"
            break
        iterations += 1
        jac, normal = _normal_matrix(model, p, x, weights)
        gradient = jac.T @ residuals
        scale = np.diag(normal).copy()
        scale[scale <= 0.0] = 1.0

        accepted = False
        while damping <= LM_MAX_DAMPING:
            try:
                delta = np.linalg.solve(normal + damping * np.diag(scale), gradient)
            except np.linalg.LinAlgError:
                damping *= LM_DAMPING_FACTOR
                continue
            trial = np.clip(p + delta, lower, upper)
            trial_residuals, trial_chi2 = _weighted_residuals(model, trial, x, y, weights)
            if np.isfinite(trial_chi2) and trial_chi2 < chi2:
                accepted = True
                step = float(np.linalg.norm(trial - p))
                decrease = (chi2 - trial_chi2) / chi2
                p, residuals, chi2 = trial, trial_residuals, trial_chi2
                damping /= LM_DAMPING_FACTOR
                logger.debug(f"{model.name} iter {iterations}: chi2={chi2:.6e} damping={damping:.1e}")
                if decrease < LM_CHI2_RTOL:
                    converged, message = True, "relative chi2 decrease below tolerance"
                elif step < LM_STEP_TOL * (float(np.linalg.norm(p)) + LM_STEP_TOL):
                    converged, message = True, "step below tolerance"
                break
            damping *= LM_DAMPING_FACTOR

        if not accepted:
            converged, message = True, "no downhill step at any damping"
            break
        if converged:
            break

    if not converged:
        logger.warning(f"{model.name} fit did not converge in {max_iterations} iterations")

    _, normal = _normal_matrix(model, p, x, weights)
    covariance = covariance_from(normal, chi2, dof, absolute_sigma)
    stderr = np.sqrt(np.clip(np.diag(covariance), 0.0, None))

    return FitResult(
        model_name=model.name,
        param_names=tuple(model.param_names),
        params=p,
        stderr=stderr,
        covariance=covariance,
        chi2=chi2,
        dof=dof,
        converged=converged,
        iterations=iterations,
        message=message,
    )

