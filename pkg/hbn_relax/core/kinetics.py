"""Population dynamics of the ground-state spin triplet.

The generator couples |0⟩ to |±1⟩ at the single-quantum rate Ω and |−1⟩ to
|+1⟩ at the double-quantum rate γ, with equal up and down rates. Its
eigenvectors are fixed by symmetry:

    (1, 1, 1)   rate 0        (equilibrium)
    (1, −2, 1)  rate 3Ω       (|0⟩ versus |±1⟩ imbalance)
    (1, 0, −1)  rate Ω + 2γ   (|−1⟩ versus |+1⟩ imbalance)

Rates are in kHz and times in µs; every exponent is rate · time · 1e-3.
"""

import logging
import math

import numpy as np

from ..models.kinetics import (
    KineticEigenmodes,
    NumericEvolution,
    PopulationState,
    RateMatrix,
    RatePair,
    RelaxationSummary,
)
from ..services.exceptions import InfiniteT1Error, KineticsError
from .constants import GENERATOR_TOL, KHZ_US, RENORMALIZE_TOL, US_PER_INV_KHZ

logger = logging.getLogger(__name__)

EQUILIBRIUM_MODE = (1.0, 1.0, 1.0)
POLARIZATION_MODE = (1.0, -2.0, 1.0)
IMBALANCE_MODE = (1.0, 0.0, -1.0)


def build_rate_matrix(rates: RatePair) -> RateMatrix:
    """Assemble the generator M of dp/dt = M·p for a rate pair.

    Args:
        rates: Validated (Ω, γ) pair in kHz

    Returns:
        Symmetric, column-conserving rate matrix in the (−1, 0, +1) basis
    """
    omega, gamma = rates.omega, rates.gamma
    return RateMatrix(
        entries=(
            (-(omega + gamma), omega, gamma),
            (omega, -2.0 * omega, omega),
            (gamma, omega, -(omega + gamma)),
        )
    )


def eigenmodes(matrix: RateMatrix) -> KineticEigenmodes:
    """Spectral decomposition of a rate matrix, decay rates ascending.

    Matrices with one common single-quantum rate use the closed-form
    vectors; anything else falls back to a symmetric eigen-solve.
    """
    m = matrix.entries
    omega_minus, omega_plus, gamma = m[1][0], m[1][2], m[0][2]
    scale = max(1.0, abs(omega_minus), abs(omega_plus))
    if abs(omega_minus - omega_plus) <= GENERATOR_TOL * scale:
        omega = 0.5 * (omega_minus + omega_plus)
        pairs = [
            (0.0, EQUILIBRIUM_MODE),
            (3.0 * omega, POLARIZATION_MODE),
            (omega + 2.0 * gamma, IMBALANCE_MODE),
        ]
        pairs.sort(key=lambda pair: pair[0])
        return KineticEigenmodes(
            rates=tuple(rate for rate, _ in pairs),
            modes=tuple(mode for _, mode in pairs),
        )

    logger.debug("Unequal single-quantum rates, using numeric eigen-solve")
    values, vectors = np.linalg.eigh(np.asarray(m, dtype=float))
    decay = -values
    order = np.argsort(decay)
    decay = np.clip(decay[order], 0.0, None)
    return KineticEigenmodes(
        rates=tuple(float(v) for v in decay),
        modes=tuple(tuple(float(c) for c in vectors[:, k]) for k in order),
    )


def _check_tau(tau: float) -> None:
    if not math.isfinite(tau) or tau < 0.0:
        raise KineticsError(f"evolution time must be finite and >= 0, got {tau!r} µs")


def propagate(populations: np.ndarray, rates: RatePair, tau: float) -> np.ndarray:
    """Closed-form evolution of a raw population vector.

    Works on unvalidated vectors so the pulse sequencer can chain steps;
    the total probability is carried through unchanged.
    """
    p = np.asarray(populations, dtype=float)
    total = p.sum()
    c_polar = (p[0] - 2.0 * p[1] + p[2]) / 6.0
    c_imbalance = (p[0] - p[2]) / 2.0
    decay_polar = math.exp(-3.0 * rates.omega * tau * KHZ_US)
    decay_imbalance = math.exp(-(rates.omega + 2.0 * rates.gamma) * tau * KHZ_US)
    return (
        total / 3.0 * np.asarray(EQUILIBRIUM_MODE)
        + c_polar * decay_polar * np.asarray(POLARIZATION_MODE)
        + c_imbalance * decay_imbalance * np.asarray(IMBALANCE_MODE)
    )


def evolve_analytic(initial: PopulationState, rates: RatePair, tau: float) -> PopulationState:
    """Exact populations after free relaxation for tau µs.

    Args:
        initial: Normalized starting populations
        rates: Relaxation rates in kHz
        tau: Evolution time in µs

    Returns:
        Populations at time tau

    Raises:
        KineticsError: If tau is negative or not finite
    """
    _check_tau(tau)
    evolved = np.clip(propagate(np.asarray(initial.as_tuple()), rates, tau), 0.0, 1.0)
    return PopulationState.from_vector(evolved)


def integrate_rate_equations(
    initial: PopulationState, rates: RatePair, tau: float, step: float
) -> NumericEvolution:
    """Classical fourth-order Runge-Kutta integration of dp/dt = M·p.

    The step is shrunk so an integer number of steps lands exactly on tau.
    If the probability sum drifts by more than 1e-9 the result is
    renormalized and flagged.
    """
    if not math.isfinite(step) or step <= 0.0:
        raise KineticsError(f"integration step must be > 0, got {step!r} µs")
    _check_tau(tau)

    generator = np.asarray(build_rate_matrix(rates).entries) * KHZ_US
    p = np.asarray(initial.as_tuple(), dtype=float)
    steps = 0 if tau == 0.0 else max(1, math.ceil(tau / step - 1e-9))
    if steps:
        h = tau / steps
        for _ in range(steps):
            k1 = generator @ p
            k2 = generator @ (p + 0.5 * h * k1)
            k3 = generator @ (p + 0.5 * h * k2)
            k4 = generator @ (p + h * k3)
            p = p + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)

    renormalized = False
    drift = abs(p.sum() - 1.0)
    if drift > RENORMALIZE_TOL:
        logger.warning(f"Probability drift {drift:.3e} after {steps} RK4 steps, renormalizing")
        p = p / p.sum()
        renormalized = True
    p = np.clip(p, 0.0, 1.0)
    return NumericEvolution(
        state=PopulationState.from_vector(p), steps=steps, renormalized=renormalized
    )


def evolve_numeric(
    initial: PopulationState, rates: RatePair, tau: float, step: float
) -> PopulationState:
    """Fixed-step RK4 counterpart of evolve_analytic."""
    return integrate_rate_equations(initial, rates, tau, step).state


def t1_from_rates(rates: RatePair) -> float:
    """Spin-lattice relaxation time 1/(3Ω + γ) in µs.

    A rate of 1 kHz means 10³ s⁻¹, so 1/kHz = 1000 µs.

    Raises:
        InfiniteT1Error: If 3Ω + γ = 0
    """
    total = 3.0 * rates.omega + rates.gamma
    if total <= 0.0:
        raise InfiniteT1Error("3Ω + γ = 0: no relaxation, T1 is infinite")
    return US_PER_INV_KHZ / total


def relaxation_summary(rates: RatePair) -> RelaxationSummary:
    """Decay rates of the two measured curves plus T1."""
    f1_rate = 3.0 * rates.omega
    f2_rate = rates.omega + 2.0 * rates.gamma
    try:
        t1 = t1_from_rates(rates)
    except InfiniteT1Error:
        t1 = None
    return RelaxationSummary(
        f1_rate_khz=f1_rate,
        f2_rate_khz=f2_rate,
        f1_time_us=US_PER_INV_KHZ / f1_rate if f1_rate > 0 else None,
        f2_time_us=US_PER_INV_KHZ / f2_rate if f2_rate > 0 else None,
        t1_us=t1,
    )
