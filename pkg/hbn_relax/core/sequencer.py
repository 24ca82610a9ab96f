"""Pulse-protocol simulation and synthetic decay data.

Populations are carried as raw vectors in the (−1, 0, +1) basis between
elements; the readout maps |0⟩ to bright counts and |±1⟩ to dark counts.
"""

import logging
from typing import List, Optional, Sequence, Union

import numpy as np
from pydantic import ValidationError

from ..models.kinetics import PopulationState, RatePair
from ..models.sequence import (
    CurveKind,
    DecayDataset,
    PiPulse,
    Polarize,
    PulseElement,
    PulseSequence,
    Readout,
    ReadoutModel,
    Transition,
    Wait,
)
from ..services.exceptions import SequenceError
from .kinetics import propagate

logger = logging.getLogger(__name__)

SeedLike = Union[int, np.random.SeedSequence]

_TRANSITION_LEVELS = {
    Transition.ZERO_MINUS: (1, 0),
    Transition.ZERO_PLUS: (1, 2),
}


def _as_sequence(seq: Union[PulseSequence, Sequence[PulseElement]]) -> PulseSequence:
    if isinstance(seq, PulseSequence):
        return seq
    try:
        return PulseSequence(elements=list(seq))
    except ValidationError as e:
        raise SequenceError(f"Malformed pulse sequence: {e.errors()[0]['msg']}") from e


def _apply_pi(p: np.ndarray, pulse: PiPulse) -> np.ndarray:
    a, b = _TRANSITION_LEVELS[pulse.transition]
    swapped = p.copy()
    swapped[a], swapped[b] = p[b], p[a]
    return pulse.fidelity * swapped + (1.0 - pulse.fidelity) * p


def run_sequence(
    seq: Union[PulseSequence, Sequence[PulseElement]],
    rates: RatePair,
    readout: ReadoutModel,
    polarized: Optional[PopulationState] = None,
) -> float:
    """Expected total counts of a protocol over readout.shots repetitions.

    Before the first Polarize the spins sit in thermal equilibrium.

    Args:
        seq: Pulse elements ending in a single Readout
        rates: Relaxation rates in kHz
        readout: Count model
        polarized: State prepared by Polarize (defaults to pure |0⟩)

    Raises:
        SequenceError: If the readout is missing, repeated or not last
    """
    sequence = _as_sequence(seq)
    prepared = np.asarray((polarized or PopulationState.polarized()).as_tuple(), dtype=float)
    p = np.asarray(PopulationState.thermal().as_tuple(), dtype=float)

    for element in sequence.elements:
        if isinstance(element, Polarize):
            p = prepared.copy()
        elif isinstance(element, Wait):
            p = propagate(p, rates, element.tau)
        elif isinstance(element, PiPulse):
            p = _apply_pi(p, element)
        elif isinstance(element, Readout):
            bright = p[1]
            dark = p[0] + p[2]
            return readout.shots * (bright * readout.rate_bright + dark * readout.rate_dark)

    raise SequenceError("sequence ended without a readout")  # pragma: no cover


def f1_sequences(tau: float, pi_fidelity: float = 1.0) -> tuple:
    """Reference and π-read protocols whose difference is F1(τ)."""
    reference = [Polarize(), Wait(tau=tau), Readout()]
    flipped = [
        Polarize(),
        Wait(tau=tau),
        PiPulse(transition=Transition.ZERO_MINUS, fidelity=pi_fidelity),
        Readout(),
    ]
    return reference, flipped


def f2_sequences(tau: float, pi_fidelity: float = 1.0) -> tuple:
    """Protocols reading |−1⟩ and |+1⟩ after preparation in |−1⟩."""
    prepare = [Polarize(), PiPulse(transition=Transition.ZERO_MINUS, fidelity=pi_fidelity), Wait(tau=tau)]
    read_minus = prepare + [PiPulse(transition=Transition.ZERO_MINUS, fidelity=pi_fidelity), Readout()]
    read_plus = prepare + [PiPulse(transition=Transition.ZERO_PLUS, fidelity=pi_fidelity), Readout()]
    return read_minus, read_plus


def _sequences_for(curve_kind: CurveKind, tau: float, pi_fidelity: float) -> tuple:
    if CurveKind(curve_kind) is CurveKind.F1:
        return f1_sequences(tau, pi_fidelity)
    return f2_sequences(tau, pi_fidelity)


def _raw_difference(curve_kind, tau, rates, readout, pi_fidelity, polarized) -> float:
    first, second = _sequences_for(curve_kind, tau, pi_fidelity)
    return run_sequence(first, rates, readout, polarized) - run_sequence(second, rates, readout, polarized)


def _normalized_signal(curve_kind, tau, rates, readout, pi_fidelity, polarized) -> float:
    if tau < 0.0:
        raise SequenceError(f"delay must be >= 0, got {tau!r} µs")
    reference = _raw_difference(curve_kind, 0.0, rates, readout, pi_fidelity, polarized)
    if reference == 0.0:
        raise SequenceError(f"{CurveKind(curve_kind).value} has no contrast at τ=0, cannot normalize")
    return _raw_difference(curve_kind, tau, rates, readout, pi_fidelity, polarized) / reference


def signal_f1(
    tau: float,
    rates: RatePair,
    readout: ReadoutModel,
    pi_fidelity: float = 1.0,
    polarized: Optional[PopulationState] = None,
) -> float:
    """F1(τ) = S(0,0) − S(0,−1), normalized to 1 at τ=0. Ideal pulses give e^{−3Ωτ}."""
    return _normalized_signal(CurveKind.F1, tau, rates, readout, pi_fidelity, polarized)


def signal_f2(
    tau: float,
    rates: RatePair,
    readout: ReadoutModel,
    pi_fidelity: float = 1.0,
    polarized: Optional[PopulationState] = None,
) -> float:
    """F2(τ) = S(−1,−1) − S(−1,+1), normalized to 1 at τ=0. Ideal pulses give e^{−(2γ+Ω)τ}."""
    return _normalized_signal(CurveKind.F2, tau, rates, readout, pi_fidelity, polarized)


def synth_dataset(
    curve_kind: CurveKind,
    rates: RatePair,
    readout: ReadoutModel,
    tau_grid: Sequence[float],
    seed: SeedLike,
    pi_fidelity: float = 1.0,
    polarized: Optional[PopulationState] = None,
    temperature: Optional[float] = None,
) -> DecayDataset:
    """Poisson-noise decay curve for a delay grid.

    Each delay draws photon counts for both protocols of the pair, takes
    their difference and divides by the noise-free τ=0 difference. The
    attached sigma is the Poisson error of the difference, sqrt(N₁ + N₂),
    on the same scale.

    Args:
        curve_kind: F1 or F2
        rates: Relaxation rates in kHz
        readout: Count model (shots sets the photon budget)
        tau_grid: Strictly increasing delays in µs
        seed: Integer seed or SeedSequence; equal seeds give equal datasets
        pi_fidelity: π-pulse swap fidelity
        polarized: State prepared by Polarize
        temperature: Optional temperature label in K

    Raises:
        SequenceError: If the grid is empty
    """
    taus = np.asarray(list(tau_grid), dtype=float)
    if taus.size == 0:
        raise SequenceError("tau grid must not be empty")

    rng = np.random.default_rng(seed)
    reference = _raw_difference(curve_kind, 0.0, rates, readout, pi_fidelity, polarized)
    if reference == 0.0:
        raise SequenceError("no readout contrast, cannot normalize synthetic data")

    signals: List[float] = []
    sigmas: List[float] = []
    for tau in taus:
        first, second = _sequences_for(curve_kind, float(tau), pi_fidelity)
        mean_first = run_sequence(first, rates, readout, polarized)
        mean_second = run_sequence(second, rates, readout, polarized)
        counts_first, counts_second = rng.poisson((mean_first, mean_second))
        signals.append((float(counts_first) - float(counts_second)) / reference)
        sigmas.append(np.sqrt(max(float(counts_first + counts_second), 1.0)) / abs(reference))

    logger.debug(f"Synthesized {CurveKind(curve_kind).value} curve with {taus.size} delays")
    return DecayDataset.from_arrays(curve_kind, taus, signals, sigmas, temperature=temperature)
