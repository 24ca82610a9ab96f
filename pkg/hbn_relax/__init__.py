"""hbn-relax: spin relaxation of boron-vacancy spin ensembles.

Rate-equation kinetics of the spin-1 ground state, pulse-sequence
simulation of the two relaxometry protocols, least-squares fitting of
decay curves and ODMR spectra, and two-phonon temperature models of the
relaxation rates.
"""

__version__ = "0.1.0"

from .core.kinetics import build_rate_matrix, eigenmodes, evolve_analytic, evolve_numeric, t1_from_rates
from .core.sequencer import run_sequence, signal_f1, signal_f2, synth_dataset
from .core.lm import levenberg_marquardt, numeric_jacobian
from .core.decay_fit import extract_rates, fit_rates_joint, fit_single_exponential
from .core.odmr import fit_two_lorentzian
from .core.phonons import bose_occupation, fit_temperature_series, pdos_peaks, predict_t1_curve, rate_model
from .models.kinetics import PopulationState, RatePair
from .models.phonon import CouplingSet, PhononMode, TemperatureSeries

__all__ = [
    "__version__",
    "build_rate_matrix",
    "eigenmodes",
    "evolve_analytic",
    "evolve_numeric",
    "t1_from_rates",
    "run_sequence",
    "signal_f1",
    "signal_f2",
    "synth_dataset",
    "levenberg_marquardt",
    "numeric_jacobian",
    "fit_single_exponential",
    "extract_rates",
    "fit_rates_joint",
    "fit_two_lorentzian",
    "bose_occupation",
    "rate_model",
    "fit_temperature_series",
    "predict_t1_curve",
    "pdos_peaks",
    "PopulationState",
    "RatePair",
    "CouplingSet",
    "PhononMode",
    "TemperatureSeries",
]
