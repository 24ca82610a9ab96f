"""Models for hbn-relax."""

from .config import RunConfig
from .fit import FitModel, FitResult, OdmrFit
from .kinetics import KineticEigenmodes, PopulationState, RateEstimate, RateMatrix, RatePair
from .phonon import CouplingSet, PhononMode, T1Prediction, TemperaturePoint, TemperatureSeries
from .record import FitSummary, ResultRecord
from .sequence import CurveKind, DecayDataset, PulseSequence, ReadoutModel, Transition

__all__ = [
    "RunConfig",
    "FitModel",
    "FitResult",
    "OdmrFit",
    "KineticEigenmodes",
    "PopulationState",
    "RateEstimate",
    "RateMatrix",
    "RatePair",
    "CouplingSet",
    "PhononMode",
    "T1Prediction",
    "TemperaturePoint",
    "TemperatureSeries",
    "FitSummary",
    "ResultRecord",
    "CurveKind",
    "DecayDataset",
    "PulseSequence",
    "ReadoutModel",
    "Transition",
]
