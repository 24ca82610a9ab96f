"""Exception hierarchy for the toolkit.

Every error carries the exit code the command line reports for it.
"""

from typing import Optional

from ..core.constants import EXIT_CONFIG, EXIT_FIT, EXIT_IO


class ToolkitError(Exception):
    """Base exception for all toolkit errors."""

    exit_code = 1


class ConfigError(ToolkitError, ValueError):
    """Raised for invalid or unknown configuration entries."""

    exit_code = EXIT_CONFIG


class SchemaError(ToolkitError, ValueError):
    """Raised when an input table violates its schema."""

    exit_code = EXIT_CONFIG

    def __init__(self, message: str, path: Optional[str] = None, line: Optional[int] = None):
        self.path = path
        self.line = line
        location = ""
        if path is not None:
            location = f"{path}"
            if line is not None:
                location += f", line {line}"
            location += ": "
        super().__init__(f"{location}{message}")


class KineticsError(ToolkitError, ValueError):
    """Raised for invalid inputs to the rate-equation solvers."""

    exit_code = EXIT_CONFIG


class InfiniteT1Error(KineticsError):
    """Raised when 3Ω + γ = 0, so no relaxation occurs."""

    pass


class SequenceError(ToolkitError, ValueError):
    """Raised for malformed pulse sequences."""

    exit_code = EXIT_CONFIG


class ThermoError(ToolkitError, ValueError):
    """Raised for non-physical temperatures or energies."""

    exit_code = EXIT_CONFIG


class PlotError(ToolkitError, ValueError):
    """Raised when a figure cannot be produced from the given curves."""

    exit_code = EXIT_CONFIG


class FitError(ToolkitError):
    """Base exception for fitting failures."""

    exit_code = EXIT_FIT


class SingularMatrixError(FitError):
    """Raised when JᵀWJ cannot be inverted."""

    pass


class DecayFitError(FitError):
    """Raised when decay data is inconsistent with an exponential decay."""

    pass


class LorentzianFitError(FitError):
    """Raised when an ODMR spectrum does not resolve two dips."""

    pass


class TemperatureFitError(FitError):
    """Raised for under-determined or invalid temperature-series fits."""

    pass


class PeakExtractionError(FitError):
    """Raised when a PDOS spectrum has fewer peaks than requested."""

    pass


class OutputError(ToolkitError):
    """Raised when results cannot be written."""

    exit_code = EXIT_IO
