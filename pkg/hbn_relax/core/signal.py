"""Smoothing and extremum search shared by the ODMR and PDOS analyses."""

from typing import Tuple

import numpy as np
from scipy.ndimage import uniform_filter1d
from scipy.signal import find_peaks

from .constants import SMOOTHING_WINDOW


def moving_average(values, window: int = SMOOTHING_WINDOW) -> np.ndarray:
    """Centered moving average; edges repeat the end values."""
    return uniform_filter1d(np.asarray(values, dtype=float), size=window, mode="nearest")


def local_maxima(values, min_prominence: float = 0.0) -> Tuple[np.ndarray, np.ndarray]:
    """Interior maxima and their prominences.

    Prominence is the height above the higher of the two minima that
    separate the peak from taller neighbours (or the ends).
    """
    peaks, properties = find_peaks(np.asarray(values, dtype=float), prominence=min_prominence)
    return peaks, properties["prominences"]
