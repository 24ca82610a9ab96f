"""Static SVG figures of data and fitted curves."""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Literal, Optional, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from pydantic import BaseModel, ConfigDict, Field  # noqa: E402

from .exceptions import OutputError, PlotError  # noqa: E402

logger = logging.getLogger(__name__)

SVG_HASH_SALT = "hbn-relax"
MARKERS = ("o", "s", "^", "D", "v")


@dataclass(frozen=True)
class PlotSeries:
    """One curve: markers (with optional error bars) for data, a line for models."""

    label: str
    x: np.ndarray
    y: np.ndarray
    yerr: Optional[np.ndarray] = None
    kind: Literal["points", "line"] = "points"


class PlotStyle(BaseModel):
    """Axis titles and units; units always appear in the axis labels."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    title: str = ""
    x_label: str
    x_unit: str = Field(..., min_length=1)
    y_label: str
    y_unit: str = Field(..., min_length=1)
    log_y: bool = False


def _check_series(series: Sequence[PlotSeries]) -> None:
    if not series:
        raise PlotError("nothing to plot")
    for curve in series:
        x = np.asarray(curve.x, dtype=float)
        y = np.asarray(curve.y, dtype=float)
        if x.size == 0:
            raise PlotError(f"curve '{curve.label}' is empty")
        if x.shape != y.shape:
            raise PlotError(f"curve '{curve.label}' has {x.size} x values but {y.size} y values")


def emit_plot_svg(series: Sequence[PlotSeries], style: PlotStyle, path: Path) -> Path:
    """Render curves into a standalone SVG file.

    The same curves and style always produce the same bytes.

    Raises:
        PlotError: For empty or mismatched curves
        OutputError: If the file cannot be written
    """
    _check_series(series)
    path = Path(path)

    with plt.rc_context({"svg.hashsalt": SVG_HASH_SALT, "svg.fonttype": "path"}):
        fig, ax = plt.subplots(figsize=(6.4, 4.8))
        try:
            marker_index = 0
            for curve in series:
                if curve.kind == "line":
                    ax.plot(curve.x, curve.y, "-", linewidth=1.5, label=curve.label)
                    continue
                marker = MARKERS[marker_index % len(MARKERS)]
                marker_index += 1
                if curve.yerr is not None:
                    ax.errorbar(curve.x, curve.y, yerr=curve.yerr, fmt=marker, markersize=4, capsize=2,
                                label=curve.label)
                else:
                    ax.plot(curve.x, curve.y, marker, markersize=4, linestyle="none", label=curve.label)

            ax.set_xlabel(f"{style.x_label} ({style.x_unit})")
            ax.set_ylabel(f"{style.y_label} ({style.y_unit})")
            if style.title:
                ax.set_title(style.title)
            if style.log_y:
                ax.set_yscale("log")
            ax.legend()
            fig.tight_layout()
            fig.savefig(path, format="svg", metadata={"Date": None})
        except OSError as e:
            raise OutputError(f"failed to write figure {path}: {e}") from e
        finally:
            plt.close(fig)

    logger.debug(f"Rendered {len(series)} curve(s) into {path}")
    return path
