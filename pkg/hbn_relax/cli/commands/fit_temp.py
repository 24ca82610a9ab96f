"""Fit-temp command for hbn-relax."""

import re
from typing import List, Optional, Sequence

import click
import numpy as np

from ...core.constants import T1_CURVE_STEM
from ...core.phonons import (
    RateKind,
    crossover_temperature,
    fit_temperature_series,
    mode_contributions,
    pdos_peaks,
    predict_t1_curve,
    rate_model,
)
from ...models.phonon import CouplingSet, T1Prediction, TemperatureSeries
from ...services.exceptions import FitError, ThermoError
from ...services.plot_service import PlotSeries, PlotStyle, emit_plot_svg
from ...services.table_service import (
    OutputStager,
    read_pdos_csv,
    read_series_csv,
    t1_curve_frame,
    table_file_name,
    write_table,
)
from ..helpers import (
    add_fit,
    common_options,
    echo_outputs,
    fail_record,
    handle_errors,
    load_run_config,
    new_record,
    print_table,
    require_input,
    stage_result_record,
)

DEFAULT_SPOT = "default"
REFERENCE_TEMPERATURE_K = 400.0
ROOM_TEMPERATURE_K = 293.0
CROSSOVER_RATIO = 5.0


def spot_key(label: str) -> str:
    return label or DEFAULT_SPOT


def curve_stem(label: str, labeled: bool) -> str:
    if not labeled:
        return T1_CURVE_STEM
    return f"{T1_CURVE_STEM}_{re.sub(r'[^A-Za-z0-9_.-]+', '_', spot_key(label))}"


def rates_figure(predictions: Sequence[T1Prediction], series: Optional[TemperatureSeries], title: str):
    """Ω(T) and γ(T): model lines plus measured points when a series is given."""
    temperatures = np.array([p.temperature for p in predictions])
    curves: List[PlotSeries] = []
    if series is not None:
        measured_t = np.asarray(series.column("temperature"))
        curves.append(PlotSeries(label="Ω data", x=measured_t, y=np.asarray(series.column("omega")),
                                 yerr=np.asarray(series.column("sigma_omega"))))
        curves.append(PlotSeries(label="γ data", x=measured_t, y=np.asarray(series.column("gamma")),
                                 yerr=np.asarray(series.column("sigma_gamma"))))
    curves.append(PlotSeries(label="Ω model", x=temperatures, y=np.array([p.omega for p in predictions]),
                             kind="line"))
    curves.append(PlotSeries(label="γ model", x=temperatures, y=np.array([p.gamma for p in predictions]),
                             kind="line"))
    style = PlotStyle(title=title, x_label="temperature", x_unit="K", y_label="relaxation rate", y_unit="kHz")
    return curves, style


def coupling_summary(coupling: CouplingSet, t_low: float, t_high: float) -> dict:
    """Coupling set plus the derived quantities reported for each spot."""
    omega_ref = float(rate_model(RateKind.OMEGA, coupling, REFERENCE_TEMPERATURE_K))
    gamma_ref = float(rate_model(RateKind.GAMMA, coupling, REFERENCE_TEMPERATURE_K))
    try:
        crossover = crossover_temperature(coupling, CROSSOVER_RATIO, t_low, t_high)
    except ThermoError:
        crossover = None
    return {
        "coupling": coupling.model_dump(),
        "ratio_gamma_omega_400K": gamma_ref / omega_ref if omega_ref > 0 else None,
        "crossover_ratio_5_K": crossover,
        "omega_mode_contributions_293K_khz": mode_contributions(RateKind.OMEGA, coupling, ROOM_TEMPERATURE_K),
        "gamma_mode_contributions_293K_khz": mode_contributions(RateKind.GAMMA, coupling, ROOM_TEMPERATURE_K),
    }


@click.command(name="fit-temp")
@common_options
@click.option("--series", "series_path", type=click.Path(path_type=str), default=None,
              help="Temperature series CSV")
@click.option("--pdos", "pdos_path", type=click.Path(path_type=str), default=None,
              help="Phonon density of states CSV (energy_meV,density)")
@click.option("--mode-count", type=int, default=None, help="Number of PDOS peaks used as phonon modes")
@handle_errors
def fit_temp(config_path, seed, out_dir, table_format, series_path, pdos_path, mode_count):
    """Fit Ω(T) and γ(T) with two-phonon models on PDOS peak energies"""
    config, directory, digest = load_run_config(
        config_path,
        seed,
        out_dir,
        table_format,
        {"inputs.series": series_path, "inputs.pdos": pdos_path, "mode_count": mode_count},
    )
    spots = read_series_csv(require_input(config.inputs.series, "--series"))
    energies, density = read_pdos_csv(require_input(config.inputs.pdos, "--pdos"))
    grid = config.temperature_grid.temperatures()
    labeled = any(spot.spot_label for spot in spots)

    record = new_record("fit-temp", config, digest)
    rows = []
    try:
        with OutputStager(directory) as stager:
            modes = pdos_peaks(energies, density, count=config.mode_count)
            record.derived = {"modes_meV": [mode.energy for mode in modes], "spots": {}}
            for spot in spots:
                key = spot_key(spot.spot_label)
                coupling, (omega_fit, gamma_fit) = fit_temperature_series(spot, modes)
                add_fit(record, f"{key}/omega", omega_fit)
                add_fit(record, f"{key}/gamma", gamma_fit)
                record.derived["spots"][key] = coupling_summary(coupling, grid[0], grid[-1])

                predictions = predict_t1_curve(coupling, grid)
                stem = curve_stem(spot.spot_label, labeled)
                write_table(t1_curve_frame(predictions), stager.path_for(table_file_name(stem, config.format)),
                            config.format)
                emit_plot_svg(*rates_figure(predictions, spot, f"Relaxation rates ({key})"),
                              stager.path_for(f"{stem}.svg"))
                rows.extend(
                    [key, f"A{i + 1}/B{i + 1} @ {mode.energy:.2f} meV", a, b]
                    for i, (mode, a, b) in enumerate(zip(modes, coupling.a_coeffs, coupling.b_coeffs))
                )
                rows.append([key, "A_S/B_S", coupling.a_offset, coupling.b_offset])
            record.outputs = [path.name for path in stager.targets]
            path = stage_result_record(stager, record)
    except FitError as e:
        fail_record(record, directory, e)
        raise

    click.echo(f"Phonon modes (meV): {', '.join(f'{m:.2f}' for m in record.derived['modes_meV'])}")
    print_table(rows, headers=["Spot", "Coefficient", "Ω (kHz)", "γ (kHz)"])
    echo_outputs([directory / name for name in record.outputs] + [path])
