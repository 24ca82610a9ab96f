"""Fit-decay command for hbn-relax."""

import math
from typing import Optional

import click
import numpy as np
import pandas as pd

from ...core.constants import DECAY_PLOT_COLUMNS, F1_FIT_STEM, F2_FIT_STEM, RATES_ROW_STEM
from ...core.decay_fit import extract_rates, fit_rates_joint, fit_single_exponential
from ...core.fit_models import exponential_model
from ...core.kinetics import relaxation_summary
from ...models.fit import FitResult
from ...models.kinetics import RateEstimate
from ...models.phonon import TemperaturePoint, TemperatureSeries
from ...models.sequence import CurveKind, DecayDataset
from ...services.exceptions import FitError
from ...services.plot_service import PlotSeries, PlotStyle, emit_plot_svg
from ...services.table_service import OutputStager, read_decay_csv, series_frame, table_file_name, write_table
from ..helpers import (
    add_fit,
    common_options,
    echo_outputs,
    fail_record,
    fit_rows,
    handle_errors,
    load_run_config,
    new_record,
    print_table,
    require_input,
    stage_result_record,
)


def decay_plot_frame(dataset: DecayDataset, result: FitResult) -> pd.DataFrame:
    """τ, data, sigma and fitted model at each measured delay."""
    fit = exponential_model().eval(result.params, dataset.taus)
    return pd.DataFrame(
        np.column_stack([dataset.taus, dataset.signals, dataset.sigmas, fit]), columns=DECAY_PLOT_COLUMNS
    )


def decay_figure(dataset: DecayDataset, result: FitResult) -> tuple:
    dense = np.linspace(dataset.taus[0], dataset.taus[-1], 200)
    series = [
        PlotSeries(label=f"{dataset.curve_kind.value} data", x=dataset.taus, y=dataset.signals, yerr=dataset.sigmas),
        PlotSeries(label="single-exponential fit", x=dense, y=exponential_model().eval(result.params, dense),
                   kind="line"),
    ]
    style = PlotStyle(
        title=f"{dataset.curve_kind.value} relaxation",
        x_label="delay τ",
        x_unit="µs",
        y_label="normalized contrast",
        y_unit="arb. units",
    )
    return series, style


def rate_row(estimate: RateEstimate, temperature: float, spot_label: str) -> Optional[TemperatureSeries]:
    """The fitted rates as a one-point temperature series, ready for fit-temp.

    None when either stderr is zero or not finite.
    """
    if not all(0.0 < error < math.inf for error in (estimate.sigma_omega, estimate.sigma_gamma)):
        return None
    point = TemperaturePoint(
        temperature=temperature,
        omega=estimate.rates.omega,
        sigma_omega=estimate.sigma_omega,
        gamma=estimate.rates.gamma,
        sigma_gamma=estimate.sigma_gamma,
    )
    return TemperatureSeries(points=[point], spot_label=spot_label)


@click.command(name="fit-decay")
@common_options
@click.option("--f1", "f1_path", type=click.Path(path_type=str), default=None, help="F1 curve CSV")
@click.option("--f2", "f2_path", type=click.Path(path_type=str), default=None, help="F2 curve CSV")
@click.option("--joint/--independent", default=None, help="Fit both curves at once with a shared Ω")
@click.option("--temperature", type=float, default=None, help="Sample temperature in K for the rate row")
@click.option("--spot-label", type=str, default=None, help="Spot label for the rate row")
@handle_errors
def fit_decay(config_path, seed, out_dir, table_format, f1_path, f2_path, joint, temperature, spot_label):
    """Fit F1/F2 decay curves and extract the relaxation rates Ω and γ"""
    config, directory, digest = load_run_config(
        config_path,
        seed,
        out_dir,
        table_format,
        {
            "inputs.f1": f1_path,
            "inputs.f2": f2_path,
            "joint": joint,
            "temperature_k": temperature,
            "spot_label": spot_label,
        },
    )
    f1 = read_decay_csv(require_input(config.inputs.f1, "--f1"), CurveKind.F1, temperature=config.temperature_k)
    f2 = read_decay_csv(require_input(config.inputs.f2, "--f2"), CurveKind.F2, temperature=config.temperature_k)

    record = new_record("fit-decay", config, digest)
    try:
        with OutputStager(directory) as stager:
            f1_fit = fit_single_exponential(f1)
            f2_fit = fit_single_exponential(f2)
            add_fit(record, "f1", f1_fit)
            add_fit(record, "f2", f2_fit)
            if config.joint:
                estimate, joint_fit = fit_rates_joint(f1, f2)
                add_fit(record, "joint", joint_fit)
            else:
                estimate = extract_rates(f1_fit, f2_fit)
            if not estimate.consistent:
                record.diagnostics.append(
                    f"F2 decay is slower than Ω by 3σ or more; γ clipped to 0 (raw γ = {estimate.raw_gamma:.6g} kHz)"
                )

            summary = relaxation_summary(estimate.rates)
            record.derived = {
                "omega_khz": estimate.rates.omega,
                "sigma_omega_khz": estimate.sigma_omega,
                "gamma_khz": estimate.rates.gamma,
                "sigma_gamma_khz": estimate.sigma_gamma,
                "raw_gamma_khz": estimate.raw_gamma,
                "consistent": estimate.consistent,
                "method": "joint" if config.joint else "independent",
                "t1_us": summary.t1_us,
            }
            if config.temperature_k is not None:
                record.derived["temperature_k"] = config.temperature_k
                record.derived["spot_label"] = config.spot_label

            for stem, dataset, result in ((F1_FIT_STEM, f1, f1_fit), (F2_FIT_STEM, f2, f2_fit)):
                write_table(
                    decay_plot_frame(dataset, result),
                    stager.path_for(table_file_name(stem, config.format)),
                    config.format,
                )
                emit_plot_svg(*decay_figure(dataset, result), stager.path_for(f"{stem}.svg"))
            if config.temperature_k is not None:
                row = rate_row(estimate, config.temperature_k, config.spot_label)
                if row is None:
                    record.diagnostics.append("rate row skipped: Ω or γ has no finite positive stderr")
                else:
                    write_table(
                        series_frame([row]),
                        stager.path_for(table_file_name(RATES_ROW_STEM, config.format)),
                        config.format,
                    )
            record.outputs = [path.name for path in stager.targets]
            path = stage_result_record(stager, record)
    except FitError as e:
        fail_record(record, directory, e)
        raise

    print_table(fit_rows(f1_fit, "F1 ") + fit_rows(f2_fit, "F2 "), headers=["Parameter", "Value", "Stderr"])
    click.echo()
    print_table(
        [
            ["Ω (kHz)", estimate.rates.omega, estimate.sigma_omega],
            ["γ (kHz)", estimate.rates.gamma, estimate.sigma_gamma],
            ["T1 (µs)", summary.t1_us if summary.t1_us is not None else "inf", ""],
        ],
        headers=["Rate", "Value", "Stderr"],
    )
    echo_outputs([directory / name for name in record.outputs] + [path])
