"""Fit-odmr command for hbn-relax."""

import click
import numpy as np
import pandas as pd

from ...core.constants import ODMR_FIT_STEM, ODMR_PLOT_COLUMNS
from ...core.fit_models import two_lorentzian_model
from ...core.odmr import fit_two_lorentzian
from ...services.exceptions import FitError
from ...services.plot_service import PlotSeries, PlotStyle, emit_plot_svg
from ...services.table_service import OutputStager, read_spectrum_csv, table_file_name, write_table
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


@click.command(name="fit-odmr")
@common_options
@click.option("--spectrum", "spectrum_path", type=click.Path(path_type=str), default=None,
              help="ODMR spectrum CSV (freq_MHz,contrast)")
@handle_errors
def fit_odmr(config_path, seed, out_dir, table_format, spectrum_path):
    """Fit two Lorentzian dips and report ν1, ν2, ν0 = D and E"""
    config, directory, digest = load_run_config(
        config_path, seed, out_dir, table_format, {"inputs.spectrum": spectrum_path}
    )
    freqs, contrast = read_spectrum_csv(require_input(config.inputs.spectrum, "--spectrum"))

    record = new_record("fit-odmr", config, digest)
    try:
        with OutputStager(directory) as stager:
            odmr = fit_two_lorentzian(freqs, contrast)
            add_fit(record, "odmr", odmr.fit)
            record.derived = {
                "nu1_mhz": odmr.nu1,
                "sigma_nu1_mhz": odmr.sigma_nu1,
                "nu2_mhz": odmr.nu2,
                "sigma_nu2_mhz": odmr.sigma_nu2,
                "nu0_mhz": odmr.nu0,
                "sigma_nu0_mhz": odmr.sigma_nu0,
                "width1_mhz": odmr.width1,
                "width2_mhz": odmr.width2,
                "d_mhz": odmr.zero_field_splitting,
                "e_mhz": odmr.splitting_e,
                "sigma_e_mhz": odmr.sigma_e,
            }

            order = np.argsort(freqs, kind="stable")
            f, c = freqs[order], contrast[order]
            model = two_lorentzian_model()
            fitted = model.eval(odmr.fit.params, f)
            write_table(
                pd.DataFrame(np.column_stack([f, c, fitted]), columns=ODMR_PLOT_COLUMNS),
                stager.path_for(table_file_name(ODMR_FIT_STEM, config.format)),
                config.format,
            )
            dense = np.linspace(f[0], f[-1], 500)
            emit_plot_svg(
                [
                    PlotSeries(label="ODMR data", x=f, y=c),
                    PlotSeries(label="two-Lorentzian fit", x=dense, y=model.eval(odmr.fit.params, dense),
                               kind="line"),
                ],
                PlotStyle(title="ODMR", x_label="microwave frequency", x_unit="MHz", y_label="contrast",
                          y_unit="normalized"),
                stager.path_for(f"{ODMR_FIT_STEM}.svg"),
            )
            record.outputs = [path.name for path in stager.targets]
            path = stage_result_record(stager, record)
    except FitError as e:
        fail_record(record, directory, e)
        raise

    print_table(
        [
            ["ν1 (MHz)", odmr.nu1, odmr.sigma_nu1],
            ["ν2 (MHz)", odmr.nu2, odmr.sigma_nu2],
            ["ν0 = D (MHz)", odmr.nu0, odmr.sigma_nu0],
            ["E (MHz)", odmr.splitting_e, odmr.sigma_e],
            ["width 1 (MHz)", odmr.width1, odmr.fit.error("w1")],
            ["width 2 (MHz)", odmr.width2, odmr.fit.error("w2")],
        ],
        headers=["Quantity", "Value", "Stderr"],
        floatfmt=".4f",
    )
    echo_outputs([directory / name for name in record.outputs] + [path])
