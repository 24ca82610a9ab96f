"""Predict-t1 command for hbn-relax."""

from typing import Optional

import click

from ...core.constants import T1_PREDICTION_STEM
from ...core.phonons import predict_t1_curve
from ...models.config import RunConfig
from ...models.phonon import CouplingSet
from ...services.exceptions import ConfigError, SchemaError
from ...services.plot_service import emit_plot_svg
from ...services.table_service import (
    OutputStager,
    read_record,
    t1_curve_frame,
    table_file_name,
    write_table,
)
from ..helpers import (
    common_options,
    echo_outputs,
    handle_errors,
    load_run_config,
    new_record,
    print_table,
    stage_result_record,
)
from .fit_temp import DEFAULT_SPOT, coupling_summary, rates_figure


def resolve_coupling(config: RunConfig, spot: Optional[str]) -> CouplingSet:
    """Coupling set from a fit-temp record, or the inline `coupling` section.

    Raises:
        ConfigError: If neither source is given
        SchemaError: If the record holds no coupling for the spot
    """
    if config.inputs.record is None:
        if config.coupling is None:
            raise ConfigError("no coupling set: pass --record or set 'coupling' in the config")
        return config.coupling

    path = config.inputs.record
    record = read_record(path)
    spots = record.derived.get("spots", {}) if record.command == "fit-temp" else {}
    if not spots:
        raise SchemaError("record holds no fitted coupling sets", str(path))
    key = spot or (DEFAULT_SPOT if DEFAULT_SPOT in spots else next(iter(spots)))
    if key not in spots:
        raise SchemaError(f"no spot '{key}' in record (available: {', '.join(spots)})", str(path))
    return CouplingSet.model_validate(spots[key]["coupling"])


@click.command(name="predict-t1")
@common_options
@click.option("--record", "record_path_option", type=click.Path(path_type=str), default=None,
              help="fit-temp result record holding the coupling set")
@click.option("--spot", default=None, help="Spot label inside the record")
@click.option("--t-start", type=float, default=None, help="First temperature in K")
@click.option("--t-stop", type=float, default=None, help="Last temperature in K")
@click.option("--t-step", type=float, default=None, help="Temperature step in K")
@handle_errors
def predict_t1(config_path, seed, out_dir, table_format, record_path_option, spot, t_start, t_stop, t_step):
    """Predict Ω(T), γ(T) and T1(T) from a coupling set"""
    config, directory, digest = load_run_config(
        config_path,
        seed,
        out_dir,
        table_format,
        {
            "inputs.record": record_path_option,
            "temperature_grid.start": t_start,
            "temperature_grid.stop": t_stop,
            "temperature_grid.step": t_step,
        },
    )
    coupling = resolve_coupling(config, spot)
    grid = config.temperature_grid.temperatures()
    predictions = predict_t1_curve(coupling, grid)

    record = new_record("predict-t1", config, digest)
    with OutputStager(directory) as stager:
        record.derived = coupling_summary(coupling, grid[0], grid[-1])
        write_table(
            t1_curve_frame(predictions),
            stager.path_for(table_file_name(T1_PREDICTION_STEM, config.format)),
            config.format,
        )
        emit_plot_svg(*rates_figure(predictions, None, "Predicted relaxation rates"),
                      stager.path_for(f"{T1_PREDICTION_STEM}.svg"))
        record.outputs = [path.name for path in stager.targets]
        path = stage_result_record(stager, record)

    shown = predictions if len(predictions) <= 15 else predictions[:: max(len(predictions) // 10, 1)]
    print_table(
        [[p.temperature, p.omega, p.gamma, p.t1_us if p.t1_us is not None else "inf"] for p in shown],
        headers=["T (K)", "Ω (kHz)", "γ (kHz)", "T1 (µs)"],
    )
    echo_outputs([directory / name for name in record.outputs] + [path])
