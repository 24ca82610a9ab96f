"""Simulate command for hbn-relax."""

import click

from ...core.constants import F1_STEM, F2_STEM, ODMR_STEM
from ...core.kinetics import relaxation_summary
from ...core.odmr import synth_odmr_spectrum
from ...core.sequencer import synth_dataset
from ...models.sequence import CurveKind
from ...services.table_service import (
    OutputStager,
    decay_frame,
    spectrum_frame,
    table_file_name,
    write_table,
)
from ...utils.seeding import spawn_seeds
from ..helpers import (
    common_options,
    echo_outputs,
    handle_errors,
    load_run_config,
    new_record,
    print_table,
    stage_result_record,
)


@click.command()
@common_options
@click.option("--omega", type=float, default=None, help="Single-quantum rate Ω in kHz")
@click.option("--gamma", type=float, default=None, help="Double-quantum rate γ in kHz")
@click.option("--shots", type=int, default=None, help="Readout repetitions per delay")
@click.option("--tau-points", type=int, default=None, help="Number of delays from 0 to --tau-max")
@click.option("--tau-max", type=float, default=None, help="Longest delay in µs")
@click.option("--odmr", is_flag=True, default=False, help="Also write a synthetic ODMR spectrum")
@handle_errors
def simulate(config_path, seed, out_dir, table_format, omega, gamma, shots, tau_points, tau_max, odmr):
    """Write synthetic F1/F2 relaxometry curves with Poisson shot noise"""
    config, directory, digest = load_run_config(
        config_path,
        seed,
        out_dir,
        table_format,
        {
            "rates.omega": omega,
            "rates.gamma": gamma,
            "readout.shots": shots,
            "grid.tau_points": tau_points,
            "grid.tau_max_us": tau_max,
        },
    )
    rates = config.rates.to_rate_pair()
    readout = config.readout.to_readout_model()
    taus = config.grid.taus()
    seeds = spawn_seeds(config.seed, [F1_STEM, F2_STEM, ODMR_STEM])

    record = new_record("simulate", config, digest)
    with OutputStager(directory) as stager:
        for stem, kind in ((F1_STEM, CurveKind.F1), (F2_STEM, CurveKind.F2)):
            dataset = synth_dataset(
                kind,
                rates,
                readout,
                taus,
                seeds[stem],
                pi_fidelity=config.readout.pi_fidelity,
                temperature=config.temperature_k,
            )
            write_table(decay_frame(dataset), stager.path_for(table_file_name(stem, config.format)), config.format)
        if odmr:
            freqs, contrast = synth_odmr_spectrum(
                config.odmr.params(), config.odmr.freqs(), config.odmr.noise_sigma, seeds[ODMR_STEM]
            )
            write_table(
                spectrum_frame(freqs, contrast),
                stager.path_for(table_file_name(ODMR_STEM, config.format)),
                config.format,
            )

        summary = relaxation_summary(rates)
        record.derived = {"rates": rates.model_dump(), "summary": summary.model_dump(), "tau_us": taus}
        record.outputs = [path.name for path in stager.targets]
        path = stage_result_record(stager, record)

    print_table(
        [
            ["F1 decay rate 3Ω (kHz)", summary.f1_rate_khz],
            ["F2 decay rate Ω+2γ (kHz)", summary.f2_rate_khz],
            ["T1 (µs)", summary.t1_us if summary.t1_us is not None else "inf"],
        ],
        headers=["Quantity", "Value"],
    )
    echo_outputs([directory / name for name in record.outputs] + [path])
