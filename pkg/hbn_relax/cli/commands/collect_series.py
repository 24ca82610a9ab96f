"""Collect-series command for hbn-relax."""

from pathlib import Path

import click

from ...core.constants import SERIES_STEM
from ...services.table_service import (
    OutputStager,
    merge_series,
    read_series_csv,
    series_frame,
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
from .fit_temp import spot_key


@click.command(name="collect-series")
@common_options
@click.argument("rows", nargs=-1, required=True, type=click.Path(exists=True, dir_okay=False, path_type=Path))
@handle_errors
def collect_series(config_path, seed, out_dir, table_format, rows):
    """Merge fit-decay rate rows (CSV) into one temperature series for fit-temp

    Rows from the same spot label are sorted by temperature; a spot with
    two rows at one temperature is rejected.
    """
    config, directory, digest = load_run_config(
        config_path, seed, out_dir, table_format, extra_inputs=[("row", path) for path in rows]
    )
    spots = merge_series(spot for path in rows for spot in read_series_csv(path))

    record = new_record("collect-series", config, digest)
    with OutputStager(directory) as stager:
        record.derived = {
            "spots": {spot_key(spot.spot_label): spot.column("temperature") for spot in spots},
            "rows": len(rows),
        }
        write_table(series_frame(spots), stager.path_for(table_file_name(SERIES_STEM, config.format)), config.format)
        record.outputs = [path.name for path in stager.targets]
        path = stage_result_record(stager, record)

    print_table(
        [[spot_key(s.spot_label), len(s.points), s.points[0].temperature, s.points[-1].temperature] for s in spots],
        headers=["Spot", "Points", "T min (K)", "T max (K)"],
    )
    echo_outputs([directory / name for name in record.outputs] + [path])
