"""CLI Helper Functions for hbn-relax.

This module provides reusable helper functions for CLI commands to reduce
code duplication and standardize behavior across all commands.

The helpers provide:
- Logging setup and error reporting with exit codes
- Options shared by every command and config loading
- Result records and consistent table formatting
"""

import functools
import logging
from pathlib import Path
from typing import Any, Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import click
from pydantic import ValidationError
from rich.console import Console
from rich.logging import RichHandler
from rich.markup import escape
from tabulate import tabulate

from ... import __version__
from ...core.constants import EXIT_CONFIG, EXIT_IO, RECORD_FILE_TEMPLATE
from ...models.config import RunConfig
from ...models.fit import FitResult
from ...models.record import FitSummary, ResultRecord
from ...services.exceptions import ConfigError, ToolkitError
from ...services.table_service import OutputStager, stage_record, write_record
from ...utils.config_manager import ConfigManager

PACKAGE_LOGGER = "hbn_relax"

error_console = Console(stderr=True)


def configure_logging(verbosity: int) -> None:
    """Route package logs through rich: WARNING, INFO (-v) or DEBUG (-vv).

    Args:
        verbosity: Number of -v flags
    """
    level = logging.WARNING if verbosity <= 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logger = logging.getLogger(PACKAGE_LOGGER)
    logger.handlers.clear()
    logger.addHandler(RichHandler(console=Console(stderr=True), show_path=False, rich_tracebacks=True))
    logger.setLevel(level)
    logger.propagate = False


def report_error(message: str) -> None:
    error_console.print(f"[red]Error:[/red] {escape(message)}", highlight=False, soft_wrap=True)


def exit_code_for(error: Exception) -> int:
    """Map an exception raised by a command to its exit code.

    Returns:
        2 for configuration and schema errors, 3 for fit failures,
        4 for I/O errors
    """
    if isinstance(error, ToolkitError):
        return error.exit_code
    if isinstance(error, ValidationError):
        return EXIT_CONFIG
    if isinstance(error, OSError):
        return EXIT_IO
    raise error


def handle_errors(func: Callable) -> Callable:
    """Print toolkit errors in red and exit with their mapped code."""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except (ToolkitError, ValidationError, OSError) as e:
            report_error(str(e))
            click.get_current_context().exit(exit_code_for(e))

    return wrapper


def common_options(func: Callable) -> Callable:
    """Add --config, --seed, --out-dir and --format."""
    options = [
        click.option("--config", "config_path", type=click.Path(path_type=Path), default=None,
                     help="JSON run configuration"),
        click.option("--seed", type=int, default=None, help="64-bit random seed"),
        click.option("--out-dir", type=click.Path(path_type=Path), default=None, help="Output directory"),
        click.option("--format", "table_format", type=click.Choice(["csv", "json"]), default=None,
                     help="Format of result tables"),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def load_run_config(
    config_path: Optional[Path], seed: Optional[int], out_dir: Optional[Path], table_format: Optional[str],
    overrides: Optional[Mapping[str, Any]] = None, extra_inputs: Sequence[Tuple[str, Path]] = (),
) -> Tuple[RunConfig, Path, str]:
    """Validate the effective config and prepare the output directory.

    extra_inputs are (role, path) pairs hashed into the digest next to the
    configured inputs.

    Returns:
        Tuple of (config, out_dir, input_digest)
    """
    flags: Dict[str, Any] = {
        "seed": seed,
        "out_dir": str(out_dir) if out_dir is not None else None,
        "format": table_format,
    }
    flags.update(overrides or {})
    config = ConfigManager(config_path, flags).load()
    directory = ConfigManager.prepare_out_dir(config)
    return config, directory, ConfigManager.input_digest(config, extra_inputs)


def require_input(path: Optional[Path], flag: str) -> Path:
    """The configured input path, or a config error naming the missing flag."""
    if path is None:
        raise ConfigError(f"missing input: pass {flag} or set it under 'inputs' in the config")
    return path


def new_record(command: str, config: RunConfig, digest: str) -> ResultRecord:
    return ResultRecord(command=command, input_digest=digest, seed=config.seed, toolkit_version=__version__)


def record_path(out_dir: Path, command: str) -> Path:
    return out_dir / RECORD_FILE_TEMPLATE.format(command=command.replace("-", "_"))


def stage_result_record(stager: OutputStager, record: ResultRecord) -> Path:
    """Stage the command record last so it appears only with its outputs."""
    return stage_record(stager, record, record_path(stager.out_dir, record.command).name)


def add_fit(record: ResultRecord, key: str, result: FitResult) -> None:
    record.fits[key] = FitSummary.from_result(result)


def fail_record(record: ResultRecord, out_dir: Path, error: Exception) -> None:
    """Write the record of a failed fit with its diagnostics."""
    record.status = "failed"
    record.diagnostics.append(f"{type(error).__name__}: {error}")
    write_record(record, record_path(out_dir, record.command))


def print_table(rows: Iterable[Sequence[Any]], headers: List[str], floatfmt: str = ".6g") -> None:
    """Print rows as a simple table.

    Args:
        rows: Table rows
        headers: Column headers
        floatfmt: Format applied to float cells
    """
    click.echo(tabulate(list(rows), headers=headers, tablefmt="simple", floatfmt=floatfmt))


def fit_rows(result: FitResult, prefix: str = "") -> List[List[Any]]:
    """Parameter rows (name, value, stderr) of a fit."""
    return [[f"{prefix}{name}", value, error] for name, (value, error) in result.as_dict().items()]


def echo_outputs(paths: Iterable[Path]) -> None:
    for path in paths:
        click.echo(f"Wrote {path}")


__all__ = [
    "configure_logging",
    "report_error",
    "exit_code_for",
    "handle_errors",
    "common_options",
    "load_run_config",
    "require_input",
    "new_record",
    "record_path",
    "stage_result_record",
    "add_fit",
    "fail_record",
    "print_table",
    "fit_rows",
    "echo_outputs",
]
