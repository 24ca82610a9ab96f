"""Main CLI entry point for hbn-relax."""

import click

from .. import __version__
from .commands.collect_series import collect_series
from .commands.config import config
from .commands.fit_decay import fit_decay
from .commands.fit_odmr import fit_odmr
from .commands.fit_temp import fit_temp
from .commands.predict_t1 import predict_t1
from .commands.simulate import simulate
from .helpers import configure_logging


@click.group()
@click.option("--verbose", "-v", count=True, help="Log progress (-v) or debug detail (-vv)")
@click.version_option(__version__, prog_name="hbn-relax")
def cli(verbose):
    """hbn-relax - Spin relaxation analysis of boron-vacancy ensembles"""
    configure_logging(verbose)


# Register commands
cli.add_command(simulate)
cli.add_command(fit_decay)
cli.add_command(collect_series)
cli.add_command(fit_odmr)
cli.add_command(fit_temp)
cli.add_command(predict_t1)
cli.add_command(config)


if __name__ == '__main__':
    cli()
