"""Configuration commands for hbn-relax."""

import json
from pathlib import Path

import click

from ...core.constants import CONFIG_TEMPLATE_FILE
from ...utils.config_manager import ConfigManager
from ..helpers import handle_errors


@click.group()
def config():
    """Write or inspect run configurations"""
    pass


@config.command()
@click.argument("path", type=click.Path(path_type=Path), default=CONFIG_TEMPLATE_FILE)
@handle_errors
def template(path):
    """Write a complete default configuration to PATH"""
    ConfigManager.write_template(path)
    click.echo(f"Wrote {path}")


@config.command()
@click.option("--config", "config_path", type=click.Path(path_type=Path), default=None,
              help="JSON run configuration")
@click.option("--seed", type=int, default=None, help="64-bit random seed")
@handle_errors
def show(config_path, seed):
    """Print the effective configuration after defaults and overrides"""
    effective = ConfigManager(config_path, {"seed": seed}).load()
    click.echo(json.dumps(effective.model_dump(mode="json"), indent=2))
