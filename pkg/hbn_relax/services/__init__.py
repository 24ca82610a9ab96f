"""File-facing services: tables, figures and the exception hierarchy."""

from .exceptions import (
    ConfigError,
    FitError,
    OutputError,
    SchemaError,
    ToolkitError,
)

__all__ = [
    "ConfigError",
    "FitError",
    "OutputError",
    "SchemaError",
    "ToolkitError",
]
