"""CLI module for hbn-relax."""

from .main import cli

__all__ = ['cli']
