"""Utilities for hbn-relax."""

from .config_manager import ConfigManager
from .seeding import spawn_seeds

__all__ = ["ConfigManager", "spawn_seeds"]
