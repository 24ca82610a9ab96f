"""Configuration management utilities."""

import hashlib
import json
import logging
from pathlib import Path
from typing import Any, Dict, Iterable, Mapping, Optional, Tuple

from pydantic import ValidationError

from ..models.config import RunConfig
from ..services.exceptions import ConfigError, OutputError

logger = logging.getLogger(__name__)


def _format_validation_error(error: ValidationError) -> str:
    parts = []
    for item in error.errors():
        location = ".".join(str(p) for p in item["loc"]) or "config"
        parts.append(f"{location}: {item['msg']}")
    return "; ".join(parts)


class ConfigManager:
    """Builds the effective RunConfig for one command invocation.

    Model defaults are overridden by the JSON config file, which is
    overridden by command-line flags given as dotted keys.
    """

    def __init__(self, config_path: Optional[Path] = None, overrides: Optional[Mapping[str, Any]] = None):
        """Initialize config manager.

        Args:
            config_path: Optional JSON config document
            overrides: Flag values keyed by dotted path, e.g. {"rates.omega": 30.0};
                None values mean the flag was not given
        """
        self.config_path = Path(config_path) if config_path is not None else None
        self.overrides = {k: v for k, v in (overrides or {}).items() if v is not None}

    def load_document(self) -> Dict[str, Any]:
        """The raw config document, {} when no file was given."""
        if self.config_path is None:
            return {}
        try:
            document = json.loads(self.config_path.read_text())
        except FileNotFoundError as e:
            raise ConfigError(f"config file not found: {self.config_path}") from e
        except json.JSONDecodeError as e:
            raise ConfigError(f"{self.config_path}, line {e.lineno}: invalid JSON ({e.msg})") from e
        if not isinstance(document, dict):
            raise ConfigError(f"{self.config_path}: config must be a JSON object")
        return document

    @staticmethod
    def merge_overrides(document: Dict[str, Any], overrides: Mapping[str, Any]) -> Dict[str, Any]:
        """Copy of document with each dotted key set to its override value."""
        merged = json.loads(json.dumps(document))
        for dotted, value in overrides.items():
            *parents, leaf = dotted.split(".")
            node = merged
            for key in parents:
                child = node.setdefault(key, {})
                if not isinstance(child, dict):
                    raise ConfigError(f"cannot set {dotted}: {key} is not a section")
                node = child
            node[leaf] = value
        return merged

    def load(self) -> RunConfig:
        """Validate defaults, file and flags together.

        Raises:
            ConfigError: For unknown keys, invalid values or missing input files
        """
        document = self.merge_overrides(self.load_document(), self.overrides)
        try:
            config = RunConfig.model_validate(document)
        except ValidationError as e:
            raise ConfigError(f"invalid configuration: {_format_validation_error(e)}") from e
        logger.debug(f"Effective configuration: {config.model_dump(mode='json')}")
        return config

    @staticmethod
    def prepare_out_dir(config: RunConfig) -> Path:
        """Create the output directory before any computation.

        Raises:
            OutputError: If it cannot be created or is not a directory
        """
        out_dir = Path(config.out_dir)
        try:
            out_dir.mkdir(parents=True, exist_ok=True)
        except OSError as e:
            raise OutputError(f"cannot create output directory {out_dir}: {e}") from e
        if not out_dir.is_dir():
            raise OutputError(f"output path is not a directory: {out_dir}")
        return out_dir

    @staticmethod
    def input_digest(config: RunConfig, extra_inputs: Iterable[Tuple[str, Path]] = ()) -> str:
        """SHA-256 over every input file's bytes and the canonical config.

        Output location and format are left out; they do not change results.
        extra_inputs are (role, path) pairs for inputs given outside the config.
        """
        digest = hashlib.sha256()
        canonical = config.model_dump(mode="json", exclude={"out_dir", "format", "inputs"})
        digest.update(json.dumps(canonical, sort_keys=True, separators=(",", ":")).encode())
        for name, path in sorted(config.inputs.model_dump().items()):
            if path is None:
                continue
            digest.update(name.encode())
            digest.update(Path(path).read_bytes())
        for role, path in extra_inputs:
            digest.update(role.encode())
            digest.update(Path(path).read_bytes())
        return f"sha256:{digest.hexdigest()}"

    @staticmethod
    def write_template(path: Path) -> Path:
        """Write a complete default config document."""
        path = Path(path)
        template = RunConfig().model_dump(mode="json")
        try:
            path.write_text(json.dumps(template, indent=2) + "\n")
        except OSError as e:
            raise OutputError(f"cannot write config template {path}: {e}") from e
        return path
