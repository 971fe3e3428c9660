"""
Run configuration: defaults, the user config file, and validation.
"""

import logging
from pathlib import Path
from typing import Any, Dict, Optional

import yaml
from appdirs import user_config_dir

from exotic_cli.exceptions import DomainError
from exotic_cli.lib import dict_merge
from exotic_cli.typing import RunConfig

_logger = logging.getLogger(__name__)

CONFIG_FILE = "config.yaml"

MAX_DIGITS = 30

DEFAULTS: RunConfig = {
    "tol": 1e-8,
    "seed": 7,
    "mzv_table": None,
    "output_format": "pretty",
    "workers": 1,
    "digits": 15,
}


def get_config_path() -> Path:
    """
    Return the system-dependent location of the config file.
    """
    config_dir = Path(user_config_dir("exotic-cli", "exotic-cli"))
    return config_dir / CONFIG_FILE


def load_config(
    overrides: Optional[Dict[str, Any]] = None,
    config_path: Optional[Path] = None,
) -> RunConfig:
    """
    Build a run config from the defaults, the user file, and CLI overrides.

    Overrides set to ``None`` are ignored, so unset CLI flags fall through to
    the file or the defaults.
    """
    config: Dict[str, Any] = dict(DEFAULTS)

    config_path = config_path or get_config_path()
    if config_path.exists():
        _logger.debug("Reading config from %s", config_path)
        with open(config_path, encoding="utf-8") as input_:
            contents = yaml.load(input_, Loader=yaml.SafeLoader) or {}
        dict_merge(config, contents)

    if overrides:
        dict_merge(
            config,
            {key: value for key, value in overrides.items() if value is not None},
        )

    validate_config(config)  # type: ignore
    return config  # type: ignore


def validate_config(config: RunConfig) -> None:
    """
    Check that tolerances, worker counts and precision are in range.
    """
    if config.get("tol", 1.0) <= 0:
        raise DomainError(f"Tolerance must be positive, got {config['tol']}")
    if config.get("workers", 1) < 1:
        raise DomainError(f"Worker count must be at least 1, got {config['workers']}")
    if not 1 <= config.get("digits", 15) <= MAX_DIGITS:
        raise DomainError(
            f"Digits must be between 1 and {MAX_DIGITS}, got {config['digits']}",
        )
    if config.get("output_format", "pretty") not in {"pretty", "json"}:
        raise DomainError(f"Unknown output format: {config['output_format']}")
