"""Read and validate *.cfg run configurations (JSON documents)."""

import json
import logging
from pathlib import Path
from typing import Any, Dict, Optional, Union

from pydantic import ValidationError

from ..errors import ConfigError
from ..models.config import ExperimentConfig

logger = logging.getLogger(__name__)


def _key_path(location) -> str:
    return ".".join(str(part) for part in location)


def config_error_from_validation(exc: ValidationError) -> ConfigError:
    """First pydantic error, as a ConfigError naming its dotted key path."""
    details = exc.errors()
    first = details[0]
    message = first.get("msg", "invalid value")
    if len(details) > 1:
        message += f" (and {len(details) - 1} more)"
    return ConfigError(message, key_path=_key_path(first.get("loc", ())) or "<root>")


def validate_config(data: Dict[str, Any], seed: Optional[int] = None) -> ExperimentConfig:
    """
    Validate a parsed configuration mapping.

    Args:
        data: Nested mapping as read from the file
        seed: Overrides the configured seed (the --seed flag)

    Raises:
        ConfigError: unknown key, missing key, or value out of range
    """
    if not isinstance(data, dict):
        raise ConfigError("configuration must be a JSON object", key_path="<root>")
    if seed is not None:
        data = {**data, "seed": seed}
    try:
        return ExperimentConfig.model_validate(data)
    except ValidationError as exc:
        raise config_error_from_validation(exc) from exc


def parse_config(path: Union[str, Path], seed: Optional[int] = None) -> ExperimentConfig:
    """
    Load a run configuration with defaults filled in.

    Raises:
        ConfigError: unreadable file, malformed JSON, or invalid contents
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc.strerror or exc}", key_path=str(path)) from exc

    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}",
                          key_path=str(path)) from exc

    config = validate_config(data, seed)
    logger.info("[Config] Loaded %s (molecule=%s, seed=%d)", path.name, config.molecule, config.seed)
    return config
