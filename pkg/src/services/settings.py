"""Environment settings: an optional .env supplies the default output directory."""

import os
from pathlib import Path
from typing import Optional

from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()

OUTPUT_DIR_KEY = "KICKROTOR_OUTPUT_DIR"
FALLBACK_OUTPUT_DIR = "results"


def get_setting(key: str, default: str = "") -> str:
    """Read a setting from os.environ (populated from .env when present)."""
    return os.getenv(key, default)


def default_output_dir(explicit: Optional[str] = None) -> Path:
    """--out if given, else KICKROTOR_OUTPUT_DIR, else ./results."""
    if explicit:
        return Path(explicit)
    return Path(get_setting(OUTPUT_DIR_KEY) or FALLBACK_OUTPUT_DIR)
