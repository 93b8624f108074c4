"""
Utility functions for liemorse.

Includes configuration loading, degree-range notation, and file path helpers.
"""

import logging
from pathlib import Path
from typing import Any, cast

import yaml

logger = logging.getLogger(__name__)

# Default config locations (in order of precedence)
CONFIG_LOCATIONS = [
    Path.home() / ".liemorse" / "settings.yaml",
    Path(__file__).parent.parent.parent / "config" / "settings.yaml",
]

DEFAULT_COMPLEX_CONFIG = {
    "max_wedges": 2**24,
    "progress": False,
}

DEFAULT_VERIFY_CONFIG = {
    "tables_max_n": 5,
    "probe_max_n": 5,
    "uct_max_n": 5,
}


def load_config(config_path: str | Path | None = None) -> dict[str, Any]:
    """
    Load configuration from YAML file.

    Searches for config in:
    1. Provided path
    2. ~/.liemorse/settings.yaml
    3. Package config/settings.yaml

    Args:
        config_path: Optional explicit path to config file

    Returns:
        Configuration dictionary

    Example:
        >>> config = load_config()
        >>> config["complex"]["max_wedges"]
        16777216
    """
    if config_path:
        paths = [Path(config_path)]
    else:
        paths = CONFIG_LOCATIONS

    for path in paths:
        if path.exists():
            logger.debug(f"Loading config from: {path}")
            with open(path) as f:
                return cast(dict[str, Any], yaml.safe_load(f) or {})

    logger.warning("No config file found, using defaults")
    return get_default_config()


def get_default_config() -> dict[str, Any]:
    """Return default configuration values."""
    return {
        "complex": dict(DEFAULT_COMPLEX_CONFIG),
        "reduction": {
            "default": "auto",
        },
        "homology": {
            "threads": None,
        },
        "output": {
            "format": "text",
        },
        "verify": dict(DEFAULT_VERIFY_CONFIG),
        "logging": {
            "level": "INFO",
        },
    }


def _section(config: dict | None, name: str, defaults: dict) -> dict:
    result = defaults.copy()
    if config:
        result.update(config.get(name) or {})
    return result


def get_complex_config(config: dict | None = None) -> dict:
    """
    Get complex-building configuration from config or defaults.

    Args:
        config: Optional configuration dict with "complex" section

    Returns:
        Complex configuration dict (max_wedges, progress)
    """
    return _section(config, "complex", DEFAULT_COMPLEX_CONFIG)


def get_verify_config(config: dict | None = None) -> dict:
    """Get the verify-suite size limits from config or defaults."""
    return _section(config, "verify", DEFAULT_VERIFY_CONFIG)


def expand_degrees(s: str) -> list[int]:
    """
    Expand compressed degree notation to a sorted list of integers.

    Handles:
    - Single numbers: "3" -> [3]
    - Ranges with colon: "2:5" -> [2, 3, 4, 5]
    - Comma-separated: "1,3,5" -> [1, 3, 5]
    - Mixed: "2:4,7" -> [2, 3, 4, 7]

    Args:
        s: Compressed degree string

    Returns:
        Sorted list of distinct degrees

    Raises:
        ValueError: On a malformed part or a negative degree

    Example:
        >>> expand_degrees("2:4,7")
        [2, 3, 4, 7]
    """
    if not s or not s.strip():
        return []

    result: set[int] = set()
    for part in s.strip().split(","):
        part = part.strip()
        if not part:
            continue

        try:
            if ":" in part:
                start, end = part.split(":")
                result.update(range(int(start), int(end) + 1))
            else:
                result.add(int(part))
        except ValueError as e:
            raise ValueError(f"Invalid degree range '{part}': {e}") from e

    if any(k < 0 for k in result):
        raise ValueError(f"Degrees must be non-negative: '{s}'")
    return sorted(result)


def group_degrees(degrees: list[int]) -> str:
    """
    Compress a list of degrees to range notation.

    Inverse of expand_degrees.

    Example:
        >>> group_degrees([2, 3, 4, 7])
        '2:4,7'
    """
    if not degrees:
        return ""

    sorted_degrees = sorted(set(degrees))
    result = []
    range_start = range_end = sorted_degrees[0]

    for k in sorted_degrees[1:]:
        if k == range_end + 1:
            range_end = k
            continue
        result.append(str(range_start) if range_start == range_end else f"{range_start}:{range_end}")
        range_start = range_end = k

    result.append(str(range_start) if range_start == range_end else f"{range_start}:{range_end}")
    return ",".join(result)


def resolve_path(path: str | Path) -> Path:
    """
    Resolve path with home directory expansion.

    Example:
        >>> resolve_path("~/posets")
        PosixPath('/Users/username/posets')
    """
    return Path(path).expanduser().resolve()


def ensure_parent(path: str | Path) -> Path:
    """Resolve an output path and create its parent directory."""
    file_path = resolve_path(path)
    file_path.parent.mkdir(parents=True, exist_ok=True)
    return file_path


def setup_logging(level: str = "INFO", log_file: str | None = None) -> None:
    """
    Configure logging for the package.

    Args:
        level: Log level (DEBUG, INFO, WARNING, ERROR)
        log_file: Optional file path for log output

    Example:
        >>> setup_logging(level="DEBUG", log_file="~/.liemorse/liemorse.log")
    """
    log_format = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
    log_level = getattr(logging, level.upper(), logging.INFO)

    handlers: list[logging.Handler] = [logging.StreamHandler()]

    if log_file:
        handlers.append(logging.FileHandler(ensure_parent(log_file)))

    logging.basicConfig(level=log_level, format=log_format, handlers=handlers)


__all__ = [
    "CONFIG_LOCATIONS",
    "ensure_parent",
    "expand_degrees",
    "get_complex_config",
    "get_default_config",
    "get_verify_config",
    "group_degrees",
    "load_config",
    "resolve_path",
    "setup_logging",
]
