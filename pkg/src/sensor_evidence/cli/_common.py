"""Helpers shared by the subcommands."""

import sys
from pathlib import Path
from typing import Optional

from ..common.config import ProjectConfig
from ..common.config_file import discover_config, load_config
from ..common.errors import ConfigError
from ..common.log import LogCallback, console_log, null_log, safe_str

PREFIX = "[sensor-evidence]"

EXIT_OK = 0
EXIT_FAILED_VERIFICATION = 1
EXIT_USAGE = 2


def fail(msg: str) -> int:
    """Print a one-line diagnostic to stderr and return the usage exit status."""
    print(f"{PREFIX} {safe_str(msg)}", file=sys.stderr)
    return EXIT_USAGE


def add_common_flags(parser, config: bool = True) -> None:
    if config:
        parser.add_argument(
            "--config",
            type=Path,
            default=None,
            help="sensor-evidence.toml to load (default: ./sensor-evidence.toml if present)",
        )
    parser.add_argument(
        "--quiet", "-q",
        action="store_true",
        help="Suppress progress output",
    )


def project_config(args) -> ProjectConfig:
    """File values, or defaults when no config file is given or found."""
    path: Optional[Path] = getattr(args, "config", None)
    if path is not None:
        try:
            return load_config(path)
        except FileNotFoundError as e:
            raise ConfigError(str(e))
    return discover_config() or ProjectConfig()


def logger(args) -> LogCallback:
    return null_log if getattr(args, "quiet", False) else console_log


def pick(flag, fallback):
    """CLI flag if given, else the config-file/default value."""
    return fallback if flag is None else flag
