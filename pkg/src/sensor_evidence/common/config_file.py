"""Load ProjectConfig from TOML files.

Config file: sensor-evidence.toml

Example:
    [chain]
    a = 3
    s = 100

    [anchor]
    batch_size = 16

    [simulate]
    n = 10000
    preset = "a-effect"     # or explicit s_values / a_values
    p_grid = [0.0, 0.05, 0.1]
    trials = 20
    seed = 7
"""

import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

# Use built-in tomllib (Python 3.11+) or tomli fallback
if sys.version_info >= (3, 11):
    import tomllib
else:
    try:
        import tomli as tomllib
    except ImportError:
        tomllib = None  # type: ignore

from .config import AnchorConfig, ChainConfig, GRID_PRESETS, ProjectConfig, SimConfig
from .errors import ConfigError


# Config file names to search for
CONFIG_FILE_NAMES = [
    "sensor-evidence.toml",
]

_CHAIN_KEYS = {"a", "s"}
_ANCHOR_KEYS = {"batch_size", "fail_probability", "fail_next", "fault_seed"}
_SIMULATE_KEYS = {
    "n", "p_grid", "s_values", "a_values", "trials", "seed", "mode",
    "loss_model", "burst_length", "anchor_fail_probability", "jobs", "preset",
}


def load_config(path: Path | str) -> ProjectConfig:
    """
    Load ProjectConfig from a TOML file.

    Args:
        path: Path to the TOML config file

    Returns:
        Configured ProjectConfig instance

    Raises:
        FileNotFoundError: If config file doesn't exist
        ConfigError: If config is invalid
        ImportError: If tomli is not installed (Python < 3.11)
    """
    if tomllib is None:
        raise ImportError(
            "TOML parsing requires tomli for Python < 3.11. "
            "Install it with: pip install tomli"
        )

    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Config file not found: {path}")

    try:
        with open(path, "rb") as f:
            data = tomllib.load(f)
    except Exception as e:
        raise ConfigError(f"Failed to parse TOML file: {path}", str(e))

    return _parse_config(data)


def discover_config(
    project_dir: Optional[Path] = None,
    file_names: Optional[List[str]] = None,
) -> Optional[ProjectConfig]:
    """
    Load the first config file found in a directory.

    Unlike load_config, a missing file is not an error: every setting has a
    default, so None is returned and callers fall back to ProjectConfig().

    Args:
        project_dir: Directory to search (default: current directory)
        file_names: Custom list of file names to search (default: CONFIG_FILE_NAMES)
    """
    project_dir = Path(project_dir) if project_dir else Path.cwd()
    for name in file_names or CONFIG_FILE_NAMES:
        config_path = project_dir / name
        if config_path.exists():
            return load_config(config_path)
    return None


def _check_keys(section: str, data: Dict[str, Any], known: set) -> None:
    unknown = sorted(set(data) - known)
    if unknown:
        raise ConfigError(
            f"Unknown key(s) in [{section}]: {', '.join(unknown)}",
            "Valid keys: " + ", ".join(sorted(known)))


def _parse_config(data: Dict[str, Any]) -> ProjectConfig:
    """Parse TOML data into ProjectConfig.

    Unknown sections and keys are a hard error: a misspelled `batchsize`
    silently falling back to 1 would anchor every checkpoint on its own.
    """
    unknown_sections = sorted(set(data) - {"chain", "anchor", "simulate"})
    if unknown_sections:
        raise ConfigError(
            f"Unknown section(s): {', '.join(unknown_sections)}",
            "Valid sections: [chain], [anchor], [simulate]")

    chain_data = data.get("chain", {})
    anchor_data = data.get("anchor", {})
    simulate_data = dict(data.get("simulate", {}))
    _check_keys("chain", chain_data, _CHAIN_KEYS)
    _check_keys("anchor", anchor_data, _ANCHOR_KEYS)
    _check_keys("simulate", simulate_data, _SIMULATE_KEYS)

    try:
        preset = simulate_data.pop("preset", None)
        if preset is not None:
            if preset not in GRID_PRESETS:
                raise ValueError(
                    f"Unknown preset {preset!r}. Known: {sorted(GRID_PRESETS)}")
            for key, value in GRID_PRESETS[preset].items():
                simulate_data.setdefault(key, value)

        return ProjectConfig(
            chain=ChainConfig(**chain_data),
            anchor=AnchorConfig(**anchor_data),
            simulate=SimConfig(**simulate_data),
        )
    except ValueError as e:
        raise ConfigError("Invalid configuration", str(e))
    except TypeError as e:
        raise ConfigError("Invalid configuration", str(e))
