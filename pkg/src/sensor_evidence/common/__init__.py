"""Configuration, errors and log callbacks shared by every module."""

from .config import (
    AnchorConfig,
    ChainConfig,
    DEFAULT_P_GRID,
    A_EFFECT_GRID,
    S_EFFECT_GRID,
    SATURATION_GRID,
    GRID_PRESETS,
    LossModel,
    ProjectConfig,
    SimConfig,
    SimMode,
)
from .config_file import load_config, discover_config, CONFIG_FILE_NAMES
from .errors import (
    EvidenceError,
    ConfigError,
    KeyMaterialError,
    ReadoutError,
    RedactionError,
    ChainError,
    MerkleError,
    AnchorSubmissionError,
    ConfigMismatchError,
    FormatError,
    SimulationError,
)
from .log import ElapsedLog, LogCallback, console_log, null_log

__all__ = [
    # Config
    "AnchorConfig",
    "ChainConfig",
    "DEFAULT_P_GRID",
    "A_EFFECT_GRID",
    "S_EFFECT_GRID",
    "SATURATION_GRID",
    "GRID_PRESETS",
    "LossModel",
    "ProjectConfig",
    "SimConfig",
    "SimMode",
    "load_config",
    "discover_config",
    "CONFIG_FILE_NAMES",
    # Errors
    "EvidenceError",
    "ConfigError",
    "KeyMaterialError",
    "ReadoutError",
    "RedactionError",
    "ChainError",
    "MerkleError",
    "AnchorSubmissionError",
    "ConfigMismatchError",
    "FormatError",
    "SimulationError",
    # Logging
    "ElapsedLog",
    "LogCallback",
    "console_log",
    "null_log",
]
