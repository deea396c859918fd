"""Tamper-evident sensor readout chains with anchored checkpoints."""

from importlib.metadata import version, PackageNotFoundError

try:
    __version__ = version("sensor-evidence")
except PackageNotFoundError:
    __version__ = "0.0.0-dev"

from .common.config import (
    AnchorConfig,
    ChainConfig,
    LossModel,
    ProjectConfig,
    SimConfig,
    SimMode,
)
from .common.config_file import load_config, discover_config, CONFIG_FILE_NAMES
from .common.errors import (
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
from .crypto import Digest, KeyPair, hash_bytes, sign, verify_signature
from .chain import ChainRecorder, emit, is_checkpoint_index, new_chain
from .evidence import AnchorReceipt, AnchorStore, EvidenceBatch, build_tree, prove, verify_proof
from .verification import AvailableLog, Status, VerificationReport, verify_log, verify_single
from .simulation import SimResult, run_sweep, saturation_curve

__all__ = [
    # Config
    "AnchorConfig",
    "ChainConfig",
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
    # Crypto
    "Digest",
    "KeyPair",
    "hash_bytes",
    "sign",
    "verify_signature",
    # Chain
    "ChainRecorder",
    "emit",
    "is_checkpoint_index",
    "new_chain",
    # Evidence
    "AnchorReceipt",
    "AnchorStore",
    "EvidenceBatch",
    "build_tree",
    "prove",
    "verify_proof",
    # Verification
    "AvailableLog",
    "Status",
    "VerificationReport",
    "verify_log",
    "verify_single",
    # Simulation
    "SimResult",
    "run_sweep",
    "saturation_curve",
]
