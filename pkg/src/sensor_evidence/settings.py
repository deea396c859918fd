"""Settings for sensor-evidence.

The default signing key path can be configured via:
  1. The SENSOR_EVIDENCE_KEY environment variable (highest priority)
  2. Persistent settings in ~/.sensor-evidence/settings.env
  3. No default (commands then need --key)
"""

import os
from pathlib import Path
from typing import Dict, Optional

SETTINGS_FILE = Path.home() / ".sensor-evidence" / "settings.env"

ENV_KEY_PATH = "SENSOR_EVIDENCE_KEY"

SETTINGS = [
    (ENV_KEY_PATH, "Default Ed25519 key file for `record`"),
]


def read_env_file(path: Path) -> Dict[str, str]:
    """Read a KEY=VALUE file; comments and blank lines are skipped."""
    values: Dict[str, str] = {}
    if not path.exists():
        return values
    try:
        for line in path.read_text().splitlines():
            line = line.strip()
            if line and not line.startswith("#") and "=" in line:
                k, v = line.split("=", 1)
                values[k.strip()] = v.strip()
    except OSError:
        pass
    return values


def load_settings_file(path: Path = SETTINGS_FILE) -> None:
    """Copy settings from `path` into os.environ; real env vars win."""
    for k, v in read_env_file(path).items():
        os.environ.setdefault(k, v)


def default_key_path() -> Optional[Path]:
    val = os.environ.get(ENV_KEY_PATH, "")
    return Path(val).expanduser() if val else None


load_settings_file()
