"""Log callbacks shared by the recorder, the sweep runner and the CLI."""

import sys
import time
from typing import Protocol


class LogCallback(Protocol):
    """Protocol for logging callbacks."""

    def __call__(self, msg: str) -> None: ...


def safe_str(s) -> str:
    """Sanitize for consoles that cannot encode non-ASCII (e.g. Windows cp1252)."""
    return str(s).encode("ascii", errors="replace").decode("ascii")


def console_log(msg: str) -> None:
    """Default logger: ASCII-safe line on stdout, flushed immediately."""
    print(safe_str(msg), flush=True)


def stderr_log(msg: str) -> None:
    print(safe_str(msg), file=sys.stderr, flush=True)


def null_log(msg: str) -> None:
    pass


class ElapsedLog:
    """Wrap a callback and prefix each message with [mm:ss] since creation.

    Messages are also kept in `lines` so a caller can persist the session.
    """

    def __init__(self, log: LogCallback | None = None):
        self._log = log or console_log
        self._start = time.time()
        self.lines: list[str] = []

    def __call__(self, msg: str) -> None:
        mins, secs = divmod(int(time.time() - self._start), 60)
        stamped = f"[{mins:02d}:{secs:02d}] {msg}"
        self.lines.append(stamped)
        self._log(stamped)
