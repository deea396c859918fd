"""Verification report files."""

from pathlib import Path

from ..verification.verifier import VerificationReport

REPORT_FORMATS = ("json", "csv", "table")

_SUFFIX_FORMATS = {".json": "json", ".csv": "csv", ".txt": "table"}


def format_for_path(path: Path | str, default: str = "json") -> str:
    """Report format implied by a file suffix."""
    return _SUFFIX_FORMATS.get(Path(path).suffix.lower(), default)


def write_report(report: VerificationReport, path: Path | str, fmt: str | None = None) -> Path:
    path = Path(path)
    fmt = fmt or format_for_path(path)
    text = report.dumps(fmt)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text if text.endswith("\n") else text + "\n", encoding="utf-8", newline="")
    return path
