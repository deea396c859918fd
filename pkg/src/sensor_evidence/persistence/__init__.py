"""On-disk formats: readout logs, anchor stores and reports."""

from .anchor_file import anchor_from_json, anchor_to_json, read_anchor, write_anchor
from .log_file import LogFile, read_log, readout_view, record_for, write_log
from .reports import REPORT_FORMATS, format_for_path, write_report

__all__ = [
    "anchor_from_json",
    "anchor_to_json",
    "read_anchor",
    "write_anchor",
    "LogFile",
    "read_log",
    "readout_view",
    "record_for",
    "write_log",
    "REPORT_FORMATS",
    "format_for_path",
    "write_report",
]
