"""JSON Lines readout logs.

Line 1 is the header; every further line is one record:

    {"format": "sensor-evidence-log", "version": "1.0", "a": 3, "s": 5,
     "sensor_public_key": "<hex>", "length": 10}
    {"index": 0, "canonical": "<hex>", "readout": {...}, "receipt": {...}}

`canonical` is the storage form the digests are recomputed from; `readout`
is a human-readable view that must agree with it. `receipt` appears on
anchored checkpoints only. Unknown keys are ignored. Missing indices are
losses.
"""

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Optional

from ..common.config import ChainConfig
from ..common.errors import EvidenceError, FormatError
from ..crypto.canonical import canonical_bytes, parse_canonical
from ..evidence.batch import AnchorReceipt
from ..model.readout import Readout, final_digest
from ..verification.verifier import AvailableLog

LOG_FORMAT = "sensor-evidence-log"
LOG_VERSION = "1.0"
SUPPORTED_MAJOR = 1


@dataclass
class LogFile:
    """In-memory form of a log file.

    `corrupt` keeps records whose canonical bytes did not decode (or whose
    view disagreed with them) exactly as read, so rewriting a log never
    silently repairs or drops them.
    """

    config: ChainConfig
    public_key: bytes
    length: int
    readouts: Dict[int, Readout] = field(default_factory=dict)
    receipts: Dict[int, AnchorReceipt] = field(default_factory=dict)
    corrupt: Dict[int, dict] = field(default_factory=dict)

    @property
    def indices(self):
        return sorted(set(self.readouts) | set(self.corrupt))

    def available(self) -> AvailableLog:
        return AvailableLog(
            readouts=dict(self.readouts),
            receipts=dict(self.receipts),
            corrupt_records=set(self.corrupt),
            length=self.length,
            public_key=self.public_key,
        )

    def without(self, indices) -> "LogFile":
        """Copy with the given records removed (loss injection)."""
        drop = set(indices)
        return LogFile(
            config=self.config,
            public_key=self.public_key,
            length=self.length,
            readouts={j: r for j, r in self.readouts.items() if j not in drop},
            receipts={j: rc for j, rc in self.receipts.items() if j not in drop},
            corrupt={j: rec for j, rec in self.corrupt.items() if j not in drop},
        )


def readout_view(r: Readout) -> dict:
    link = r.chain_link
    return {
        "index": r.index,
        "timestamp": r.timestamp,
        "location": None if r.location is None else {
            "latitude": r.location.latitude, "longitude": r.location.longitude},
        "segments": [{"label": seg.label, "body": seg.body.hex()} for seg in r.segments],
        "blinding_pairs": [
            {"random_number": bp.random_number.hex(), "search_key": bp.search_key.hex()}
            for bp in r.blinding_pairs
        ],
        "is_checkpoint": r.is_checkpoint,
        "prev_digest": link.prev_digest.hex() if link else None,
        "apast_digest": link.apast_digest.hex() if link and link.apast_digest else None,
        "apast_offset": link.apast_offset if link else None,
        "signature": r.signature.value.hex(),
        "final_digest": final_digest(r).hex(),
    }


def record_for(r: Readout, receipt: Optional[AnchorReceipt] = None) -> dict:
    record: Dict[str, Any] = {
        "index": r.index,
        "canonical": canonical_bytes(r).hex(),
        "readout": readout_view(r),
    }
    if receipt is not None:
        record["receipt"] = receipt.to_json()
    return record


def _dump(obj: dict) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def write_log(log: LogFile, path: Path | str) -> Path:
    """Write `log`; records in increasing index order."""
    path = Path(path)
    header = {
        "format": LOG_FORMAT,
        "version": LOG_VERSION,
        "a": log.config.a,
        "s": log.config.s,
        "sensor_public_key": log.public_key.hex(),
        "length": log.length,
    }
    lines = [_dump(header)]
    for j in log.indices:
        if j in log.corrupt:
            lines.append(_dump(log.corrupt[j]))
        else:
            lines.append(_dump(record_for(log.readouts[j], log.receipts.get(j))))
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")
    return path


def _parse_header(obj: Any, path: str) -> tuple:
    if not isinstance(obj, dict) or obj.get("format") != LOG_FORMAT:
        raise FormatError(f"Not a {LOG_FORMAT} file (bad or missing header)", path, 0)
    version = str(obj.get("version", ""))
    major = version.split(".")[0]
    if not major.isdigit() or int(major) != SUPPORTED_MAJOR:
        raise FormatError(
            f"Unsupported log version {version!r} (this reader handles {SUPPORTED_MAJOR}.x)",
            path, 0)
    try:
        config = ChainConfig(a=obj["a"], s=obj["s"])
        public_key = bytes.fromhex(obj["sensor_public_key"])
        length = int(obj["length"])
    except (KeyError, ValueError, TypeError) as e:
        raise FormatError(f"Invalid log header: {e}", path, 0)
    if length < 0:
        raise FormatError(f"Invalid log header: negative length {length}", path, 0)
    return config, public_key, length


def _decode_record(rec: dict) -> Optional[Readout]:
    """The readout, or None when the record must be treated as corrupt."""
    try:
        r = parse_canonical(Readout, bytes.fromhex(rec["canonical"]))
    except (EvidenceError, KeyError, ValueError, TypeError):
        return None
    if r.index != rec.get("index"):
        return None
    try:
        if rec.get("readout") != readout_view(r):
            return None
    except (EvidenceError, ValueError, TypeError):
        return None
    return r


def read_log(path: Path | str) -> LogFile:
    """Read a log written by write_log.

    Undecodable records are kept as corrupt; the read still succeeds.

    Raises:
        FormatError: Unparseable line (with its byte offset), bad header,
            unsupported version, out-of-order or out-of-range index, or a
            malformed receipt.
    """
    path = Path(path)
    where = str(path)
    try:
        data = path.read_bytes()
    except OSError as e:
        raise FormatError(f"Cannot read log: {e}", where)

    log: Optional[LogFile] = None
    last_index = -1
    offset = 0
    for raw in data.splitlines(keepends=True):
        line_start = offset
        offset += len(raw)
        if not raw.strip():
            continue
        try:
            obj = json.loads(raw)
        except json.JSONDecodeError as e:
            raise FormatError(f"Unparseable log line: {e.msg}", where, line_start + e.pos)
        except UnicodeDecodeError as e:
            raise FormatError(f"Log line is not UTF-8: {e.reason}", where, line_start + e.start)

        if log is None:
            config, public_key, length = _parse_header(obj, where)
            log = LogFile(config=config, public_key=public_key, length=length)
            continue

        if not isinstance(obj, dict) or not isinstance(obj.get("index"), int):
            raise FormatError("Log record without an integer index", where, line_start)
        index = obj["index"]
        if index <= last_index:
            raise FormatError(
                f"Record index {index} does not follow {last_index}", where, line_start)
        if index >= log.length:
            raise FormatError(
                f"Record index {index} outside stream length {log.length}", where, line_start)
        last_index = index

        readout = _decode_record(obj)
        if readout is None:
            log.corrupt[index] = obj
            continue
        log.readouts[index] = readout
        if obj.get("receipt") is not None:
            try:
                log.receipts[index] = AnchorReceipt.from_json(obj["receipt"])
            except EvidenceError as e:
                raise FormatError(f"Malformed receipt for index {index}: {e.message}",
                                  where, line_start)

    if log is None:
        raise FormatError("Empty log file (no header)", where, 0)
    return log
