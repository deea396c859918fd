"""JSON anchor-store files.

    {"format": "sensor-evidence-anchor", "version": "1.0", "current_block": 3,
     "digests": [{"digest": "<hex>", "block": 1}, {"digest": "<hex>", "block": 2}]}

Digests are listed in block order. An empty file is a fresh store.
Fault-injection settings are runtime-only and never persisted.
"""

import json
from pathlib import Path
from typing import Dict

from ..common.errors import FormatError
from ..crypto.primitives import Digest
from ..evidence.anchor import FIRST_BLOCK, AnchorStore

ANCHOR_FORMAT = "sensor-evidence-anchor"
ANCHOR_VERSION = "1.0"


def anchor_to_json(store: AnchorStore) -> dict:
    return {
        "format": ANCHOR_FORMAT,
        "version": ANCHOR_VERSION,
        "current_block": store.current_block,
        "digests": [{"digest": d.hex(), "block": block} for d, block in store.items()],
    }


def write_anchor(store: AnchorStore, path: Path | str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(anchor_to_json(store), indent=2) + "\n", encoding="utf-8")
    return path


def anchor_from_json(obj, where: str | None = None) -> AnchorStore:
    """Build a store from its JSON form.

    Raises:
        FormatError: Wrong format tag, unsupported major version, duplicate
            digest, or block numbers that the block counter could not have
            produced.
    """
    if not isinstance(obj, dict) or obj.get("format") != ANCHOR_FORMAT:
        raise FormatError(f"Not a {ANCHOR_FORMAT} file", where)
    version = str(obj.get("version", ""))
    if version.split(".")[0] != ANCHOR_VERSION.split(".")[0]:
        raise FormatError(f"Unsupported anchor file version {version!r}", where)
    digests: Dict[Digest, int] = {}
    try:
        current_block = int(obj.get("current_block", FIRST_BLOCK))
        for entry in obj.get("digests", []):
            digest = Digest.from_hex(entry["digest"])
            if digest in digests:
                raise FormatError(f"Duplicate digest {digest.hex()}", where)
            digests[digest] = int(entry["block"])
        return AnchorStore(current_block=current_block, digests=digests)
    except (KeyError, ValueError, TypeError) as e:
        raise FormatError(f"Invalid anchor file: {e}", where)


def read_anchor(path: Path | str) -> AnchorStore:
    """Read an anchor file; a missing or empty file yields a fresh store.

    Raises:
        FormatError: Unparseable JSON (with byte offset) or invalid content.
    """
    path = Path(path)
    if not path.exists():
        return AnchorStore()
    try:
        text = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as e:
        raise FormatError(f"Cannot read anchor file: {e}", str(path))
    if not text.strip():
        return AnchorStore()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise FormatError(f"Unparseable anchor file: {e.msg}", str(path),
                          len(text[:e.pos].encode("utf-8")))
    return anchor_from_json(obj, str(path))
