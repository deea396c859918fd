"""Canonical length-prefixed binary encoding.

Layout rules, fixed so digests recompute bit-exactly anywhere:
  - integers: u8 / u32 / u64, big-endian, fixed width
  - byte and string fields: u32 length prefix, then the bytes (strings UTF-8)
  - optional fields: one presence byte (0 or 1), then the value if present
  - doubles: IEEE-754 big-endian; -0.0 is written as 0.0, NaN/inf rejected
  - lists: u32 count, then the items
"""

import math
import struct
from typing import Protocol, Type, TypeVar

from ..common.errors import FormatError
from .primitives import DIGEST_SIZE, Digest

_U32_MAX = 2**32 - 1
_U64_MAX = 2**64 - 1


class Encoder:
    """Append-only canonical writer."""

    def __init__(self):
        self._parts: list[bytes] = []

    def u8(self, value: int) -> "Encoder":
        if not 0 <= value <= 0xFF:
            raise ValueError(f"u8 out of range: {value}")
        self._parts.append(bytes((value,)))
        return self

    def u32(self, value: int) -> "Encoder":
        if not 0 <= value <= _U32_MAX:
            raise ValueError(f"u32 out of range: {value}")
        self._parts.append(value.to_bytes(4, "big"))
        return self

    def u64(self, value: int) -> "Encoder":
        if not 0 <= value <= _U64_MAX:
            raise ValueError(f"u64 out of range: {value}")
        self._parts.append(value.to_bytes(8, "big"))
        return self

    def boolean(self, value: bool) -> "Encoder":
        return self.u8(1 if value else 0)

    def f64(self, value: float) -> "Encoder":
        if not math.isfinite(value):
            raise ValueError(f"non-finite float: {value}")
        if value == 0.0:
            value = 0.0
        self._parts.append(struct.pack(">d", value))
        return self

    def raw(self, data: bytes) -> "Encoder":
        """Unprefixed bytes; only for fixed-width tags."""
        self._parts.append(bytes(data))
        return self

    def blob(self, data: bytes) -> "Encoder":
        self.u32(len(data))
        self._parts.append(bytes(data))
        return self

    def text(self, value: str) -> "Encoder":
        return self.blob(value.encode("utf-8"))

    def digest(self, value: Digest) -> "Encoder":
        return self.blob(value.value)

    def getvalue(self) -> bytes:
        return b"".join(self._parts)


class Decoder:
    """Cursor over canonical bytes. Every read failure names the byte offset."""

    def __init__(self, data: bytes):
        self._data = bytes(data)
        self.pos = 0

    def _take(self, count: int) -> bytes:
        if self.pos + count > len(self._data):
            raise FormatError(
                f"Truncated canonical record: need {count} byte(s), "
                f"{len(self._data) - self.pos} left",
                offset=self.pos)
        chunk = self._data[self.pos:self.pos + count]
        self.pos += count
        return chunk

    def u8(self) -> int:
        return self._take(1)[0]

    def u32(self) -> int:
        return int.from_bytes(self._take(4), "big")

    def u64(self) -> int:
        return int.from_bytes(self._take(8), "big")

    def boolean(self) -> bool:
        at = self.pos
        value = self.u8()
        if value not in (0, 1):
            raise FormatError(f"Invalid boolean byte {value}", offset=at)
        return value == 1

    def f64(self) -> float:
        at = self.pos
        chunk = self._take(8)
        value = struct.unpack(">d", chunk)[0]
        if not math.isfinite(value):
            raise FormatError("Non-finite float", offset=at)
        if value == 0.0 and chunk[0] & 0x80:
            raise FormatError("Negative zero is not canonical", offset=at)
        return value

    def raw(self, count: int) -> bytes:
        return self._take(count)

    def blob(self) -> bytes:
        return self._take(self.u32())

    def text(self) -> str:
        at = self.pos
        try:
            return self.blob().decode("utf-8")
        except UnicodeDecodeError as e:
            raise FormatError(f"Invalid UTF-8 string: {e}", offset=at)

    def digest(self) -> Digest:
        at = self.pos
        value = self.blob()
        if len(value) != DIGEST_SIZE:
            raise FormatError(f"Digest field has {len(value)} bytes", offset=at)
        return Digest(value)

    def expect(self, tag: bytes) -> None:
        at = self.pos
        found = self._take(len(tag))
        if found != tag:
            raise FormatError(f"Expected tag {tag!r}, found {found!r}", offset=at)

    def finish(self) -> None:
        if self.pos != len(self._data):
            raise FormatError(
                f"{len(self._data) - self.pos} trailing byte(s) after record",
                offset=self.pos)


class CanonicalEncodable(Protocol):
    """Types with a canonical binary form."""

    def encode_into(self, enc: Encoder) -> None: ...


T = TypeVar("T")


def canonical_bytes(value: CanonicalEncodable) -> bytes:
    """Canonical byte string of a readout or any of its substructures."""
    enc = Encoder()
    value.encode_into(enc)
    return enc.getvalue()


def parse_canonical(cls: Type[T], data: bytes) -> T:
    """Inverse of canonical_bytes for `cls` (must define decode_from).

    Raises:
        FormatError: On truncated, malformed or over-long input.
    """
    dec = Decoder(data)
    value = cls.decode_from(dec)  # type: ignore[attr-defined]
    dec.finish()
    return value
