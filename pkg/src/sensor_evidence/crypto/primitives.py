"""Hashing and Ed25519 signing.

Everything here is a pure function over immutable values and is safe to call
from any number of threads.
"""

import hashlib
import os
from dataclasses import dataclass
from pathlib import Path

from cryptography.exceptions import InvalidSignature
from cryptography.hazmat.primitives import serialization
from cryptography.hazmat.primitives.asymmetric import ed25519

from ..common.errors import KeyMaterialError

DIGEST_SIZE = 32
KEY_SIZE = 32
SIGNATURE_SIZE = 64


@dataclass(frozen=True, order=True)
class Digest:
    """A 32-byte SHA-256 output. Equality is byte-wise."""

    value: bytes

    def __post_init__(self):
        if not isinstance(self.value, (bytes, bytearray)):
            raise TypeError(f"Digest value must be bytes, got {type(self.value).__name__}")
        if len(self.value) != DIGEST_SIZE:
            raise ValueError(f"Digest must be {DIGEST_SIZE} bytes, got {len(self.value)}")
        object.__setattr__(self, "value", bytes(self.value))

    def __bytes__(self) -> bytes:
        return self.value

    def hex(self) -> str:
        return self.value.hex()

    @classmethod
    def from_hex(cls, text: str) -> "Digest":
        return cls(bytes.fromhex(text))

    def __repr__(self) -> str:
        return f"Digest({self.value.hex()[:16]}...)"


def hash_bytes(data: bytes) -> Digest:
    """SHA-256 of `data`."""
    return Digest(hashlib.sha256(data).digest())


@dataclass(frozen=True)
class KeyPair:
    """Ed25519 key pair. `private_key` is the 32-byte seed.

    The public key identifies the sensor.
    """

    public_key: bytes
    private_key: bytes

    def __post_init__(self):
        if len(self.private_key) != KEY_SIZE or len(self.public_key) != KEY_SIZE:
            raise KeyMaterialError(
                f"Ed25519 keys are {KEY_SIZE} bytes "
                f"(got private={len(self.private_key)}, public={len(self.public_key)})")

    @classmethod
    def generate(cls) -> "KeyPair":
        return cls.from_seed(os.urandom(KEY_SIZE))

    @classmethod
    def from_seed(cls, seed: bytes) -> "KeyPair":
        """Deterministic key pair from a 32-byte seed."""
        try:
            private = ed25519.Ed25519PrivateKey.from_private_bytes(bytes(seed))
        except ValueError as e:
            raise KeyMaterialError(f"Invalid Ed25519 seed: {e}")
        public = private.public_key().public_bytes(
            encoding=serialization.Encoding.Raw,
            format=serialization.PublicFormat.Raw,
        )
        return cls(public_key=public, private_key=bytes(seed))

    def _signer(self) -> ed25519.Ed25519PrivateKey:
        try:
            private = ed25519.Ed25519PrivateKey.from_private_bytes(self.private_key)
        except ValueError as e:
            raise KeyMaterialError(f"Invalid Ed25519 private key: {e}")
        derived = private.public_key().public_bytes(
            encoding=serialization.Encoding.Raw,
            format=serialization.PublicFormat.Raw,
        )
        if derived != self.public_key:
            raise KeyMaterialError("Public key does not match private key")
        return private

    def __repr__(self) -> str:
        return f"KeyPair(public_key={self.public_key.hex()[:16]}...)"


@dataclass(frozen=True)
class Signature:
    """Signature value plus the signer's public key."""

    value: bytes
    signer: bytes


def sign(key: KeyPair, message: bytes) -> Signature:
    """Sign `message` with `key`.

    Raises:
        KeyMaterialError: If the key pair is malformed or inconsistent.
    """
    return Signature(value=key._signer().sign(message), signer=key.public_key)


def verify_signature(sig: Signature, public_key: bytes, message: bytes) -> bool:
    """True iff `sig` was produced over `message` by the holder of `public_key`.

    Malformed inputs return False; adversarial bytes are an expected input.
    """
    try:
        if sig.signer != public_key or len(sig.value) != SIGNATURE_SIZE:
            return False
        verifier = ed25519.Ed25519PublicKey.from_public_bytes(bytes(public_key))
        verifier.verify(bytes(sig.value), bytes(message))
        return True
    except (InvalidSignature, ValueError, TypeError, AttributeError):
        return False


def write_key_file(key: KeyPair, path: Path | str) -> Path:
    """Write the private key as unencrypted PKCS8 PEM (mode 0600)."""
    path = Path(path)
    private = key._signer()
    pem = private.private_bytes(
        encoding=serialization.Encoding.PEM,
        format=serialization.PrivateFormat.PKCS8,
        encryption_algorithm=serialization.NoEncryption(),
    )
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(pem)
    try:
        path.chmod(0o600)
    except OSError:
        pass
    return path


def read_key_file(path: Path | str) -> KeyPair:
    """Load a PKCS8 PEM Ed25519 private key written by write_key_file.

    Raises:
        KeyMaterialError: If the file is missing, unreadable or not Ed25519.
    """
    path = Path(path)
    try:
        pem = path.read_bytes()
    except OSError as e:
        raise KeyMaterialError(f"Cannot read key file: {e}", str(path))
    try:
        private = serialization.load_pem_private_key(pem, password=None)
    except (ValueError, TypeError) as e:
        raise KeyMaterialError(f"Not a PEM private key: {e}", str(path))
    if not isinstance(private, ed25519.Ed25519PrivateKey):
        raise KeyMaterialError("Key file does not hold an Ed25519 key", str(path))
    seed = private.private_bytes(
        encoding=serialization.Encoding.Raw,
        format=serialization.PrivateFormat.Raw,
        encryption_algorithm=serialization.NoEncryption(),
    )
    return KeyPair.from_seed(seed)
