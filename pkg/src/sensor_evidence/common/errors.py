"""Custom exceptions for sensor-evidence."""


class EvidenceError(Exception):
    """Base exception for all sensor-evidence errors."""

    def __init__(self, message: str, details: str | None = None):
        self.message = message
        self.details = details
        super().__init__(self._format_message())

    def _format_message(self) -> str:
        if self.details:
            return f"{self.message}\n\nDetails:\n{self.details}"
        return self.message


class ConfigError(EvidenceError):
    """Error in configuration file parsing or validation."""

    pass


class KeyMaterialError(EvidenceError):
    """Malformed or unreadable signing key."""

    def __init__(self, message: str, path: str | None = None):
        self.path = path
        details = f"Key file: {path}" if path else None
        super().__init__(message, details)


class ReadoutError(EvidenceError):
    """A readout could not be built (violated construction precondition)."""

    pass


class RedactionError(EvidenceError):
    """Selective disclosure requested on an unsuitable readout."""

    pass


class ChainError(EvidenceError):
    """Invalid chain parameters or chain state."""

    pass


class MerkleError(EvidenceError):
    """Invalid Merkle tree construction or proof request."""

    pass


class AnchorSubmissionError(EvidenceError):
    """The anchor store rejected a submission (the atomic action failed)."""

    def __init__(self, message: str, block_number: int | None = None):
        self.block_number = block_number
        details = f"Anchor block at failure: {block_number}" if block_number else None
        super().__init__(message, details)


class ConfigMismatchError(EvidenceError):
    """Link offsets or checkpoint flags in a log disagree with the chain config."""

    def __init__(self, message: str, index: int | None = None, expected: str | None = None,
                 found: str | None = None):
        self.index = index
        details_parts = []
        if index is not None:
            details_parts.append(f"Readout index: {index}")
        if expected is not None:
            details_parts.append(f"Expected: {expected}")
        if found is not None:
            details_parts.append(f"Found: {found}")
        details = "\n".join(details_parts) if details_parts else None
        super().__init__(message, details)


class FormatError(EvidenceError):
    """Malformed on-disk file (log, anchor store, receipts)."""

    def __init__(self, message: str, path: str | None = None, offset: int | None = None):
        self.path = path
        self.offset = offset
        details_parts = []
        if path:
            details_parts.append(f"File: {path}")
        if offset is not None:
            details_parts.append(f"Byte offset: {offset}")
        details = "\n".join(details_parts) if details_parts else None
        super().__init__(message, details)


class SimulationError(EvidenceError):
    """Invalid simulation request."""

    pass
