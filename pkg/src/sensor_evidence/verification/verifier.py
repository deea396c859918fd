"""Verify a partially available readout log against the anchor store.

A checkpoint is a trust root when it is present, its signature and witness
are valid, and its receipt passes check_receipt with the checkpoint's final
digest as leaf. From the trust roots, traversal descends one index at a
time. An edge from a reached readout to j counts only if the digest the
reached readout stores for j equals j's recomputed final digest; a mismatch
proves j is not the readout the chain committed to and marks it corrupt.
"""

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Set, Tuple

from ..chain.builder import is_checkpoint_index
from ..common.config import ChainConfig
from ..common.errors import ConfigMismatchError
from ..crypto.primitives import Digest
from ..evidence.anchor import AnchorStore
from ..evidence.batch import AnchorReceipt, check_receipt
from ..model.readout import Readout, final_digest, signature_valid
from .reachability import ALL_STATUSES, Status, assign_statuses


@dataclass
class AvailableLog:
    """What survived of a stream.

    Args:
        readouts: Present readouts by index; missing indices are lost.
        receipts: Anchor receipts by checkpoint index.
        corrupt_records: Indices whose record exists but could not be decoded.
        length: Stream length n as recorded; defaults to one past the
            highest index seen.
        public_key: Expected sensor key; readouts signed by any other key
            are corrupt.
    """

    readouts: Dict[int, Readout]
    receipts: Dict[int, AnchorReceipt] = field(default_factory=dict)
    corrupt_records: Set[int] = field(default_factory=set)
    length: Optional[int] = None
    public_key: Optional[bytes] = None

    @property
    def n(self) -> int:
        if self.length is not None:
            return self.length
        seen = set(self.readouts) | set(self.corrupt_records)
        return max(seen) + 1 if seen else 0


@dataclass
class VerificationReport:
    """Per-index statuses plus the trust roots they were derived from."""

    config: ChainConfig
    statuses: List[Status]
    anchored_checkpoints: Tuple[int, ...]
    parents: Dict[int, Optional[int]] = field(default_factory=dict, repr=False)

    @property
    def n(self) -> int:
        return len(self.statuses)

    @property
    def ok(self) -> bool:
        """No corrupt and no unreachable readouts."""
        return not any(s in (Status.CORRUPT, Status.UNREACHABLE) for s in self.statuses)

    def status(self, index: int) -> Status:
        return self.statuses[index]

    def indices(self, status: Status) -> List[int]:
        return [j for j, s in enumerate(self.statuses) if s is status]

    @property
    def stats(self) -> dict:
        counts = {s.value: 0 for s in ALL_STATUSES}
        for s in self.statuses:
            counts[s.value] += 1
        counts["unreachable_before_first_checkpoint"] = sum(
            1 for j in self.indices(Status.UNREACHABLE) if j < self.config.s - 1)
        counts["anchored_checkpoints"] = len(self.anchored_checkpoints)
        return counts

    def fractions(self) -> Dict[str, float]:
        if not self.n:
            return {s.value: 0.0 for s in ALL_STATUSES}
        stats = self.stats
        return {s.value: stats[s.value] / self.n for s in ALL_STATUSES}

    def to_json(self) -> dict:
        return {
            "a": self.config.a,
            "s": self.config.s,
            "length": self.n,
            "ok": self.ok,
            "anchored_checkpoints": list(self.anchored_checkpoints),
            "stats": self.stats,
            "fractions": {k: round(v, 6) for k, v in self.fractions().items()},
            "statuses": [s.value for s in self.statuses],
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["index", "status"])
        for j, s in enumerate(self.statuses):
            writer.writerow([j, s.value])
        return buf.getvalue()

    def to_table(self) -> str:
        """Runs of equal status, then the summary."""
        lines = [f"{'indices':<20} status", "-" * 40]
        start = 0
        for j in range(1, self.n + 1):
            if j == self.n or self.statuses[j] is not self.statuses[start]:
                span = f"{start}" if j - 1 == start else f"{start}-{j - 1}"
                lines.append(f"{span:<20} {self.statuses[start].value}")
                start = j
        lines.append("-" * 40)
        fractions = self.fractions()
        stats = self.stats
        for s in ALL_STATUSES:
            lines.append(f"{s.value:<20} {stats[s.value]:>8}  {fractions[s.value]:7.2%}")
        lines.append(f"anchored checkpoints: {len(self.anchored_checkpoints)}")
        return "\n".join(lines)

    def dumps(self, fmt: str = "json") -> str:
        if fmt == "json":
            return json.dumps(self.to_json(), indent=2)
        if fmt == "csv":
            return self.to_csv()
        if fmt == "table":
            return self.to_table()
        raise ValueError(f"Unknown report format {fmt!r}. Use json, csv or table.")


def _check_config(j: int, r: Readout, config: ChainConfig) -> None:
    if r.is_checkpoint != is_checkpoint_index(j, config.s):
        raise ConfigMismatchError(
            "Checkpoint flags disagree with the checkpoint interval",
            index=j, expected=f"s={config.s}",
            found=f"is_checkpoint={r.is_checkpoint}")
    link = r.chain_link
    if link is None:
        return
    if link.apast_offset != config.a:
        raise ConfigMismatchError(
            "Link offsets disagree with the chain configuration",
            index=j, expected=f"a={config.a}", found=f"a={link.apast_offset}")
    wants_apast = config.a > 1 and j >= config.a
    if wants_apast != (link.apast_digest is not None):
        raise ConfigMismatchError(
            "a-past link presence disagrees with the chain configuration",
            index=j, expected=f"a={config.a}",
            found="a-past digest " + ("present" if link.apast_digest else "absent"))


def _traverse(log: AvailableLog, anchor: AnchorStore, config: ChainConfig):
    n = log.n
    a = config.a
    digests: Dict[int, Digest] = {}
    corrupt: Set[int] = {j for j in log.corrupt_records if j < n}
    for j, r in log.readouts.items():
        if j >= n or j in corrupt:
            continue
        if (r.index != j or not signature_valid(r)
                or (log.public_key is not None and r.sensor_public_key != log.public_key)):
            corrupt.add(j)
            continue
        _check_config(j, r, config)
        digests[j] = final_digest(r)

    roots = sorted(
        j for j, receipt in log.receipts.items()
        if j in digests and log.readouts[j].is_checkpoint
        and check_receipt(receipt, anchor, leaf=digests[j])
    )
    root_set = set(roots)

    def edges(j: int):
        return ((j + 1, 1), (j + a, a)) if a > 1 else ((j + 1, 1),)

    parents: Dict[int, Optional[int]] = {}
    for j in range(n - 1, -1, -1):
        if j not in digests:
            continue
        if j in root_set:
            parents[j] = None
            continue
        via = None
        for child, offset in edges(j):
            if child not in parents:
                continue
            link = log.readouts[child].chain_link
            stored = link.prev_digest if offset == 1 else link.apast_digest
            if stored != digests[j]:
                corrupt.add(j)
                via = None
                break
            if via is None:
                via = child
        if via is not None and j not in corrupt:
            parents[j] = via

    available = [j in digests and j not in corrupt for j in range(n)]
    reached = [j in parents for j in range(n)]
    statuses = assign_statuses(available, reached, roots, corrupt)
    return statuses, tuple(roots), parents


def verify_log(log: AvailableLog, anchor: AnchorStore, config: ChainConfig) -> VerificationReport:
    """Classify every index 0..n-1.

    Raises:
        ConfigMismatchError: A validly signed readout carries link offsets or
            a checkpoint flag that `config` would not produce.
    """
    statuses, roots, parents = _traverse(log, anchor, config)
    return VerificationReport(config=config, statuses=statuses,
                              anchored_checkpoints=roots, parents=parents)


@dataclass(frozen=True)
class Trail:
    """Indices from a trust-root checkpoint down to the target, and its receipt."""

    indices: Tuple[int, ...]
    receipt: AnchorReceipt

    @property
    def checkpoint(self) -> int:
        return self.indices[0]

    @property
    def target(self) -> int:
        return self.indices[-1]

    def to_json(self) -> dict:
        return {"indices": list(self.indices), "receipt": self.receipt.to_json()}


@dataclass(frozen=True)
class SingleVerification:
    index: int
    status: Status
    trail: Optional[Trail] = None


def verify_single(log: AvailableLog, anchor: AnchorStore, index: int,
                  config: ChainConfig) -> SingleVerification:
    """Status of one index plus, when verifiable, the trail that proves it.

    Indices outside 0..n-1 are reported lost.
    """
    if not 0 <= index < log.n:
        return SingleVerification(index=index, status=Status.LOST)
    report = verify_log(log, anchor, config)
    status = report.status(index)
    if status is not Status.VERIFIABLE:
        return SingleVerification(index=index, status=status)
    path = [index]
    while report.parents[path[-1]] is not None:
        path.append(report.parents[path[-1]])
    path.reverse()
    trail = Trail(indices=tuple(path), receipt=log.receipts[path[0]])
    return SingleVerification(index=index, status=status, trail=trail)


def check_trail(trail: Trail, log: AvailableLog, anchor: AnchorStore,
                config: Optional[ChainConfig] = None) -> bool:
    """Re-check a trail without running the traversal.

    The checkpoint must be flagged as one and anchored with its own final
    digest as leaf; each hop must be an edge of offset 1 or a whose stored
    digest recomputes; every readout on the path must be validly signed.
    """
    try:
        rs = [log.readouts[j] for j in trail.indices]
        if not rs or not all(signature_valid(r) for r in rs):
            return False
        if any(r.index != j for r, j in zip(rs, trail.indices)):
            return False
        head = rs[0]
        if not head.is_checkpoint or not check_receipt(
                trail.receipt, anchor, leaf=final_digest(head)):
            return False
        for hi, lo in zip(rs, rs[1:]):
            offset = hi.index - lo.index
            link = hi.chain_link
            if link is None:
                return False
            if config is not None and link.apast_offset != config.a:
                return False
            if offset == 1:
                stored = link.prev_digest
            elif offset == link.apast_offset and offset > 1:
                stored = link.apast_digest
            else:
                return False
            if stored is None or stored != final_digest(lo):
                return False
        return True
    except (KeyError, ValueError, TypeError, AttributeError):
        return False
