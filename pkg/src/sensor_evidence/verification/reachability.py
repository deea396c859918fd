"""Checkpoint reachability over the digest DAG, on plain index masks.

Edges run i -> i-1 and (for a > 1) i -> i-a. Traversal starts at trust-root
checkpoints and may only pass through available indices, so one descending
sweep decides every index: j is reached iff it is available and it is a
root or j+1 or j+a is reached.

This module knows nothing about signatures or digests; the simulator's fast
mode and the full verifier both assign statuses through `assign_statuses`.
"""

from enum import Enum
from typing import AbstractSet, Iterable, List, Optional, Sequence, Set


class Status(str, Enum):
    """Per-index verification outcome."""
    VERIFIABLE = "verifiable"
    LOST = "lost"
    UNREACHABLE = "unreachable"
    CORRUPT = "corrupt"
    UNANCHORED_TAIL = "unanchored-tail"


ALL_STATUSES: List[Status] = list(Status)


def reachable_mask(available: Sequence[bool], roots: Iterable[int], a: int) -> List[bool]:
    """reached[j] for every index of `available`.

    Roots that are out of range or not available contribute nothing.
    """
    n = len(available)
    root_set = set(roots)
    reached = [False] * n
    for j in range(n - 1, -1, -1):
        if not available[j]:
            continue
        if (j in root_set
                or (j + 1 < n and reached[j + 1])
                or (a > 1 and j + a < n and reached[j + a])):
            reached[j] = True
    return reached


def reachable_set(available: AbstractSet[int], checkpoints: AbstractSet[int], a: int) -> Set[int]:
    """Available indices reachable from any available checkpoint.

    Example:
        >>> sorted(reachable_set({0, 1, 3, 4}, {4}, a=3))
        [0, 1, 3, 4]
    """
    if a < 1:
        raise ValueError(f"a must be >= 1, got {a}")
    if not available or not checkpoints:
        return set()
    n = max(available) + 1
    mask = [j in available for j in range(n)]
    reached = reachable_mask(mask, (c for c in checkpoints if c < n), a)
    return {j for j in range(n) if reached[j]}


def assign_statuses(
    available: Sequence[bool],
    reached: Sequence[bool],
    roots: Iterable[int],
    corrupt: Optional[AbstractSet[int]] = None,
) -> List[Status]:
    """Statuses from availability and a traversal result.

    Corrupt wins over everything; unreached indices above the
    highest trust root are the unanchored tail, the rest are unreachable.
    """
    corrupt = corrupt or frozenset()
    top = max(roots, default=-1)
    statuses = []
    for j, present in enumerate(available):
        if j in corrupt:
            statuses.append(Status.CORRUPT)
        elif not present:
            statuses.append(Status.LOST)
        elif reached[j]:
            statuses.append(Status.VERIFIABLE)
        elif j > top:
            statuses.append(Status.UNANCHORED_TAIL)
        else:
            statuses.append(Status.UNREACHABLE)
    return statuses


def classify_mask(available: Sequence[bool], roots: Iterable[int], a: int) -> List[Status]:
    """Statuses for an availability mask whose trust roots are already known."""
    roots = [r for r in roots if 0 <= r < len(available) and available[r]]
    return assign_statuses(available, reachable_mask(available, roots, a), roots)
