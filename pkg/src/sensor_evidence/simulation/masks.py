"""Loss masks and the seeded random streams behind them.

Every stream is a numpy Generator over a SeedSequence whose spawn key names
its purpose, so a cell's randomness depends only on (seed, coordinates),
never on the order cells are run in:

    (LOSS_STREAM, trial)                 uniforms thresholded into loss masks
    (ANCHOR_STREAM, trial, s, a, p_ppm)  per-checkpoint anchor failures
    (KEY_STREAM, trial)                  sensor key seed for full mode

Loss uniforms do not depend on p, s or a. Thresholding one draw at several
p values gives nested masks: every index lost at p is lost at any p' > p.
"""

from typing import Iterable, Set

import numpy as np

from ..common.errors import SimulationError

LOSS_STREAM = 0
ANCHOR_STREAM = 1
KEY_STREAM = 2


def _rng(seed: int, *key: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=key))


def p_key(p: float) -> int:
    """p in parts per million, for spawn keys."""
    return int(round(p * 1_000_000))


def loss_uniforms(n: int, seed: int, trial: int) -> np.ndarray:
    return _rng(seed, LOSS_STREAM, trial).random(n)


def anchor_rng(seed: int, trial: int, s: int, a: int, p: float) -> np.random.Generator:
    return _rng(seed, ANCHOR_STREAM, trial, s, a, p_key(p))


def key_seed(seed: int, trial: int) -> bytes:
    """32 bytes for KeyPair.from_seed."""
    return _rng(seed, KEY_STREAM, trial).bytes(32)


def _check_p(p: float) -> None:
    if not 0.0 <= p <= 1.0:
        raise SimulationError(f"Loss probability must be in [0, 1], got {p}")


def bernoulli_mask(uniforms: np.ndarray, p: float) -> np.ndarray:
    """Availability mask: index j is lost iff uniforms[j] < p."""
    _check_p(p)
    return uniforms >= p


def burst_mask(uniforms: np.ndarray, p: float, burst_length: int) -> np.ndarray:
    """Availability mask with fixed-length loss bursts.

    A burst of `burst_length` losses starts at j iff uniforms[j] < p / burst_length,
    so the marginal loss rate is about p for small p. Bursts may overlap and
    are cut at the end of the stream.
    """
    _check_p(p)
    if burst_length < 1:
        raise SimulationError(f"burst_length must be >= 1, got {burst_length}")
    starts = (uniforms < p / burst_length).astype(np.int64)
    covered = np.convolve(starts, np.ones(burst_length, dtype=np.int64))[: len(uniforms)]
    return covered == 0


def sample_loss_mask(n: int, p: float, rng: np.random.Generator) -> np.ndarray:
    """Each of n indices independently lost with probability p (True = available)."""
    return bernoulli_mask(rng.random(n), p)


def sample_burst_mask(n: int, p: float, burst_length: int,
                      rng: np.random.Generator) -> np.ndarray:
    return burst_mask(rng.random(n), p, burst_length)


def failed_anchors(checkpoints: Iterable[int], probability: float,
                   rng: np.random.Generator) -> Set[int]:
    """Checkpoints whose atomic evidence submission fails."""
    checkpoints = list(checkpoints)
    if probability <= 0.0 or not checkpoints:
        return set()
    draws = rng.random(len(checkpoints))
    return {c for c, u in zip(checkpoints, draws) if u < probability}
