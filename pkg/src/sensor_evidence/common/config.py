"""Configuration dataclasses for chains, the evidence service and the simulator."""

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Tuple

# Loss probabilities 0.00, 0.05, ..., 0.50. Built from integers so the grid
# values are exact decimal literals (0.15, not 0.15000000000000002).
DEFAULT_P_GRID: Tuple[float, ...] = tuple(round(k * 0.05, 2) for k in range(11))

# Signature interval sweep at a=10.
S_EFFECT_GRID = {"s_values": (1, 10, 100, 1000), "a_values": (10,)}
# a-past sweep at s=100.
A_EFFECT_GRID = {"s_values": (100,), "a_values": (1, 2, 3, 5, 10)}
# Large-a saturation sweep at s=100.
SATURATION_GRID = {"s_values": (100,), "a_values": (10, 20, 30, 50)}

# Single source of truth for `simulate --preset`. Nothing else may hand-copy
# a grid; derive from these.
GRID_PRESETS: Dict[str, dict] = {
    "s-effect": S_EFFECT_GRID,
    "a-effect": A_EFFECT_GRID,
    "saturation": SATURATION_GRID,
}
DEFAULT_PRESET = "s-effect"

MAX_SIM_P = 0.5


class SimMode(str, Enum):
    """How the simulator assigns statuses.

    - fast: index-mask combinatorics only (no keys, no digests)
    - full: the real pipeline (signatures, digests, Merkle receipts, anchor store)

    Both modes must agree exactly on status assignment for identical masks.
    """
    FAST = "fast"
    FULL = "full"


class LossModel(str, Enum):
    """Loss generators available to the simulator.

    - bernoulli: each readout lost independently with probability p
    - burst: fixed-length loss runs starting at random offsets (extension
      beyond the independent-loss model; marginal loss rate is about p)
    """
    BERNOULLI = "bernoulli"
    BURST = "burst"


@dataclass(frozen=True)
class ChainConfig:
    """Chain shape for one sensor stream.

    Args:
        a: Offset of the redundant backward link. a == 1 means no redundant
           link (plain singly linked list).
        s: Checkpoint interval in readouts. s == 1 makes every readout a
           checkpoint.
    """

    a: int = 3
    s: int = 100

    def __post_init__(self):
        if isinstance(self.a, bool) or not isinstance(self.a, int) or self.a < 1:
            raise ValueError(f"a must be an integer >= 1, got {self.a!r}")
        if isinstance(self.s, bool) or not isinstance(self.s, int) or self.s < 1:
            raise ValueError(f"s must be an integer >= 1, got {self.s!r}")


@dataclass
class AnchorConfig:
    """Evidence-service settings.

    Args:
        batch_size: Final digests aggregated per Merkle root.
        fail_probability: Probability that a store call fails (fault injection).
        fail_next: Number of upcoming store calls that fail unconditionally.
        fault_seed: Seed for the probabilistic fault stream (None = OS entropy).
    """

    batch_size: int = 1
    fail_probability: float = 0.0
    fail_next: int = 0
    fault_seed: int | None = None

    def __post_init__(self):
        if self.batch_size < 1:
            raise ValueError(f"batch_size must be >= 1, got {self.batch_size}")
        if not 0.0 <= self.fail_probability <= 1.0:
            raise ValueError(
                f"fail_probability must be in [0, 1], got {self.fail_probability}")
        if self.fail_next < 0:
            raise ValueError(f"fail_next must be >= 0, got {self.fail_next}")


@dataclass
class SimConfig:
    """Monte Carlo sweep configuration.

    One result row is produced per (p, s, a, trial) cell.

    Args:
        n: Stream length per trial.
        p_grid: Loss probabilities, each in [0, 0.5].
        s_values: Checkpoint intervals.
        a_values: a-past offsets.
        trials: Repetitions per grid point. The default of 1 matches a
            single-run reproduction; use >= 20 for tolerance-tested trends.
        seed: 64-bit seed; identical configs produce identical output.
        mode: SimMode.FAST or SimMode.FULL.
        loss_model: LossModel.BERNOULLI or LossModel.BURST.
        burst_length: Run length for the burst loss model.
        anchor_fail_probability: Per-checkpoint probability that the atomic
            evidence submission fails (0 in the baseline).
        jobs: Worker processes (1 = serial; output is identical either way).
    """

    n: int = 10000
    p_grid: Tuple[float, ...] = DEFAULT_P_GRID
    s_values: Tuple[int, ...] = S_EFFECT_GRID["s_values"]
    a_values: Tuple[int, ...] = S_EFFECT_GRID["a_values"]
    trials: int = 1
    seed: int = 0
    mode: SimMode = SimMode.FAST
    loss_model: LossModel = LossModel.BERNOULLI
    burst_length: int = 5
    anchor_fail_probability: float = 0.0
    jobs: int = 1

    def __post_init__(self):
        """Validate and normalize configuration."""
        self.p_grid = tuple(float(p) for p in self.p_grid)
        self.s_values = tuple(int(s) for s in self.s_values)
        self.a_values = tuple(int(a) for a in self.a_values)
        if isinstance(self.mode, str):
            self.mode = SimMode(self.mode)
        if isinstance(self.loss_model, str):
            self.loss_model = LossModel(self.loss_model)

        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if not self.p_grid or not self.s_values or not self.a_values:
            raise ValueError("p_grid, s_values and a_values must all be non-empty")
        bad_p = [p for p in self.p_grid if not 0.0 <= p <= MAX_SIM_P]
        if bad_p:
            raise ValueError(f"loss probabilities must be in [0, {MAX_SIM_P}], got {bad_p}")
        for s in self.s_values:
            if s < 1:
                raise ValueError(f"s values must be >= 1, got {s}")
        for a in self.a_values:
            if a < 1:
                raise ValueError(f"a values must be >= 1, got {a}")
        if not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if self.burst_length < 1:
            raise ValueError(f"burst_length must be >= 1, got {self.burst_length}")
        if not 0.0 <= self.anchor_fail_probability <= 1.0:
            raise ValueError(
                f"anchor_fail_probability must be in [0, 1], got {self.anchor_fail_probability}")
        if self.jobs < 1:
            raise ValueError(f"jobs must be >= 1, got {self.jobs}")

    @classmethod
    def from_preset(cls, name: str, **overrides) -> "SimConfig":
        """Build a config from one of GRID_PRESETS, with field overrides.

        Raises:
            ValueError: If the preset name is unknown.
        """
        if name not in GRID_PRESETS:
            raise ValueError(f"Unknown preset {name!r}. Known: {sorted(GRID_PRESETS)}")
        kwargs = dict(GRID_PRESETS[name])
        kwargs.update(overrides)
        return cls(**kwargs)

    def to_dict(self) -> dict:
        """JSON-safe echo of the configuration (written as the CSV sidecar)."""
        return {
            "n": self.n,
            "p_grid": list(self.p_grid),
            "s_values": list(self.s_values),
            "a_values": list(self.a_values),
            "trials": self.trials,
            "seed": self.seed,
            "mode": self.mode.value,
            "loss_model": self.loss_model.value,
            "burst_length": self.burst_length,
            "anchor_fail_probability": self.anchor_fail_probability,
        }


@dataclass
class ProjectConfig:
    """Everything `sensor-evidence.toml` can set.

    Example:
        config = ProjectConfig(chain=ChainConfig(a=3, s=5))
    """

    chain: ChainConfig = field(default_factory=ChainConfig)
    anchor: AnchorConfig = field(default_factory=AnchorConfig)
    simulate: SimConfig = field(default_factory=SimConfig)

    def __post_init__(self):
        if isinstance(self.chain, dict):
            self.chain = ChainConfig(**self.chain)
        if isinstance(self.anchor, dict):
            self.anchor = AnchorConfig(**self.anchor)
        if isinstance(self.simulate, dict):
            self.simulate = SimConfig(**self.simulate)


def parse_float_list(text: str) -> List[float]:
    """Parse "0,0.05,0.1" or a range "0:0.5:0.05" into a list of floats."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"range must be start:stop:step, got {text!r}")
        start, stop, step = (float(x) for x in parts)
        if step <= 0:
            raise ValueError(f"range step must be positive, got {step}")
        count = int(round((stop - start) / step)) + 1
        return [round(start + k * step, 10) for k in range(count)]
    return [float(x) for x in text.split(",") if x.strip()]


def parse_int_list(text: str) -> List[int]:
    """Parse "1,10,100" or an inclusive range "1:50" / "1:50:5" into ints."""
    text = text.strip()
    if ":" in text:
        parts = [int(x) for x in text.split(":")]
        if len(parts) == 2:
            parts.append(1)
        if len(parts) != 3 or parts[2] <= 0:
            raise ValueError(f"range must be start:stop[:step], got {text!r}")
        return list(range(parts[0], parts[1] + 1, parts[2]))
    return [int(x) for x in text.split(",") if x.strip()]
