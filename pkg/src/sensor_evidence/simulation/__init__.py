"""Monte Carlo loss simulation."""

from .masks import (
    bernoulli_mask,
    burst_mask,
    loss_uniforms,
    sample_burst_mask,
    sample_loss_mask,
)
from .sweep import (
    CSV_HEADER,
    SATURATION_TOLERANCE,
    SimResult,
    SimRow,
    SweepRunner,
    expected_fraction_s1,
    run_sweep,
    saturation_curve,
    simulate_cell,
)

__all__ = [
    "bernoulli_mask",
    "burst_mask",
    "loss_uniforms",
    "sample_burst_mask",
    "sample_loss_mask",
    "CSV_HEADER",
    "SATURATION_TOLERANCE",
    "SimResult",
    "SimRow",
    "SweepRunner",
    "expected_fraction_s1",
    "run_sweep",
    "saturation_curve",
    "simulate_cell",
]
