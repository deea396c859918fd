"""Simulate command for sensor-evidence CLI."""

import sys

from ..common.config import (
    DEFAULT_PRESET,
    GRID_PRESETS,
    LossModel,
    SimConfig,
    SimMode,
    parse_float_list,
    parse_int_list,
)
from ..common.log import null_log, stderr_log
from ..simulation.sweep import SweepRunner
from ._common import EXIT_OK, add_common_flags, logger, pick, project_config


def build_sim_config(args) -> SimConfig:
    """Defaults < config file < --preset < explicit flags.

    Raises:
        ValueError: Invalid grid or parameter.
    """
    base = project_config(args).simulate
    fields = {
        "n": base.n,
        "p_grid": base.p_grid,
        "s_values": base.s_values,
        "a_values": base.a_values,
        "trials": base.trials,
        "seed": base.seed,
        "mode": base.mode,
        "loss_model": base.loss_model,
        "burst_length": base.burst_length,
        "anchor_fail_probability": base.anchor_fail_probability,
        "jobs": base.jobs,
    }
    if args.preset:
        fields.update(GRID_PRESETS[args.preset])
    if args.p_grid:
        fields["p_grid"] = parse_float_list(args.p_grid)
    if args.s:
        fields["s_values"] = parse_int_list(args.s)
    if args.a:
        fields["a_values"] = parse_int_list(args.a)
    fields["n"] = pick(args.n, fields["n"])
    fields["trials"] = pick(args.trials, fields["trials"])
    fields["seed"] = pick(args.seed, fields["seed"])
    fields["mode"] = pick(args.mode, fields["mode"])
    fields["loss_model"] = pick(args.loss_model, fields["loss_model"])
    fields["burst_length"] = pick(args.burst_length, fields["burst_length"])
    fields["anchor_fail_probability"] = pick(args.anchor_fail_prob,
                                             fields["anchor_fail_probability"])
    fields["jobs"] = pick(args.jobs, fields["jobs"])
    return SimConfig(**fields)


def cmd_simulate(args) -> int:
    """Run a Monte Carlo sweep and write CSV (plus a JSON sidecar with --out)."""
    config = build_sim_config(args)
    if args.out:
        log = logger(args)
    else:
        log = null_log if args.quiet else stderr_log
    result = SweepRunner(config, log=log).run()

    if args.out:
        csv_path, sidecar = result.write(args.out)
        if not args.quiet:
            print(f"CSV: {csv_path}")
            print(f"Sidecar: {sidecar}")
    else:
        sys.stdout.write(result.to_csv())
    return EXIT_OK


def add_simulate_parser(subparsers):
    """Add the simulate subcommand parser."""
    sim_parser = subparsers.add_parser(
        "simulate",
        help="Monte Carlo verifiability sweep over loss probability, s and a",
    )
    sim_parser.add_argument(
        "--preset",
        choices=sorted(GRID_PRESETS),
        default=None,
        help=f"Named (s, a) grid (config default: {DEFAULT_PRESET})",
    )
    sim_parser.add_argument(
        "--p-grid",
        default=None,
        help='Loss probabilities: "0,0.05,0.1" or "0:0.5:0.05"',
    )
    sim_parser.add_argument("--s", default=None, help='Checkpoint intervals: "1,10,100"')
    sim_parser.add_argument("--a", default=None, help='a-past offsets: "1,3,10" or "1:50"')
    sim_parser.add_argument("--n", type=int, default=None, help="Stream length")
    sim_parser.add_argument("--trials", type=int, default=None, help="Trials per grid point")
    sim_parser.add_argument("--seed", type=int, default=None, help="64-bit seed")
    sim_parser.add_argument(
        "--mode",
        choices=[m.value for m in SimMode],
        default=None,
        help="fast (index masks) or full (real signatures and anchoring)",
    )
    sim_parser.add_argument(
        "--loss-model",
        choices=[m.value for m in LossModel],
        default=None,
        help="bernoulli (independent) or burst (fixed-length runs)",
    )
    sim_parser.add_argument(
        "--burst-length",
        type=int,
        default=None,
        help="Run length for --loss-model burst",
    )
    sim_parser.add_argument(
        "--anchor-fail-prob",
        type=float,
        default=None,
        help="Per-checkpoint probability that evidence submission fails",
    )
    sim_parser.add_argument("--jobs", "-j", type=int, default=None, help="Worker processes")
    sim_parser.add_argument(
        "--out", "-o",
        default=None,
        help="CSV file to write (sidecar goes next to it as .json); default stdout",
    )
    add_common_flags(sim_parser)
    sim_parser.set_defaults(func=cmd_simulate)
