"""Command-line entry point.

One subcommand per experiment; every physical parameter is a flag. Exit
codes: 0 on success, 1 on invalid flags or parameters, 2 on I/O failure.
"""

from __future__ import annotations

import argparse
import sys

from .experiments import EXPERIMENTS, ExperimentConfig, run_experiment, write_csv


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> _Parser:
    parser = _Parser(prog="qswitch",
                     description="Quantum-switch experiment sweeps as CSV tables")
    sub = parser.add_subparsers(dest="experiment", metavar="EXPERIMENT")
    sub.required = True
    for name in EXPERIMENTS:
        p = sub.add_parser(name, help=f"run the {name} sweep")
        p.add_argument("--gamma1", type=float, default=1.0,
                       help="decay rate of the first channel (default 1)")
        p.add_argument("--gamma2", type=float, default=5.0,
                       help="decay rate used by the unequal-rate variant (default 5)")
        p.add_argument("--noise-p", type=float, default=0.5, dest="noise_p",
                       help="dephasing noise strength for the discrimination sweep")
        p.add_argument("--t-max", type=float, default=None, dest="t_max",
                       help="sweep end time (defaults per experiment)")
        p.add_argument("--t-steps", type=int, default=500, dest="t_steps",
                       help="number of time samples (default 500)")
        p.add_argument("--theta-steps", type=int, default=500, dest="theta_steps",
                       help="number of angle samples (default 500)")
        p.add_argument("--switch-mode", choices=("static", "timesplit"),
                       default=None, dest="switch_mode",
                       help="switch construction (defaults per experiment)")
        p.add_argument("--branch", choices=("plus", "minus"), default="plus",
                       help="control post-selection branch (default plus)")
        p.add_argument("--out", default=None, dest="out",
                       help="output CSV path (default <experiment>.csv)")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
        cfg = ExperimentConfig(experiment=ns.experiment, gamma1=ns.gamma1,
                               gamma2=ns.gamma2, noise_p=ns.noise_p,
                               theta_steps=ns.theta_steps, t_max=ns.t_max,
                               t_steps=ns.t_steps, switch_mode=ns.switch_mode,
                               branch=ns.branch,
                               output_path=ns.out or f"{ns.experiment}.csv")
    except UsageError as exc:
        print(f"qswitch: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"qswitch: invalid parameters: {exc}", file=sys.stderr)
        return 1

    table = run_experiment(cfg)
    try:
        write_csv(table, cfg.output_path)
    except OSError as exc:
        print(f"qswitch: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
