# coding: utf-8
#
# This code is part of shadowmit.
#
# Copyright (c) 2022, Dylan Jones

"""Command line interface of the experiments.

Exit codes: ``0`` on success, ``1`` on I/O errors, ``2`` on invalid
configurations, ``3`` if an audit check fails and ``4`` if a term cannot
be mitigated.
"""

import argparse
import logging
import sys
from typing import Optional, Sequence
from ._utils import set_verbosity
from .experiments import (
    EXPERIMENTS,
    ConfigError,
    emit_report,
    load_config,
    run_experiment,
)
from .experiments.report import report_folder
from .mitigation import UnmitigableTermError
from .sampling import FrameSampler, write_frames_csv

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_IO = 1
EXIT_CONFIG = 2
EXIT_AUDIT = 3
EXIT_UNMITIGABLE = 4


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="shadowmit",
        description="Randomized measurement experiments with readout error mitigation.",
    )
    parser.add_argument("experiment", choices=EXPERIMENTS, help="Experiment to run.")
    parser.add_argument("--config", type=str, default=None, help="JSON config file.")
    parser.add_argument(
        "--out", type=str, default=None, help="Output directory (overrides 'outdir')."
    )
    parser.add_argument("--plots", action="store_true", help="Also save png figures.")
    parser.add_argument(
        "--seed-override",
        type=int,
        default=None,
        help="Replace the base seed of the configuration.",
    )
    parser.add_argument(
        "--threads", type=int, default=None, help="Number of worker threads."
    )
    parser.add_argument(
        "--dump-frames",
        type=int,
        default=0,
        metavar="K",
        help="Write the first K frames of the main stream to frames.csv.",
    )
    parser.add_argument(
        "-v", "--verbose", action="count", default=0, help="-v info, -vv debug."
    )
    return parser


def dump_frames(cfg, count: int) -> None:
    """Writes the first frames of the main stream next to the report."""
    sampler = FrameSampler(cfg.sampler_kind(), cfg.frame_seeds("main"), cfg.lfsr_width)
    folder = report_folder(cfg, cfg.outdir)
    path = folder / "frames.csv"
    try:
        folder.mkdir(parents=True, exist_ok=True)
        write_frames_csv(path, sampler.batch(0, count))
    except OSError as e:
        message = f"Cannot write frames to {path}: {e.strerror or e}"
        raise OSError(e.errno, message, str(path)) from e


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    set_verbosity(args.verbose)
    try:
        cfg = load_config(
            args.config,
            args.experiment,
            seed=args.seed_override,
            threads=args.threads,
            outdir=args.out,
        )
        report = run_experiment(cfg)
        folder = emit_report(report, cfg, plots=args.plots)
        if args.dump_frames > 0:
            dump_frames(cfg, args.dump_frames)
    except ConfigError as e:
        print(f"Invalid configuration: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as e:
        print(f"I/O error: {e}", file=sys.stderr)
        return EXIT_IO
    except UnmitigableTermError as e:
        print(f"Mitigation failed: {e}", file=sys.stderr)
        return EXIT_UNMITIGABLE
    print(folder)
    if args.experiment == "audit" and not report.passed:
        for row in report.failures():
            print(
                f"FAILED {row.check}: {row.computed:.6g} "
                f"(reference {row.reference:.6g})",
                file=sys.stderr,
            )
        return EXIT_AUDIT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
