"""Command-line benchmark driver."""

from __future__ import annotations

import argparse
import logging
import sys

from .baselines import DEFAULT_TRIALS
from .errors import SlidingSubError
from .functions import DEFAULT_BANDWIDTH
from .runner import ALGORITHMS, RunConfig, emit_reports, iter_reports
from .streams import SyntheticSpec
from .window import WindowSpec


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="slidingsub",
        description="Run a sliding-window submodular maximization algorithm over a stream "
        "and write per-step reports.",
    )
    p.add_argument("--algorithm", choices=ALGORITHMS, default="smooth")
    p.add_argument("--function", choices=("coverage", "logdet"), default="coverage")
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--window", type=int, default=10_000)
    p.add_argument("--subwindow", type=int, default=None, help="bidir sub-window size (default: --window)")
    p.add_argument("--epsilon", type=float, default=0.1)
    p.add_argument("--kernel-bandwidth", type=float, default=DEFAULT_BANDWIDTH)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--input", help="stream file, one element per line")
    src.add_argument(
        "--synthetic",
        help="e.g. 'coverage:n=5000,universe=1000,sizes=1-10' or 'vectors:n=5000,d=5'",
    )
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--report-every", type=int, default=1)
    p.add_argument("--trials", type=int, default=DEFAULT_TRIALS, help="random baseline trials")
    p.add_argument("--output", required=True)
    p.add_argument("--format", choices=("jsonl", "csv"), default="jsonl")
    p.add_argument("--coverage-prune", action="store_true", help="drop redundant thresholds below 1 for coverage")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def config_from_args(args) -> RunConfig:
    return RunConfig(
        algorithm=args.algorithm,
        function=args.function,
        spec=WindowSpec(W=args.window, k=args.k, epsilon=args.epsilon, subwindow=args.subwindow),
        bandwidth=args.kernel_bandwidth,
        input_path=args.input,
        synthetic=SyntheticSpec.parse(args.synthetic) if args.synthetic else None,
        seed=args.seed,
        report_every=args.report_every,
        trials=args.trials,
        output_path=args.output,
        output_format=args.format,
        coverage_prune=args.coverage_prune,
    )


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        config = config_from_args(args)
        n = emit_reports(iter_reports(config), config.output_format, config.output_path)
    except (SlidingSubError, OSError) as exc:
        print(f"slidingsub: error: {exc}", file=sys.stderr)
        return 1
    logging.info("wrote %d reports to %s", n, config.output_path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
