"""``prony-adapt`` command line entry point.

Exit codes: 0 success, 1 some runs failed, 2 invalid configuration,
3 I/O failure.
"""

import argparse
import os
import sys
from dataclasses import replace

from .bench import PRESETS, emit_plot_data, emit_report, load_config, preset, run_experiments
from .errors import ConfigError

EXIT_OK = 0
EXIT_PARTIAL = 1
EXIT_CONFIG = 2
EXIT_IO = 3


def build_parser():
    parser = argparse.ArgumentParser(prog="prony-adapt", description="Prony / LMS precision benchmarks")
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run experiments from a config file or preset")
    src = run.add_mutually_exclusive_group(required=True)
    src.add_argument("--config", help="JSON experiment document")
    src.add_argument("--preset", choices=sorted(PRESETS))
    run.add_argument("--out", default=".", help="output directory (default: current directory)")
    run.add_argument("--format", choices=("json", "csv"), default="json")
    run.add_argument("--runs", type=int, help="override the repetition count")
    run.add_argument("--seed", type=int, help="override the base seed")
    run.add_argument("--timing", action="store_true", help="include per-run wall-clock in the written report")
    run.add_argument("--plot-data", action="store_true", help="write n,clean,noisy,recovered traces per experiment")
    run.add_argument("--quiet", action="store_true")
    return parser


def _configs(args):
    if args.preset:
        return preset(args.preset, runs=args.runs, seed=args.seed)
    configs = load_config(args.config)
    overrides = {}
    if args.runs is not None:
        overrides["runs"] = args.runs
    if args.seed is not None:
        overrides["seed"] = args.seed
    return [replace(c, **overrides) for c in configs] if overrides else configs


def _summary(reports):
    lines = [f"{'experiment':<34} {'runs':>4} {'failed':>6} {'mean PM':>14} {'std':>11} {'min':>14} {'max':>14}"]
    for r in reports:
        st = r.statistics
        if st is None:
            lines.append(f"{r.config.label:<34} {len(r.runs):>4} {len(r.failed):>6} {'-':>14}")
        else:
            lines.append(
                f"{r.config.label:<34} {len(r.runs):>4} {len(r.failed):>6} "
                f"{st.mean:>14.6f} {st.std:>11.3e} {st.min:>14.6f} {st.max:>14.6f}"
            )
        for f in r.failed:
            lines.append(f"    run {f.run_index} (seed {f.seed}): {f.error}")
    return "\n".join(lines)


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        configs = _configs(args)
    except ConfigError as exc:
        print(f"prony-adapt: invalid config: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"prony-adapt: cannot read config: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        reports = run_experiments(configs)
    except ConfigError as exc:
        print(f"prony-adapt: invalid config: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        os.makedirs(args.out, exist_ok=True)
        if args.format == "json":
            emit_report(reports, "json", os.path.join(args.out, "report.json"), include_timing=args.timing)
        else:
            for r in reports:
                emit_report(r, "csv", os.path.join(args.out, f"{r.config.label}.csv"), include_timing=args.timing)
        if args.plot_data:
            for r in reports:
                if r.trace is not None:
                    emit_plot_data(*r.trace, os.path.join(args.out, f"{r.config.label}_trace.csv"))
    except OSError as exc:
        print(f"prony-adapt: {exc}", file=sys.stderr)
        return EXIT_IO

    if not args.quiet:
        print(_summary(reports))
    return EXIT_PARTIAL if any(r.failed for r in reports) else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
