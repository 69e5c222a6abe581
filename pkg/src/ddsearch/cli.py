"""Command-line front end.

Subcommands: ``run`` an experiment config and persist the trace, ``analyze``
a trace file, ``montecarlo`` a batch of seeded trials, and ``sample`` an
objective onto a CSV grid.  Exit codes: 0 success, 1 expectation failure
(--expect-gap mismatch, lemma check failure, incomplete escape), 2 input or
config error, 3 runtime objective error.
"""

from __future__ import annotations

import argparse
import sys
from collections import Counter

from . import analysis, engine, traceio
from .analysis import AnalysisError
from .configfile import ConfigFileError, load_experiment_config
from .engine import ConfigError, InitializationError
from .objective import UnknownNameError, get_objective

EXIT_OK = 0
EXIT_EXPECTATION_FAILED = 1
EXIT_INPUT_ERROR = 2
EXIT_OBJECTIVE_ERROR = 3


def _fail(message: str, code: int) -> int:
    print(f"error: {message}", file=sys.stderr)
    return code


def cmd_run(args: argparse.Namespace) -> int:
    experiment = load_experiment_config(args.config)
    objective = get_objective(experiment.objective_name)
    trace = engine.run(experiment.algo, objective)
    traceio.write_trace(trace, experiment.trace_path)
    print(
        f"wrote {experiment.trace_path}: {len(trace.records)} iterations, "
        f"termination={trace.termination}"
    )
    return EXIT_OK


def _format_vector(v: tuple[float, ...]) -> str:
    if len(v) == 1:
        return repr(v[0])
    return "[" + ", ".join(repr(c) for c in v) + "]"


def cmd_analyze(args: argparse.Namespace) -> int:
    trace = traceio.read_trace(args.trace)
    if args.verify_lemma is not None:
        if not analysis.verify_counterexample_closed_form(trace, args.verify_lemma):
            print(f"closed-form verification failed for q=0..{args.verify_lemma}")
            return EXIT_EXPECTATION_FAILED
        print(f"lemma-verified q=0..{args.verify_lemma}")
    report = analysis.extract_refining(trace, cluster_tol=args.cluster_tol)
    print(f"unsuccessful_iterations: {len(report.unsuccessful_indices)}")
    print(f"refined_point: {_format_vector(report.refined_point)}")
    print(f"alpha_tail: {report.alpha_tail!r}")
    print(f"f_limit: {report.f_limit!r}")
    print(f"f_refined: {report.f_refined!r}")
    print(f"gap: {report.gap!r}")
    tail = report.f_values[-5:]
    print("f_tail: " + ", ".join(repr(v) for v in tail))
    print("refining_directions: " + ", ".join(_format_vector(d) for d in report.refining_directions))
    if args.expect_gap is not None:
        if abs(report.gap - args.expect_gap) > args.tol:
            print(f"gap {report.gap!r} differs from expected {args.expect_gap!r} by more than {args.tol!r}")
            return EXIT_EXPECTATION_FAILED
    return EXIT_OK


def cmd_montecarlo(args: argparse.Namespace) -> int:
    experiment = load_experiment_config(args.config)
    objective = get_objective(experiment.objective_name)
    stats = analysis.monte_carlo_escape(experiment.algo, objective, args.trials, args.master_seed)
    print(f"escaped: {stats.n_escaped}/{stats.n_trials}")
    print(f"converged: {stats.n_converged}/{stats.n_trials}")
    print("first_escape_histogram:")
    for iteration, count in sorted(Counter(stats.first_escape_iterations).items()):
        print(f"  {iteration}: {count}")
    if stats.n_escaped < stats.n_trials:
        return EXIT_EXPECTATION_FAILED
    return EXIT_OK


def cmd_sample(args: argparse.Namespace) -> int:
    objective = get_objective(args.objective)
    if objective.dimension != 1:
        return _fail(f"objective {args.objective!r} is not one-dimensional", EXIT_INPUT_ERROR)
    if not args.x_min < args.x_max:
        return _fail(f"x_min must be < x_max, got {args.x_min} >= {args.x_max}", EXIT_INPUT_ERROR)
    if args.n_points < 2:
        return _fail(f"n_points must be >= 2, got {args.n_points}", EXIT_INPUT_ERROR)
    n = args.n_points
    with open(args.out, "w", encoding="utf-8", newline="\n") as handle:
        handle.write("x,f\n")
        for i in range(n):
            # Convex-combination grid: endpoints exact, and symmetric ranges
            # hit their midpoint (e.g. 0 on [-2, 2]) exactly.
            x = ((n - 1 - i) * args.x_min + i * args.x_max) / (n - 1)
            value = objective.evaluator((x,))
            handle.write(f"{x!r},{value!r}\n")
    print(f"wrote {args.out}: {n} rows")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ddsearch",
        description="Directional direct search with a randomized revealing poll.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run an experiment config and write its trace")
    p_run.add_argument("config", help="path to an experiment .cfg file")
    p_run.set_defaults(func=cmd_run)

    p_analyze = sub.add_parser("analyze", help="extract the refining subsequence from a trace")
    p_analyze.add_argument("trace", help="path to a trace file written by 'run'")
    p_analyze.add_argument("--cluster-tol", type=float, default=1e-3, help="angular clustering tolerance (radians)")
    p_analyze.add_argument(
        "--verify-lemma",
        type=int,
        metavar="Q_MAX",
        help="check the dyadic closed-form trajectory bit-exactly for q=0..Q_MAX",
    )
    p_analyze.add_argument("--expect-gap", type=float, help="expected discontinuity gap")
    p_analyze.add_argument("--tol", type=float, default=1e-6, help="tolerance for --expect-gap")
    p_analyze.set_defaults(func=cmd_analyze)

    p_mc = sub.add_parser("montecarlo", help="run independent seeded trials and report escape statistics")
    p_mc.add_argument("config", help="experiment config with the revealing poll enabled")
    p_mc.add_argument("--trials", type=int, required=True, help="number of independent trials")
    p_mc.add_argument("--master-seed", type=int, required=True, help="seed from which per-trial seeds derive")
    p_mc.set_defaults(func=cmd_montecarlo)

    p_sample = sub.add_parser("sample", help="evaluate a 1-D objective on a uniform grid into a CSV file")
    p_sample.add_argument("objective", help="objective registry name")
    p_sample.add_argument("x_min", type=float)
    p_sample.add_argument("x_max", type=float)
    p_sample.add_argument("n_points", type=int)
    p_sample.add_argument("out", help="output CSV path")
    p_sample.set_defaults(func=cmd_sample)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigFileError, ConfigError, UnknownNameError, traceio.TraceFormatError, AnalysisError) as exc:
        return _fail(str(exc), EXIT_INPUT_ERROR)
    except InitializationError as exc:
        return _fail(str(exc), EXIT_OBJECTIVE_ERROR)
    except OSError as exc:
        return _fail(str(exc), EXIT_INPUT_ERROR)


if __name__ == "__main__":
    sys.exit(main())
