"""
Command line interface: ``dpmnet {simulate,score,eval,density,threshold,bench}``.

Exit status 0 on success, 2 on usage or input errors, 3 on numerical
failures (for instance a singular Gram matrix under naive inversion).
Diagnostics go to stderr; data goes to files or stdout (``-``).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import replace
from pathlib import Path

from . import __version__
from .benchmark import GENERATORS, SWEEP_PARAMS, load_plan, plan_from_mapping, run_benchmark
from .competitors import default_bins
from .data import (
    LAYOUTS,
    SCORE_FORMATS,
    ScoreMatrix,
    format_float,
    format_scores,
    read_dataset,
    read_gold_standard,
    read_scores,
    write_dataset,
    write_gold_standard,
)
from .evaluate import apply_threshold, evaluate, score_density
from .exceptions import DpmNetError, NumericalError, SingularMatrixError
from .methods import METHODS, MethodParams, score_dataset
from .simulate import SimulationConfig, simulate_gaussian, simulate_gs

DEFAULT_SEED = 0

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NUMERICAL = 3


class CliError(Exception):
    def __init__(self, message, status=EXIT_INPUT):
        super().__init__(message)
        self.status = status


def _emit(text: str, path) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([format_float(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# subcommands


def cmd_simulate(args) -> int:
    cfg = SimulationConfig(n=args.samples, noise_sigma=args.noise_sigma, seed=args.seed)
    if args.kind == "gs":
        d, g = simulate_gs(cfg)
    else:
        d, g = simulate_gaussian(args.nodes, cfg, args.expected_parents)
    write_dataset(d, args.out_data)
    if args.out_gold:
        write_gold_standard(g, args.out_gold)
    return EXIT_OK


def cmd_score(args) -> int:
    if args.method not in METHODS:
        raise CliError(f"unknown method {args.method!r}; valid identifiers: {', '.join(METHODS)}")
    d = read_dataset(args.input, args.layout)
    params = MethodParams(bins=args.bins, dpi_epsilon=args.dpi_epsilon, nd_beta=args.nd_beta)
    try:
        m = score_dataset(d, args.method, params, threads=args.threads)
    except SingularMatrixError as exc:
        remedy = "reg-" + args.method if not args.method.startswith("reg-") else args.method
        raise CliError(f"{exc}\nhint: rerun with --method {remedy}", EXIT_NUMERICAL) from exc
    meta = dict(m.metadata)
    meta.update(
        input=args.input,
        layout=args.layout,
        seed=args.seed,
        bins=params.bins if params.bins is not None else default_bins(d.n),
        dpi_epsilon=float(params.dpi_epsilon),
        nd_beta=float(params.nd_beta),
    )
    m = ScoreMatrix(m.scores, m.names, m.method, meta)
    _emit(format_scores(m, args.format), args.out)
    return EXIT_OK


def cmd_eval(args) -> int:
    m = read_scores(args.scores)
    g = read_gold_standard(args.gold, m.names)
    summary = evaluate(m, g)
    _emit(json.dumps(summary.to_dict(), indent=2, sort_keys=True) + "\n", args.out)
    if args.roc_csv:
        _emit(_csv_text(["fpr", "tpr"], summary.roc_points), args.roc_csv)
    if args.pr_csv:
        _emit(_csv_text(["recall", "precision"], summary.pr_points), args.pr_csv)
    return EXIT_OK


def cmd_density(args) -> int:
    m = read_scores(args.input)
    bw = args.bandwidth if args.bandwidth == "auto" else float(args.bandwidth)
    _emit(_csv_text(["grid", "density"], score_density(m, bw)), args.out)
    return EXIT_OK


def cmd_threshold(args) -> int:
    m = read_scores(args.input)
    g = read_gold_standard(args.gold, m.names) if args.gold else None
    rows = apply_threshold(m, args.t, g)
    lines = [f"{a}\t{b}\t{format_float(s)}" + (f"\t{label}" if label else "") for a, b, s, label in rows]
    _emit("".join(line + "\n" for line in lines), args.out)
    return EXIT_OK


def cmd_bench(args) -> int:
    if args.plan:
        plan = load_plan(args.plan)
    else:
        raw = {
            "generator": args.generator,
            "methods": args.methods,
            "replicates": args.replicates,
            "samples": args.samples,
            "noise_sigma": args.noise_sigma,
            "nodes": args.nodes,
            "sweep_param": args.sweep_param,
            "sweep_values": args.sweep_values,
            "bins": args.bins,
            "dpi_epsilon": args.dpi_epsilon,
            "nd_beta": args.nd_beta,
            "data_files": args.data_files,
            "gold_files": args.gold_files,
            "layout": args.layout,
        }
        plan = plan_from_mapping({k: str(v) for k, v in raw.items() if v is not None})
    if args.seed is not None:
        plan = replace(plan, config=replace(plan.config, seed=args.seed))
    result = run_benchmark(plan, threads=args.threads)
    out_json = args.out_json or plan.output
    if out_json in (None, "-"):
        sys.stdout.write(result.to_json())
    else:
        Path(out_json).write_text(result.to_json(), encoding="utf-8")
    if args.out_csv:
        _emit(result.to_csv(), args.out_csv)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def _common(seed_default=DEFAULT_SEED) -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--seed", type=int, default=seed_default, help="random seed (default: %(default)s)")
    p.add_argument(
        "--threads",
        type=int,
        default=os.cpu_count() or 1,
        help="worker threads; never changes results (default: machine parallelism)",
    )
    return p


def _method_params(p: argparse.ArgumentParser) -> None:
    p.add_argument("--bins", type=int, default=None, help="MI histogram bins (default: ceil(sqrt(n/5)))")
    p.add_argument("--dpi-epsilon", type=float, default=0.0, help="ARACNE DPI tolerance (default: 0)")
    p.add_argument("--nd-beta", type=float, default=0.9, help="network deconvolution beta (default: 0.9)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dpmnet", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"dpmnet {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    common = _common()

    p = sub.add_parser("simulate", parents=[common], help="generate a dataset and its gold standard")
    p.add_argument("--kind", choices=("gaussian", "gs"), required=True)
    p.add_argument("--nodes", type=int, default=50, help="gaussian only (default: %(default)s)")
    p.add_argument("--expected-parents", type=float, default=2.0)
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--noise-sigma", type=float, default=None,
                   help="additive noise sd (default: 1 for gs, 0 for gaussian)")
    p.add_argument("--out-data", required=True)
    p.add_argument("--out-gold")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("score", parents=[common], help="score all edges of a dataset with one method")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--layout", choices=LAYOUTS, default="samples-in-rows")
    p.add_argument("--method", required=True, help=f"one of: {', '.join(METHODS)}")
    p.add_argument("--out", default="-")
    p.add_argument("--format", choices=SCORE_FORMATS, default="edge-list")
    _method_params(p)
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("eval", parents=[common], help="AUROC/AUPRC of a score file against a gold standard")
    p.add_argument("--scores", "--in", dest="scores", required=True)
    p.add_argument("--gold", required=True)
    p.add_argument("--out", default="-", help="EvalSummary JSON")
    p.add_argument("--roc-csv")
    p.add_argument("--pr-csv")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("density", parents=[common], help="kernel density of |scores| as CSV")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--bandwidth", default="auto")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("threshold", parents=[common], help="edges with |score| >= t, labelled TP/FP/FN")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--gold")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_threshold)

    p = sub.add_parser("bench", parents=[_common(None)], help="replicated method comparison")
    p.add_argument("--plan", help="key = value plan file")
    p.add_argument("--generator", choices=GENERATORS)
    p.add_argument("--methods", help="comma separated method identifiers")
    p.add_argument("--replicates", type=int)
    p.add_argument("--samples", type=int)
    p.add_argument("--noise-sigma", type=float)
    p.add_argument("--nodes", type=int)
    p.add_argument("--sweep-param", choices=SWEEP_PARAMS)
    p.add_argument("--sweep-values", help="comma separated values")
    p.add_argument("--data-files", help="comma separated expression tables (external-files)")
    p.add_argument("--gold-files", help="comma separated gold standards (external-files)")
    p.add_argument("--layout", choices=LAYOUTS)
    p.add_argument("--bins", type=int)
    p.add_argument("--dpi-epsilon", type=float)
    p.add_argument("--nd-beta", type=float)
    p.add_argument("--out-json")
    p.add_argument("--out-csv")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code not in (0, None) else EXIT_OK
    if getattr(args, "noise_sigma", "unset") is None and args.command == "simulate":
        args.noise_sigma = 1.0 if args.kind == "gs" else 0.0
    try:
        return args.func(args)
    except CliError as exc:
        print(f"dpmnet {args.command}: {exc}", file=sys.stderr)
        return exc.status
    except (SingularMatrixError, NumericalError, ArithmeticError) as exc:
        print(f"dpmnet {args.command}: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (DpmNetError, ValueError, KeyError, OSError) as exc:
        print(f"dpmnet {args.command}: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
