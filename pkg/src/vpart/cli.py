"""Command-line entry point (``vpart``)."""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from .bench import ExperimentConfig, StrategyMismatchError, render_svg, run_experiment, summary_table, write_csv
from .dataset import DataError, load, min_significant_support, project, stats
from .merge import MergeInput, merge_stats, timed_merge
from .miner import apriori, mine_closed_oracle
from .partition import PartitionPlan, make_plan, validate
from .similarity import METRIC_NAMES, MetricError, build_matrix

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_MISMATCH = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _var_list(d, text):
    if not text:
        return list(d.variables)
    wanted = [t.strip() for t in text.split(",") if t.strip()]
    by_name = {str(v): v for v in d.variables}
    missing = [w for w in wanted if w not in by_name]
    if missing:
        raise DataError(f"unknown variable(s): {', '.join(missing)}")
    return [by_name[w] for w in wanted]


def _load(args):
    return load(args.file, args.format, args.missing_marker)


def _write(path, text):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def cmd_stats(args):
    d = _load(args)
    st = stats(d)
    out = {
        "dataset": d.name,
        "n_obs": st.n_obs,
        "n_vars": st.n_vars,
        "missing_fraction": st.missing_fraction,
        "min_significant_support": min_significant_support(st, args.pattern_len, args.alpha),
        "pattern_len": args.pattern_len,
        "alpha": args.alpha,
    }
    print(json.dumps(out, indent=2))


def cmd_simmatrix(args):
    d = _load(args)
    m = build_matrix(project(d, _var_list(d, args.vars)), args.metric)
    _write(args.output, m.to_csv())


def cmd_partition(args):
    d = _load(args)
    variables = _var_list(d, args.vars)
    matrix = None
    if args.strategy != "random":
        matrix = build_matrix(project(d, variables), args.metric)
    plan = make_plan(args.strategy, variables, args.cap, matrix, args.seed)
    _write(args.output, plan.to_json() + "\n")


def cmd_mine(args):
    d = _load(args)
    if args.plan is None:
        result = mine_closed_oracle(d, _var_list(d, args.vars), args.min_sup)
        summary = None
    else:
        with open(args.plan) as fh:
            plan = PartitionPlan.from_json(fh.read())
        problems = validate(plan, plan.variables)
        unknown = set(plan.variables).difference(d.variables)
        if problems or unknown:
            raise DataError("invalid plan: " + "; ".join(problems + [f"unknown variable {v!r}" for v in unknown]))
        pre = [apriori(d, c, args.min_sup, source=f"partition-{k}") for k, c in enumerate(plan.clusters)]
        result, ms = timed_merge(MergeInput(pre, d.n_obs, args.min_sup))
        summary = merge_stats(pre, result, merge_wall_ms=ms).to_dict()
    _write(args.output, result.to_text())
    if args.summary:
        _write(args.summary, json.dumps(summary or {"final_count": len(result)}, indent=2) + "\n")


def cmd_bench(args):
    try:
        counts = tuple(int(c) for c in args.counts.split(","))
    except ValueError:
        raise UsageError(f"bad --counts {args.counts!r}") from None
    cfg = ExperimentConfig(
        dataset_path=args.file, fmt=args.format, counts=counts, runs=args.runs, cap=args.cap,
        min_sup=args.min_sup, metric=args.metric, seed=args.seed, parallel_mine=args.parallel_mine,
        include_matrix_time=args.include_matrix_time,
    )
    if cfg.runs < 2:
        raise UsageError("--runs must be at least 2")
    d = _load(args)
    report = run_experiment(cfg, d)
    os.makedirs(args.output, exist_ok=True)
    write_csv(report, os.path.join(args.output, "runs.csv"))
    table = summary_table(report)
    _write(os.path.join(args.output, "summary.txt"), table)
    render_svg(report, args.output)
    sys.stdout.write(table)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="vpart", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, fn, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("file")
        sp.add_argument("--format", choices=("fimi", "csv"), default=None)
        sp.add_argument("--missing-marker", default="NaN")
        sp.set_defaults(fn=fn)
        return sp

    sp = add("stats", cmd_stats, "dataset statistics and significance-derived minimum support")
    sp.add_argument("--pattern-len", type=int, default=4)
    sp.add_argument("--alpha", type=float, default=0.05)

    sp = add("simmatrix", cmd_simmatrix, "pairwise variable similarity matrix as CSV")
    sp.add_argument("--metric", choices=METRIC_NAMES, required=True)
    sp.add_argument("--vars", default=None, help="comma-separated variable ids")
    sp.add_argument("-o", "--output", default=None)

    sp = add("partition", cmd_partition, "partition variables into capped clusters")
    sp.add_argument("--metric", choices=METRIC_NAMES, default="sim_co")
    sp.add_argument("--cap", type=int, default=4)
    sp.add_argument("--strategy", choices=("similarity", "dissimilarity", "random"), default="similarity")
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--vars", default=None)
    sp.add_argument("-o", "--output", default=None)

    sp = add("mine", cmd_mine, "mine closed patterns, optionally through a partition plan")
    sp.add_argument("--plan", default=None)
    sp.add_argument("--min-sup", type=float, required=True)
    sp.add_argument("--vars", default=None)
    sp.add_argument("--summary", default=None, help="write a JSON merge summary here")
    sp.add_argument("-o", "--output", default=None)

    sp = add("bench", cmd_bench, "compare partitioning strategies")
    sp.add_argument("--counts", default="4,8,12,16,20")
    sp.add_argument("--runs", type=int, default=10)
    sp.add_argument("--cap", type=int, default=4)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--metric", choices=METRIC_NAMES, default="sim_co")
    sp.add_argument("--min-sup", type=float, default=None)
    sp.add_argument("--parallel-mine", action="store_true")
    sp.add_argument("--include-matrix-time", action="store_true")
    sp.add_argument("-o", "--output", required=True)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        args.fn(args)
    except UsageError as exc:
        print(f"vpart: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except StrategyMismatchError as exc:
        print(f"vpart: internal correctness failure: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    except (DataError, MetricError, OSError, ValueError) as exc:
        print(f"vpart: {exc}", file=sys.stderr)
        return EXIT_DATA
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
