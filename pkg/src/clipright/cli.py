"""Command-line entry point.

Subcommands: ingest, stats, classify, calibrate, evaluate, histogram,
simulate. All data goes to stdout (fixed precision: metrics to 3 decimals,
payouts in whole dollars), all errors to stderr. Exit codes: 0 success,
1 input error, 2 internal invariant violation. Output is deterministic:
identical inputs and flags produce byte-identical stdout.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

from .embedstore import load_store, save_store
from .errors import ClipRightError, ConfigError
from .metric import clip_metric
from .rulings import (
    LABEL_ORDER,
    DEFAULT_THRESHOLDS,
    MetricSource,
    RulingLabel,
    Thresholds,
    Verdict,
    class_stats,
    calibrate,
    classify,
    evaluate,
    expand_uncontested,
    load_cases,
    metric_for_pair,
)
from .scenario import load_scenario, run_comparison, run_scenario
from .schemes import CompensationReport, cents_to_whole_dollars


class _Parser(argparse.ArgumentParser):
    # exit-code contract: usage errors are input errors (1), not argparse's 2
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"error: {message}\n")


def _thresholds(args) -> Thresholds:
    try:
        return Thresholds(safe_max=args.safe_max, fair_use_max=args.fairuse_max)
    except ValueError as e:
        raise ConfigError(str(e)) from None


def _source(args) -> MetricSource:
    return MetricSource(args.source)


def _contested_values(pairs, store, source):
    return [metric_for_pair(p, store, source) for p in pairs]


def _print_csv_row(*cells):
    print(",".join(str(c) for c in cells))


# -- commands ---------------------------------------------------------------

def cmd_ingest(args) -> int:
    store = load_store(args.store)
    print(f"records={len(store)} model_id={store.model_id or ''} dim={store.dim or 0}")
    if args.out:
        save_store(store, args.out)
    return 0


def cmd_stats(args) -> int:
    pairs = load_cases(args.cases)
    store = load_store(args.store) if args.store else None
    values = _contested_values(pairs, store, _source(args))
    _print_csv_row("label", "count", "mean", "std_dev")
    for stat in class_stats(pairs, values):
        std = f"{stat.std_dev:.3f}" if stat.std_dev is not None else ""
        _print_csv_row(stat.label.value, stat.count, f"{stat.mean:.3f}", std)
    return 0


def cmd_classify(args) -> int:
    store = load_store(args.store)
    value = clip_metric(store.get(args.id_a), store.get(args.id_b))
    verdict = classify(value, _thresholds(args))
    print(f"{value:.3f} {verdict.value}")
    return 0


def _with_uncontested(pairs, store, source):
    """Contested pairs + generated uncontested cross-pairs, with values.

    Uncontested pairs have no recorded metric, so they are always computed
    from the store regardless of the contested-value source.
    """
    uncontested = expand_uncontested(pairs, store.work_ids())
    values = _contested_values(pairs, store, source)
    values += [
        metric_for_pair(p, store, MetricSource.COMPUTED) for p in uncontested
    ]
    return pairs + uncontested, values


def cmd_calibrate(args) -> int:
    pairs = load_cases(args.cases)
    store = load_store(args.store)
    all_pairs, values = _with_uncontested(pairs, store, _source(args))
    t = calibrate(all_pairs, values)
    _print_csv_row("safe_max", "fair_use_max")
    _print_csv_row(f"{t.safe_max:.2f}", f"{t.fair_use_max:.2f}")
    return 0


def cmd_evaluate(args) -> int:
    pairs = load_cases(args.cases)
    store = load_store(args.store) if args.store else None
    values = _contested_values(pairs, store, _source(args))
    summary = evaluate(pairs, values, _thresholds(args))
    _print_csv_row("label", *(v.value for v in Verdict))
    for label in LABEL_ORDER:
        if label not in summary.counts:
            continue
        row = summary.counts[label]
        _print_csv_row(label.value, *(row[v] for v in Verdict))
    print(f"accuracy {summary.correct}/{summary.total} = {summary.accuracy:.3f}")
    return 0


def cmd_histogram(args) -> int:
    if not args.bin_width > 0:
        raise ConfigError(f"bin width must be positive, got {args.bin_width}")
    pairs = load_cases(args.cases)
    store = load_store(args.store)
    all_pairs, values = _with_uncontested(pairs, store, _source(args))
    width = args.bin_width
    lo = math.floor(min(values) / width) * width
    n_bins = max(1, math.ceil((max(values) - lo) / width - 1e-12))
    counts = {label: [0] * n_bins for label in LABEL_ORDER}
    for pair, value in zip(all_pairs, values):
        idx = min(int((value - lo) / width), n_bins - 1)
        counts[pair.label][idx] += 1
    present = [label for label in LABEL_ORDER if any(counts[label])]
    _print_csv_row("bin_lo", "bin_hi", *(label.value for label in present))
    edges = [lo + k * width for k in range(n_bins + 1)]
    for k in range(n_bins):
        _print_csv_row(
            f"{edges[k]:.3f}",
            f"{edges[k + 1]:.3f}",
            *(counts[label][k] for label in present),
        )
    if args.plot:
        from .plots import render_histogram

        render_histogram(edges, {l.value: counts[l] for l in present}, args.plot)
    return 0


def _report_rows(report: CompensationReport):
    components: list[str] = []
    for parts in report.breakdown.values():
        for name in parts:
            if name not in components:
                components.append(name)
    header = ["holder_id", *(f"{c}_usd" for c in components), "total_usd"]
    rows = []
    for holder_id, total in report.per_holder.items():
        parts = report.breakdown[holder_id]
        rows.append(
            [
                holder_id,
                *(cents_to_whole_dollars(parts.get(c, 0)) for c in components),
                cents_to_whole_dollars(total),
            ]
        )
    return header, rows


def _print_table(header, rows):
    cells = [header] + [[str(c) for c in row] for row in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    for r, row in enumerate(cells):
        line = "  ".join(
            row[i].ljust(widths[i]) if i == 0 else row[i].rjust(widths[i])
            for i in range(len(row))
        )
        print(line.rstrip())
        if r == 0:
            print("  ".join("-" * w for w in widths))


def cmd_simulate(args) -> int:
    cfg = load_scenario(args.config)
    if cfg.scheme == "comparison":
        comparison = run_comparison(cfg)
        header = ["scheme", *comparison.holder_order]
        rows = [
            [label, *(cents_to_whole_dollars(rep.per_holder[h]) for h in comparison.holder_order)]
            for label, rep in comparison.rows
        ]
        payout_rows = [
            (label, {h: cents_to_whole_dollars(rep.per_holder[h]) for h in comparison.holder_order})
            for label, rep in comparison.rows
        ]
        holder_order = comparison.holder_order
    else:
        report = run_scenario(cfg)
        header, rows = _report_rows(report)
        holder_order = list(report.per_holder)
        payout_rows = [
            (report.scheme, {h: cents_to_whole_dollars(v) for h, v in report.per_holder.items()})
        ]
    if args.format == "csv":
        _print_csv_row(*header)
        for row in rows:
            _print_csv_row(*row)
    else:
        _print_table(header, rows)
    if args.plot:
        from .plots import render_payouts

        render_payouts(holder_order, payout_rows, args.plot)
    return 0


# -- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="clipright",
        description="similarity-based copyright risk metric and compensation simulator",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", parents=[], help="validate an embedding file")
    p.add_argument("--store", required=True, type=Path)
    p.add_argument("--out", type=Path, help="rewrite the store canonicalized (sorted)")
    p.set_defaults(func=cmd_ingest)

    def add_source(sp):
        sp.add_argument("--source", choices=["stored", "computed"], default="stored")

    def add_thresholds(sp):
        sp.add_argument("--safe-max", type=float, default=DEFAULT_THRESHOLDS.safe_max)
        sp.add_argument("--fairuse-max", type=float, default=DEFAULT_THRESHOLDS.fair_use_max)

    p = sub.add_parser("stats", help="per-ruling-class metric statistics (CSV)")
    p.add_argument("--cases", required=True, type=Path)
    p.add_argument("--store", type=Path)
    add_source(p)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("classify", help="metric + verdict for two works in a store")
    p.add_argument("id_a")
    p.add_argument("id_b")
    p.add_argument("--store", required=True, type=Path)
    add_thresholds(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("calibrate", help="midpoint threshold calibration from a dataset")
    p.add_argument("--cases", required=True, type=Path)
    p.add_argument("--store", required=True, type=Path)
    add_source(p)
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser("evaluate", help="confusion counts and ruling-consistency accuracy")
    p.add_argument("--cases", required=True, type=Path)
    p.add_argument("--store", type=Path)
    add_source(p)
    add_thresholds(p)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("histogram", help="binned per-label metric counts (CSV)")
    p.add_argument("--cases", required=True, type=Path)
    p.add_argument("--store", required=True, type=Path)
    p.add_argument("--bin-width", type=float, default=0.05)
    p.add_argument("--plot", type=Path, help="also render the histogram to this image file")
    add_source(p)
    p.set_defaults(func=cmd_histogram)

    p = sub.add_parser("simulate", help="run a compensation scenario file")
    p.add_argument("--config", required=True, type=Path)
    p.add_argument("--format", choices=["csv", "table"], default="csv")
    p.add_argument("--plot", type=Path, help="also render payouts to this image file")
    p.set_defaults(func=cmd_simulate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ClipRightError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except Exception as e:  # pragma: no cover - invariant violations
        print(f"internal error: {type(e).__name__}: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
