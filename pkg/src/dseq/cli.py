"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 domain error, 3 I/O error.
All diagnostics go to stderr with an ``error:`` prefix; data streams stay
clean and are byte-identical across runs for identical flags and seed.
"""
from __future__ import annotations

import argparse
import json
import sys
from contextlib import contextmanager

from . import events as ev
from . import report_io
from .core import Classification, DigitRule, analyze, digits, multiplicative_order
from .errors import DseqError
from .primes import PrimeRange, is_prime
from .scan import (
    FIGURE_RANGE,
    FULL_RANGE,
    TABLE_BUCKETS,
    ScanOptions,
    bucketize,
    figure1_series,
    figure2_series,
    figure34_series,
    scan,
)


class _Parser(argparse.ArgumentParser):
    """argparse variant with exit code 1 and an ``error:`` diagnostic line."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(1)


@contextmanager
def _out_stream(path):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            yield fh


def _rule(args) -> DigitRule:
    return DigitRule(getattr(args, "rule", "division"))


def _require_prime(p: int) -> int:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    return p


def _cmd_order(args) -> int:
    p = _require_prime(args.prime)
    print(multiplicative_order(args.base, p))
    return 0


def _cmd_digits(args) -> int:
    p = _require_prime(args.prime)
    seq = digits(args.base, p, args.count, _rule(args))
    print("".join(str(d) for d in seq))
    return 0


def _cmd_analyze(args) -> int:
    record = analyze(_require_prime(args.prime), args.base, _rule(args))
    parts = [
        f"p={record.p}",
        f"base={record.base}",
        f"rule={record.rule.value}",
        f"period={record.period}",
        f"n0={record.counts.n0}",
        f"n1={record.counts.n1}",
    ]
    if record.base == 3:
        parts.append(f"n2={record.counts.n2}")
    if record.classification is not None:
        parts.append(f"class={record.classification.value}")
    parts.append(f"max_length={'true' if record.max_length else 'false'}")
    if record.pct_diff is not None:
        parts.append(f"pct_diff={record.pct_diff:.2f}")
    print(" ".join(parts))
    return 0


def _cmd_scan(args) -> int:
    options = ScanOptions(
        lo=args.lo, hi=args.hi, base=args.base, rule=_rule(args), keep_records=args.records
    )
    report = scan(options, workers=args.workers)
    with _out_stream(args.out) as fh:
        report_io.write_report(report, args.format, fh)
    return 0


def _summary_lines(report) -> list[str]:
    o = report.options
    t = report.totals
    d = report.derived
    lines = [
        f"range: {o.lo}..{o.hi}  base: {o.base}  rule: {o.rule.value}",
        f"population: {report.population}  skipped: {report.skipped}",
        f"zeros_exceed: {t.zeros_exceed} ({d.pct_zeros_exceed:.2f}%)",
        f"ones_exceed: {t.ones_exceed} ({d.pct_ones_exceed:.2f}%)",
        f"equal: {t.equal} ({100.0 * t.equal / report.population:.2f}%)",
        f"max_length: {report.max_length_count} "
        f"({100.0 * report.max_length_count / report.population:.2f}%)",
        f"unequal_all: {t.zeros_exceed + t.ones_exceed} ({d.pct_unequal_all:.2f}%)",
    ]
    if d.pct_unequal_nonmax is not None:
        lines.append(
            f"unequal_nonmax: {report.unequal_nonmax_count} "
            f"({d.pct_unequal_nonmax:.2f}% of non-max-length)"
        )
    return lines


def _cmd_table1(args) -> int:
    options = ScanOptions(lo=args.lo, hi=args.hi, base=2, rule=_rule(args))
    report = scan(options, workers=args.workers)
    with _out_stream(args.out) as fh:
        for line in _summary_lines(report):
            fh.write(line + "\n")
    return 0


def _cmd_table2(args) -> int:
    options = ScanOptions(lo=args.lo, hi=args.hi, base=2, rule=_rule(args), keep_records=True)
    report = scan(options, workers=args.workers)
    rows = bucketize(report, TABLE_BUCKETS)
    with _out_stream(args.out) as fh:
        fh.write("# range zeros_greater ones_greater equal(extension)\n")
        for row in rows:
            equal = sum(
                1
                for r in report.records
                if row.lo <= r.p <= row.hi and r.classification == Classification.EQUAL
            )
            fh.write(f"{row.lo}-{row.hi} {row.zeros_greater} {row.ones_greater} {equal}\n")
    return 0


def _cmd_plot_data(args) -> int:
    binary = args.figure in (1, 2)
    options = ScanOptions(
        lo=args.lo, hi=args.hi, base=2 if binary else 3, rule=_rule(args), keep_records=True
    )
    report = scan(options, workers=args.workers)
    if args.figure == 1:
        series = figure1_series(report)
    elif args.figure == 2:
        series = figure2_series(report)
    else:
        triples = figure34_series(report)
        idx = 1 if args.figure == 3 else 2
        series = [(p_r01_r02[0], p_r01_r02[idx]) for p_r01_r02 in triples]
    with _out_stream(args.out) as fh:
        report_io.write_series(series, percent=binary, destination=fh, count_undefined=not binary)
    if args.render is not None:
        from . import figures

        figures.render_series(args.figure, [(p, v) for p, v in series if v is not None], args.render)
    return 0


def _cmd_event(args) -> int:
    prime_range = PrimeRange(args.range_from, args.range_to)
    q = ev.estimate_q(prime_range)
    plan = ev.build_plan(
        args.target, q, args.epsilon, max_ops=args.max_ops, prime_range=prime_range
    )
    sampler = ev.AnomalySampler(prime_range)
    if args.trials * plan.leaf_count > 32:
        sampler.warm()
    runs = []
    for k in range(args.trials):
        transcript = ev.run_event(plan, ev.derive_run_seed(args.seed, k), sampler=sampler)
        runs.append(ev.transcript_to_dict(transcript))
    doc = {
        "plan": ev.plan_to_dict(plan),
        "target": str(ev.to_fraction(args.target)),
        "epsilon": str(ev.to_fraction(args.epsilon)),
        "seed": args.seed,
        "runs": runs,
    }
    with _out_stream(args.out) as fh:
        fh.write(json.dumps(doc, indent=2) + "\n")
    return 0


def _add_base(p, required=True):
    p.add_argument("--base", type=int, choices=(2, 3), required=required, help="radix (2 or 3)")


def _add_rule(p):
    p.add_argument(
        "--rule",
        choices=("division", "kak"),
        default="division",
        help="digit rule: long-division digits or (b^i mod p) mod b",
    )


def _add_workers(p):
    p.add_argument("--workers", type=int, default=1, help="parallel worker processes")


def _add_out(p):
    p.add_argument("--out", default=None, help="write output to this path instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dseq", description="Digit statistics of prime reciprocals")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("order", help="multiplicative order of the base mod a prime")
    _add_base(p)
    p.add_argument("--prime", type=int, required=True)
    p.set_defaults(func=_cmd_order)

    p = sub.add_parser("digits", help="leading digits of 1/p")
    _add_base(p)
    p.add_argument("--prime", type=int, required=True)
    p.add_argument("--count", type=int, required=True)
    _add_rule(p)
    p.set_defaults(func=_cmd_digits)

    p = sub.add_parser("analyze", help="full single-prime analysis")
    _add_base(p)
    p.add_argument("--prime", type=int, required=True)
    _add_rule(p)
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("scan", help="scan a prime range and report aggregates")
    _add_base(p)
    p.add_argument("--from", dest="lo", type=int, required=True)
    p.add_argument("--to", dest="hi", type=int, required=True)
    _add_rule(p)
    p.add_argument("--records", action="store_true", help="keep per-prime records")
    _add_workers(p)
    p.add_argument("--format", choices=("csv", "json"), default="json")
    _add_out(p)
    p.set_defaults(func=_cmd_scan)

    p = sub.add_parser("table1", help="classification summary over the full default range")
    p.add_argument("--from", dest="lo", type=int, default=FULL_RANGE.lo)
    p.add_argument("--to", dest="hi", type=int, default=FULL_RANGE.hi)
    _add_rule(p)
    _add_workers(p)
    _add_out(p)
    p.set_defaults(func=_cmd_table1)

    p = sub.add_parser("table2", help="zeros/ones bucket table over the figure range")
    p.add_argument("--from", dest="lo", type=int, default=FIGURE_RANGE.lo)
    p.add_argument("--to", dest="hi", type=int, default=FIGURE_RANGE.hi)
    _add_rule(p)
    _add_workers(p)
    _add_out(p)
    p.set_defaults(func=_cmd_table2)

    p = sub.add_parser("plot-data", help="emit a figure data series as CSV")
    p.add_argument("--figure", type=int, choices=(1, 2, 3, 4), required=True)
    p.add_argument("--from", dest="lo", type=int, default=FIGURE_RANGE.lo)
    p.add_argument("--to", dest="hi", type=int, default=FIGURE_RANGE.hi)
    _add_rule(p)
    _add_workers(p)
    _add_out(p)
    p.add_argument("--render", default=None, help="also render the series to this image path")
    p.set_defaults(func=_cmd_plot_data)

    p = sub.add_parser("event", help="build, run, and serialize a probability event")
    p.add_argument("--target", required=True, help="target probability, e.g. 0.1")
    p.add_argument("--epsilon", required=True, help="acceptable |predicted - target|")
    p.add_argument("--range-from", type=int, required=True)
    p.add_argument("--range-to", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--trials", type=int, default=1, help="number of event runs")
    p.add_argument("--max-ops", type=int, default=ev.DEFAULT_MAX_OPS)
    _add_out(p)
    p.set_defaults(func=_cmd_event)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.func(args)
    except (DseqError, ValueError, ZeroDivisionError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
