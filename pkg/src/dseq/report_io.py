"""Bit-stable serialization of scan reports and plot series.

CSV carries the per-prime record table (header only when no records were
kept); JSON carries the whole report and round-trips exactly. Percentages
are printed with two fraction digits in CSV; JSON keeps full floats so a
parsed report compares equal to the original.
"""
from __future__ import annotations

import json
from contextlib import contextmanager
from pathlib import Path

from .core import Classification, DigitCounts, DigitRule, DSeqRecord
from .scan import ClassTotals, DerivedStats, ScanOptions, ScanReport

CSV_HEADER = "p,base,rule,period,n0,n1,n2,class,max_length,pct_diff"


@contextmanager
def _open_dest(destination, mode="w"):
    if isinstance(destination, (str, Path)):
        with open(destination, mode, encoding="utf-8", newline="") as fh:
            yield fh
    else:
        yield destination


def _record_csv_row(r: DSeqRecord) -> str:
    n2 = str(r.counts.counts[2]) if r.base == 3 else ""
    cls = r.classification.value if r.classification is not None else ""
    pct = f"{r.pct_diff:.2f}" if r.pct_diff is not None else ""
    return (
        f"{r.p},{r.base},{r.rule.value},{r.period},"
        f"{r.counts.n0},{r.counts.n1},{n2},{cls},"
        f"{'true' if r.max_length else 'false'},{pct}"
    )


def report_to_csv(report: ScanReport) -> str:
    lines = [CSV_HEADER]
    for rec in report.records or ():
        lines.append(_record_csv_row(rec))
    return "\n".join(lines) + "\n"


def _record_to_dict(r: DSeqRecord) -> dict:
    return {
        "p": r.p,
        "base": r.base,
        "rule": r.rule.value,
        "period": r.period,
        "n0": r.counts.n0,
        "n1": r.counts.n1,
        "n2": r.counts.counts[2] if r.base == 3 else None,
        "class": r.classification.value if r.classification is not None else None,
        "max_length": r.max_length,
        "pct_diff": r.pct_diff,
    }


def _record_from_dict(d: dict) -> DSeqRecord:
    base = d["base"]
    counts = (d["n0"], d["n1"]) if base == 2 else (d["n0"], d["n1"], d["n2"])
    return DSeqRecord(
        p=d["p"],
        base=base,
        rule=DigitRule(d["rule"]),
        period=d["period"],
        counts=DigitCounts(base=base, counts=counts, period=d["period"]),
        classification=Classification(d["class"]) if d["class"] is not None else None,
        max_length=d["max_length"],
        pct_diff=d["pct_diff"],
    )


def report_to_dict(report: ScanReport) -> dict:
    o = report.options
    return {
        "options": {
            "lo": o.lo,
            "hi": o.hi,
            "base": o.base,
            "rule": o.rule.value,
            "keep_records": o.keep_records,
        },
        "totals": None
        if report.totals is None
        else {
            "zeros_exceed": report.totals.zeros_exceed,
            "ones_exceed": report.totals.ones_exceed,
            "equal": report.totals.equal,
        },
        "population": report.population,
        "skipped": report.skipped,
        "max_length_count": report.max_length_count,
        "unequal_nonmax_count": report.unequal_nonmax_count,
        "derived": None
        if report.derived is None
        else {
            "pct_zeros_exceed": report.derived.pct_zeros_exceed,
            "pct_ones_exceed": report.derived.pct_ones_exceed,
            "pct_unequal_all": report.derived.pct_unequal_all,
            "pct_unequal_nonmax": report.derived.pct_unequal_nonmax,
        },
        "records": None if report.records is None else [_record_to_dict(r) for r in report.records],
    }


def report_from_dict(d: dict) -> ScanReport:
    o = d["options"]
    options = ScanOptions(
        lo=o["lo"],
        hi=o["hi"],
        base=o["base"],
        rule=DigitRule(o["rule"]),
        keep_records=o["keep_records"],
    )
    totals = d["totals"]
    derived = d["derived"]
    return ScanReport(
        options=options,
        totals=None if totals is None else ClassTotals(**totals),
        population=d["population"],
        skipped=d["skipped"],
        max_length_count=d["max_length_count"],
        unequal_nonmax_count=d["unequal_nonmax_count"],
        derived=None if derived is None else DerivedStats(**derived),
        records=None if d["records"] is None else tuple(_record_from_dict(r) for r in d["records"]),
    )


def report_to_json(report: ScanReport) -> str:
    return json.dumps(report_to_dict(report), indent=2) + "\n"


def report_from_json(text: str) -> ScanReport:
    return report_from_dict(json.loads(text))


def write_report(report: ScanReport, fmt: str, destination) -> None:
    """Serialize ``report`` as ``fmt`` ("csv" or "json") to a path or file object."""
    if fmt == "csv":
        payload = report_to_csv(report)
    elif fmt == "json":
        payload = report_to_json(report)
    else:
        raise ValueError(f"unknown report format {fmt!r}")
    with _open_dest(destination) as fh:
        fh.write(payload)


def read_report(source) -> ScanReport:
    """Parse a JSON report previously produced by write_report."""
    with _open_dest(source, mode="r") as fh:
        return report_from_json(fh.read())


def series_to_csv(series, percent: bool, count_undefined: bool = False) -> str:
    """Render a plot series as ``p,value`` rows.

    ``series`` holds (p, value-or-None) pairs; None rows are omitted and,
    when ``count_undefined`` is set, tallied in a trailing comment line.
    Percent values are fixed to two fraction digits; ratios keep the
    shortest exact float form.
    """
    lines = ["p,value"]
    undefined = 0
    for p, value in series:
        if value is None:
            undefined += 1
            continue
        lines.append(f"{p},{value:.2f}" if percent else f"{p},{value!r}")
    if count_undefined:
        lines.append(f"# undefined: {undefined}")
    return "\n".join(lines) + "\n"


def write_series(series, percent: bool, destination, count_undefined: bool = False) -> None:
    with _open_dest(destination) as fh:
        fh.write(series_to_csv(series, percent, count_undefined))
