"""Range scans: per-prime analysis in bulk, aggregation, tables, figure series."""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import _engine
from .core import Classification, DigitCounts, DigitRule, DSeqRecord
from .errors import MissingRecordsError, UnsupportedCountsError
from .primes import PrimeRange, primes_in_array

# Bounds reproducing the published range tables.
FULL_RANGE = PrimeRange(7, 999_983)
FIGURE_RANGE = PrimeRange(7, 65_535)
TABLE_BUCKETS = (
    (1, 10_000),
    (10_001, 20_000),
    (20_001, 30_000),
    (30_001, 40_000),
    (40_001, 50_000),
    (50_001, 60_000),
    (60_001, 65_535),
)


@dataclass(frozen=True)
class ScanOptions:
    """What to scan. Execution details (worker count) are not part of the result."""

    lo: int
    hi: int
    base: int = 2
    rule: DigitRule = DigitRule.DIVISION
    keep_records: bool = False

    def __post_init__(self):
        PrimeRange(self.lo, self.hi)  # validates bounds
        if self.base not in (2, 3):
            raise ValueError(f"base must be 2 or 3, got {self.base}")

    @property
    def range(self) -> PrimeRange:
        return PrimeRange(self.lo, self.hi)


@dataclass(frozen=True)
class ClassTotals:
    zeros_exceed: int
    ones_exceed: int
    equal: int


@dataclass(frozen=True)
class DerivedStats:
    pct_zeros_exceed: float
    pct_ones_exceed: float
    pct_unequal_all: float
    pct_unequal_nonmax: float | None


@dataclass(frozen=True)
class BucketRow:
    """One table row: prime-value range with zeros-greater / ones-greater tallies."""

    lo: int
    hi: int
    zeros_greater: int
    ones_greater: int


@dataclass(frozen=True)
class ScanReport:
    options: ScanOptions
    totals: ClassTotals | None  # binary scans only
    population: int
    skipped: int
    max_length_count: int
    unequal_nonmax_count: int | None  # binary scans only
    derived: DerivedStats | None  # binary scans only
    records: tuple[DSeqRecord, ...] | None


# worker-process state: smallest-prime-factor table shared by all chunks
_SPF: np.ndarray | None = None


def _init_worker(hi: int) -> None:
    global _SPF
    _SPF = _engine.spf_array(hi)


def _scan_chunk(args):
    primes, base, rule_value, keep_records = args
    rule = DigitRule(rule_value)
    spf = _SPF if _SPF is not None else _engine.spf_array(int(primes.max()))
    orders = _engine.orders_for(primes, base, spf)
    max_length = orders == (primes - 1)
    if base == 2:
        n0, n1 = _engine.binary_scan_counts(primes, orders)
        cls = np.zeros(len(primes), dtype=np.int8)
        cls[n0 > n1] = 1
        cls[n1 > n0] = 2
        tallies = (
            int((cls == 1).sum()),
            int((cls == 2).sum()),
            int((cls == 0).sum()),
            int(((cls != 0) & ~max_length).sum()),
        )
        columns = (n0, n1)
    else:
        n0, n1, n2 = _engine.ternary_scan_counts(primes, orders)
        if rule == DigitRule.KAK:
            swap = primes % 3 == 1
            n1, n2 = np.where(swap, n2, n1), np.where(swap, n1, n2)
        cls = None
        tallies = None
        columns = (n0, n1, n2)
    records = None
    if keep_records:
        records = _build_records(primes, base, rule, orders, columns, cls, max_length)
    return tallies, int(max_length.sum()), records


def _build_records(primes, base, rule, orders, columns, cls, max_length):
    class_by_code = {1: Classification.ZEROS_EXCEED, 2: Classification.ONES_EXCEED, 0: Classification.EQUAL}
    out = []
    for k in range(len(primes)):
        counts = tuple(int(col[k]) for col in columns)
        period = int(orders[k])
        dc = DigitCounts(base=base, counts=counts, period=period)
        if base == 2:
            classification = class_by_code[int(cls[k])]
            pct = 100.0 * (counts[0] - counts[1]) / period
        else:
            classification = None
            pct = None
        out.append(
            DSeqRecord(
                p=int(primes[k]),
                base=base,
                rule=rule,
                period=period,
                counts=dc,
                classification=classification,
                max_length=bool(max_length[k]),
                pct_diff=pct,
            )
        )
    return out


def scan(options: ScanOptions, workers: int | None = 1) -> ScanReport:
    """Analyze every prime in the range and aggregate.

    ``workers`` is 1 for inline execution, N for a process pool, or None
    for one worker per CPU. The report is identical for any worker count.
    """
    if workers is None:
        workers = os.cpu_count() or 1
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers}")
    primes = primes_in_array(options.range)
    usable = primes[options.base % primes != 0]
    skipped = len(primes) - len(usable)

    chunks = _split(usable, workers)
    task_args = [(chunk, options.base, options.rule.value, options.keep_records) for chunk in chunks]
    if workers == 1 or len(chunks) <= 1:
        _init_worker(options.hi)
        results = [_scan_chunk(a) for a in task_args]
    else:
        with ProcessPoolExecutor(max_workers=workers, initializer=_init_worker, initargs=(options.hi,)) as pool:
            results = list(pool.map(_scan_chunk, task_args))

    population = len(usable)
    max_length_count = sum(r[1] for r in results)
    records = None
    if options.keep_records:
        records = tuple(rec for r in results for rec in r[2])

    if options.base == 2:
        ze = sum(r[0][0] for r in results)
        oe = sum(r[0][1] for r in results)
        eq = sum(r[0][2] for r in results)
        unequal_nonmax = sum(r[0][3] for r in results)
        totals = ClassTotals(zeros_exceed=ze, ones_exceed=oe, equal=eq)
        derived = _derive(totals, population, max_length_count, unequal_nonmax)
    else:
        totals = None
        unequal_nonmax = None
        derived = None

    return ScanReport(
        options=options,
        totals=totals,
        population=population,
        skipped=skipped,
        max_length_count=max_length_count,
        unequal_nonmax_count=unequal_nonmax,
        derived=derived,
        records=records,
    )


def _split(arr: np.ndarray, workers: int) -> list[np.ndarray]:
    if len(arr) == 0:
        return [arr]
    n_chunks = 1 if workers == 1 else min(workers * 4, max(1, len(arr) // 1024))
    return [c for c in np.array_split(arr, n_chunks) if len(c)]


def _derive(totals: ClassTotals, population: int, max_length_count: int, unequal_nonmax: int) -> DerivedStats | None:
    if population == 0:
        return None
    unequal = totals.zeros_exceed + totals.ones_exceed
    nonmax = population - max_length_count
    return DerivedStats(
        pct_zeros_exceed=100.0 * totals.zeros_exceed / population,
        pct_ones_exceed=100.0 * totals.ones_exceed / population,
        pct_unequal_all=100.0 * unequal / population,
        pct_unequal_nonmax=100.0 * unequal_nonmax / nonmax if nonmax > 0 else None,
    )


def _require_records(report: ScanReport) -> tuple[DSeqRecord, ...]:
    if report.records is None:
        raise MissingRecordsError("scan was run without keep_records; per-prime records required")
    return report.records


def bucketize(report: ScanReport, bounds=TABLE_BUCKETS) -> list[BucketRow]:
    """Tally zeros-greater / ones-greater records into value-range buckets.

    Equal-count records are excluded; buckets must be ascending and
    non-overlapping.
    """
    records = _require_records(report)
    if report.options.base != 2:
        raise UnsupportedCountsError("bucket tallies are defined for binary scans only")
    prev_hi = None
    for lo, hi in bounds:
        if lo > hi or (prev_hi is not None and lo <= prev_hi):
            raise ValueError(f"bucket bounds must be ascending and non-overlapping: {bounds}")
        prev_hi = hi
    rows = []
    for lo, hi in bounds:
        ze = sum(1 for r in records if lo <= r.p <= hi and r.classification == Classification.ZEROS_EXCEED)
        oe = sum(1 for r in records if lo <= r.p <= hi and r.classification == Classification.ONES_EXCEED)
        rows.append(BucketRow(lo=lo, hi=hi, zeros_greater=ze, ones_greater=oe))
    return rows


def figure1_series(report: ScanReport) -> list[tuple[int, float]]:
    """(p, signed % difference) for every record where 0s and 1s differ."""
    records = _require_records(report)
    if report.options.base != 2:
        raise UnsupportedCountsError("percentage-difference series requires a binary scan")
    return [(r.p, r.pct_diff) for r in records if r.pct_diff != 0.0]


def figure2_series(report: ScanReport) -> list[tuple[int, float]]:
    """(p, |% difference|) restricted to records where 1s exceed 0s."""
    records = _require_records(report)
    if report.options.base != 2:
        raise UnsupportedCountsError("percentage-difference series requires a binary scan")
    return [(r.p, -r.pct_diff) for r in records if r.classification == Classification.ONES_EXCEED]


def figure34_series(report: ScanReport) -> list[tuple[int, float | None, float | None]]:
    """(p, n0/n1, n0/n2) per ternary record; None marks an undefined ratio."""
    records = _require_records(report)
    if report.options.base != 3:
        raise UnsupportedCountsError("digit-ratio series requires a ternary scan")
    out = []
    for r in records:
        r01 = r.counts.n0 / r.counts.n1 if r.counts.n1 > 0 else None
        r02 = r.counts.n0 / r.counts.n2 if r.counts.n2 > 0 else None
        out.append((r.p, r01, r02))
    return out
