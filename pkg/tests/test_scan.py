import io
import json

import pytest

from dseq.core import Classification, DigitRule, analyze
from dseq.errors import MissingRecordsError, UnsupportedCountsError
from dseq.primes import PrimeRange, primes_in
from dseq.report_io import (
    CSV_HEADER,
    read_report,
    report_from_json,
    report_to_csv,
    report_to_json,
    series_to_csv,
    write_report,
    write_series,
)
from dseq.scan import (
    ScanOptions,
    bucketize,
    figure1_series,
    figure2_series,
    figure34_series,
    scan,
)

DIV = DigitRule.DIVISION
KAK = DigitRule.KAK


@pytest.fixture(scope="module")
def small_binary_report():
    return scan(ScanOptions(lo=7, hi=5000, base=2, keep_records=True))


@pytest.fixture(scope="module")
def small_ternary_report():
    return scan(ScanOptions(lo=7, hi=2000, base=3, keep_records=True))


# ------------------------------------------------- agreement with analyze


def test_scan_matches_naive_loop(small_binary_report):
    report = small_binary_report
    naive = [analyze(p, 2, DIV) for p in primes_in(PrimeRange(7, 5000))]
    assert report.population == len(naive)
    assert report.records == tuple(naive)
    assert report.totals.zeros_exceed == sum(
        1 for r in naive if r.classification == Classification.ZEROS_EXCEED
    )
    assert report.totals.ones_exceed == sum(
        1 for r in naive if r.classification == Classification.ONES_EXCEED
    )
    assert report.totals.equal == sum(
        1 for r in naive if r.classification == Classification.EQUAL
    )
    assert report.max_length_count == sum(1 for r in naive if r.max_length)
    assert report.unequal_nonmax_count == sum(
        1 for r in naive if not r.max_length and r.classification != Classification.EQUAL
    )


@pytest.mark.parametrize("rule", [DIV, KAK])
def test_ternary_scan_matches_naive_loop(rule):
    report = scan(ScanOptions(lo=7, hi=2000, base=3, rule=rule, keep_records=True))
    naive = tuple(analyze(p, 3, rule) for p in primes_in(PrimeRange(7, 2000)))
    assert report.records == naive
    assert report.totals is None
    assert report.derived is None
    assert report.unequal_nonmax_count is None
    assert report.max_length_count == sum(1 for r in naive if r.max_length)


def test_binary_kak_scan_matches_division(small_binary_report):
    kak = scan(ScanOptions(lo=7, hi=5000, base=2, rule=KAK, keep_records=True))
    assert kak.totals == small_binary_report.totals
    for a, b in zip(kak.records, small_binary_report.records):
        assert (a.p, a.counts, a.period) == (b.p, b.counts, b.period)


def test_scan_trivial_range():
    report = scan(ScanOptions(lo=7, hi=20, base=2, keep_records=True))
    assert report.population == 5
    assert [r.p for r in report.records] == [7, 11, 13, 17, 19]
    for rec in report.records:
        assert rec == analyze(rec.p, 2, DIV)


# ------------------------------------------------------------ aggregates


def test_totals_sum_to_population(small_binary_report):
    t = small_binary_report.totals
    assert t.zeros_exceed + t.ones_exceed + t.equal == small_binary_report.population


def test_derived_recomputable(small_binary_report):
    r = small_binary_report
    d = r.derived
    assert d.pct_zeros_exceed == pytest.approx(100.0 * r.totals.zeros_exceed / r.population)
    assert d.pct_ones_exceed == pytest.approx(100.0 * r.totals.ones_exceed / r.population)
    unequal = r.totals.zeros_exceed + r.totals.ones_exceed
    assert d.pct_unequal_all == pytest.approx(100.0 * unequal / r.population)
    assert d.pct_unequal_nonmax == pytest.approx(
        100.0 * r.unequal_nonmax_count / (r.population - r.max_length_count)
    )


def test_skipped_primes_counted():
    report = scan(ScanOptions(lo=2, hi=20, base=2, keep_records=True))
    assert report.skipped == 1  # p = 2
    assert report.population == 7
    assert all(r.p != 2 for r in report.records)
    report3 = scan(ScanOptions(lo=2, hi=20, base=3))
    assert report3.skipped == 1  # p = 3
    assert report3.population == 7


def test_empty_range_scan():
    report = scan(ScanOptions(lo=14, hi=16, base=2, keep_records=True))
    assert report.population == 0
    assert report.derived is None
    assert report.records == ()


def test_workers_do_not_change_report():
    opts = ScanOptions(lo=7, hi=20000, base=2, keep_records=True)
    r1 = scan(opts, workers=1)
    r4 = scan(opts, workers=4)
    assert report_to_json(r1) == report_to_json(r4)
    assert report_to_csv(r1) == report_to_csv(r4)


def test_workers_validation():
    with pytest.raises(ValueError):
        scan(ScanOptions(lo=7, hi=100), workers=0)


# ------------------------------------------------------------- bucketize


def test_bucketize_tiles_sum_to_totals(small_binary_report):
    bounds = ((1, 1000), (1001, 2500), (2501, 5000))
    rows = bucketize(small_binary_report, bounds)
    assert sum(r.zeros_greater for r in rows) == small_binary_report.totals.zeros_exceed
    assert sum(r.ones_greater for r in rows) == small_binary_report.totals.ones_exceed


def test_bucketize_bucket_with_no_primes(small_binary_report):
    rows = bucketize(small_binary_report, ((5001, 6000),))
    assert (rows[0].zeros_greater, rows[0].ones_greater) == (0, 0)


def test_bucketize_requires_records():
    report = scan(ScanOptions(lo=7, hi=100, base=2))
    with pytest.raises(MissingRecordsError):
        bucketize(report, ((1, 100),))


def test_bucketize_rejects_ternary(small_ternary_report):
    with pytest.raises(UnsupportedCountsError):
        bucketize(small_ternary_report, ((1, 100),))


def test_bucketize_rejects_bad_bounds(small_binary_report):
    with pytest.raises(ValueError):
        bucketize(small_binary_report, ((1, 100), (50, 200)))
    with pytest.raises(ValueError):
        bucketize(small_binary_report, ((100, 1),))


# ---------------------------------------------------------- figure series


def test_figure1_series_drops_equal_cases(small_binary_report):
    series = figure1_series(small_binary_report)
    points = dict(series)
    assert points[7] == pytest.approx(33.33, abs=0.01)
    assert 13 not in points  # equal counts
    assert all(v != 0 for _, v in series)
    assert [p for p, _ in series] == sorted(p for p, _ in series)


def test_figure2_series_is_positive_ones_exceed_only(small_binary_report):
    series = figure2_series(small_binary_report)
    assert all(v > 0 for _, v in series)
    ones = {r.p for r in small_binary_report.records if r.classification == Classification.ONES_EXCEED}
    assert {p for p, _ in series} == ones


def test_figure2_series_empty_on_zero_dominant_range():
    report = scan(ScanOptions(lo=7, hi=10, base=2, keep_records=True))
    assert figure2_series(report) == []


def test_figure34_series(small_ternary_report):
    series = figure34_series(small_ternary_report)
    by_p = {p: (r01, r02) for p, r01, r02 in series}
    assert by_p[7] == (1.0, 1.0)
    assert by_p[13] == (None, 2.0)


def test_figure_series_base_mismatch(small_binary_report, small_ternary_report):
    with pytest.raises(UnsupportedCountsError):
        figure1_series(small_ternary_report)
    with pytest.raises(UnsupportedCountsError):
        figure34_series(small_binary_report)


def test_figure_series_require_records():
    report = scan(ScanOptions(lo=7, hi=100, base=2))
    with pytest.raises(MissingRecordsError):
        figure1_series(report)


# ---------------------------------------------------------- serialization


def test_csv_header_and_rows(small_binary_report):
    text = report_to_csv(small_binary_report)
    lines = text.splitlines()
    assert lines[0] == "p,base,rule,period,n0,n1,n2,class,max_length,pct_diff"
    assert lines[0] == CSV_HEADER
    assert lines[1] == "7,2,division,3,2,1,,zeros_exceed,false,33.33"
    assert text.endswith("\n")


def test_csv_without_records_is_header_only():
    report = scan(ScanOptions(lo=7, hi=100, base=2))
    assert report_to_csv(report) == CSV_HEADER + "\n"


def test_json_round_trip(small_binary_report, small_ternary_report):
    for report in (small_binary_report, small_ternary_report):
        assert report_from_json(report_to_json(report)) == report


def test_json_round_trip_without_records():
    report = scan(ScanOptions(lo=7, hi=500, base=2))
    assert report_from_json(report_to_json(report)) == report


def test_write_report_to_path(tmp_path, small_binary_report):
    path = tmp_path / "report.json"
    write_report(small_binary_report, "json", path)
    assert read_report(path) == small_binary_report
    csv_path = tmp_path / "report.csv"
    write_report(small_binary_report, "csv", csv_path)
    assert csv_path.read_text().startswith(CSV_HEADER)


def test_write_report_unknown_format(small_binary_report):
    with pytest.raises(ValueError):
        write_report(small_binary_report, "xml", io.StringIO())


def test_json_top_level_fields(small_binary_report):
    doc = json.loads(report_to_json(small_binary_report))
    assert set(doc) == {
        "options",
        "totals",
        "population",
        "skipped",
        "max_length_count",
        "unequal_nonmax_count",
        "derived",
        "records",
    }
    assert set(doc["options"]) == {"lo", "hi", "base", "rule", "keep_records"}


def test_series_csv_formats():
    text = series_to_csv([(7, 33.333333), (23, 27.27272)], percent=True)
    assert text == "p,value\n7,33.33\n23,27.27\n"
    text = series_to_csv([(7, 1.0), (13, None), (17, 0.8333333333333334)], percent=False, count_undefined=True)
    assert text == "p,value\n7,1.0\n17,0.8333333333333334\n# undefined: 1\n"


def test_write_series(tmp_path):
    path = tmp_path / "series.csv"
    write_series([(7, 1.5)], percent=False, destination=path, count_undefined=True)
    assert path.read_text() == "p,value\n7,1.5\n# undefined: 0\n"


def test_scan_options_validation():
    with pytest.raises(ValueError):
        ScanOptions(lo=7, hi=100, base=5)
    with pytest.raises(ValueError):
        ScanOptions(lo=1, hi=100)
    with pytest.raises(ValueError):
        ScanOptions(lo=100, hi=7)
