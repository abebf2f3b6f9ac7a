import json

import pytest

from dseq import events as ev
from dseq.cli import main
from dseq.report_io import report_to_csv, report_to_json, series_to_csv
from dseq.scan import ScanOptions, figure1_series, figure34_series, scan


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# ------------------------------------------------------------- basic ops


def test_order(capsys):
    code, out, err = run_cli(capsys, "order", "--base", "2", "--prime", "8191")
    assert (code, out, err) == (0, "13\n", "")


def test_digits(capsys):
    code, out, _ = run_cli(capsys, "digits", "--base", "2", "--prime", "7", "--count", "6")
    assert (code, out) == (0, "001001\n")


def test_digits_kak_rule_ternary(capsys):
    code, out, _ = run_cli(
        capsys, "digits", "--base", "3", "--prime", "13", "--count", "3", "--rule", "kak"
    )
    assert (code, out) == (0, "001\n")


def test_analyze_binary(capsys):
    code, out, _ = run_cli(capsys, "analyze", "--base", "2", "--prime", "8191")
    assert code == 0
    assert out == (
        "p=8191 base=2 rule=division period=13 n0=12 n1=1 "
        "class=zeros_exceed max_length=false pct_diff=84.62\n"
    )


def test_analyze_ternary(capsys):
    code, out, _ = run_cli(capsys, "analyze", "--base", "3", "--prime", "7")
    assert code == 0
    assert out == "p=7 base=3 rule=division period=6 n0=2 n1=2 n2=2 max_length=true\n"


# ------------------------------------------------------------ exit codes


def test_unknown_flag_is_usage_error(capsys):
    code, _, err = run_cli(capsys, "order", "--base", "2", "--prime", "7", "--bogus")
    assert code == 1
    assert "error:" in err


def test_missing_subcommand_is_usage_error(capsys):
    code, _, err = run_cli(capsys)
    assert code == 1
    assert "error:" in err


def test_help_exits_zero(capsys):
    assert run_cli(capsys, "--help")[0] == 0
    assert run_cli(capsys, "scan", "--help")[0] == 0


def test_composite_prime_is_domain_error(capsys):
    code, out, err = run_cli(capsys, "analyze", "--base", "2", "--prime", "9")
    assert (code, out) == (2, "")
    assert err.startswith("error: ")


def test_base_divides_prime_is_domain_error(capsys):
    code, _, err = run_cli(capsys, "analyze", "--base", "2", "--prime", "2")
    assert code == 2
    assert err.startswith("error: ")


def test_unwritable_out_is_io_error(capsys):
    code, _, err = run_cli(
        capsys, "scan", "--base", "2", "--from", "7", "--to", "100", "--out", "/nonexistent/x.json"
    )
    assert code == 3
    assert err.startswith("error: ")


# ------------------------------------------------------------------ scan


def test_scan_json_stdout(capsys):
    code, out, _ = run_cli(capsys, "scan", "--base", "2", "--from", "7", "--to", "100")
    assert code == 0
    expected = report_to_json(scan(ScanOptions(lo=7, hi=100, base=2)))
    assert out == expected


def test_scan_csv_records(capsys):
    code, out, _ = run_cli(
        capsys, "scan", "--base", "2", "--from", "7", "--to", "100", "--records", "--format", "csv"
    )
    assert code == 0
    expected = report_to_csv(scan(ScanOptions(lo=7, hi=100, base=2, keep_records=True)))
    assert out == expected
    assert out.splitlines()[1] == "7,2,division,3,2,1,,zeros_exceed,false,33.33"


def test_scan_out_file(tmp_path, capsys):
    path = tmp_path / "r.json"
    code, out, _ = run_cli(
        capsys, "scan", "--base", "3", "--from", "7", "--to", "500", "--out", str(path)
    )
    assert (code, out) == (0, "")
    doc = json.loads(path.read_text())
    assert doc["totals"] is None
    assert doc["population"] > 0


def test_scan_deterministic_across_invocations(capsys):
    args = ("scan", "--base", "2", "--from", "7", "--to", "2000", "--records", "--format", "csv")
    _, out1, _ = run_cli(capsys, *args)
    _, out2, _ = run_cli(capsys, *args)
    assert out1 == out2


# ---------------------------------------------------------------- tables


def test_table1_summary_format(capsys):
    code, out, _ = run_cli(capsys, "table1", "--to", "5000")
    assert code == 0
    report = scan(ScanOptions(lo=7, hi=5000, base=2))
    lines = out.splitlines()
    assert lines[0] == "range: 7..5000  base: 2  rule: division"
    assert lines[1] == f"population: {report.population}  skipped: 0"
    assert lines[2] == (
        f"zeros_exceed: {report.totals.zeros_exceed} ({report.derived.pct_zeros_exceed:.2f}%)"
    )
    assert any(line.startswith("unequal_nonmax:") for line in lines)


def test_table2_rows(capsys):
    code, out, _ = run_cli(capsys, "table2")
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("#")
    data = [line.split() for line in lines[1:]]
    assert [(row[0], int(row[1]), int(row[2])) for row in data] == [
        ("1-10000", 320, 30),
        ("10001-20000", 256, 40),
        ("20001-30000", 265, 24),
        ("30001-40000", 251, 27),
        ("40001-50000", 240, 31),
        ("50001-60000", 245, 35),
        ("60001-65535", 131, 19),
    ]
    assert "1-10000 320 30" in out


# ------------------------------------------------------------- plot-data


def test_plot_data_figure1(capsys):
    code, out, _ = run_cli(capsys, "plot-data", "--figure", "1", "--to", "100")
    assert code == 0
    report = scan(ScanOptions(lo=7, hi=100, base=2, keep_records=True))
    assert out == series_to_csv(figure1_series(report), percent=True)
    assert out.splitlines()[1] == "7,33.33"


def test_plot_data_figure3_undefined_trailer(capsys):
    code, out, _ = run_cli(capsys, "plot-data", "--figure", "3", "--to", "200")
    assert code == 0
    report = scan(ScanOptions(lo=7, hi=200, base=3, keep_records=True))
    undefined = sum(1 for _, r01, _ in figure34_series(report) if r01 is None)
    assert undefined >= 1  # p = 13 has no 1 digits
    assert out.rstrip().splitlines()[-1] == f"# undefined: {undefined}"


def test_plot_data_figure4(capsys):
    code, out, _ = run_cli(capsys, "plot-data", "--figure", "4", "--to", "200")
    assert code == 0
    assert "7,1.0" in out


def test_plot_data_render(tmp_path, capsys):
    png = tmp_path / "fig1.png"
    code, out, _ = run_cli(
        capsys, "plot-data", "--figure", "1", "--to", "500", "--out", str(tmp_path / "s.csv"),
        "--render", str(png),
    )
    assert code == 0
    assert png.exists() and png.stat().st_size > 1000
    assert (tmp_path / "s.csv").read_text().startswith("p,value\n")


# ----------------------------------------------------------------- event


EVENT_ARGS = (
    "event", "--target", "0.1", "--epsilon", "0.01",
    "--range-from", "7", "--range-to", "2000", "--seed", "42", "--trials", "3",
)


def test_event_deterministic(capsys):
    _, out1, _ = run_cli(capsys, *EVENT_ARGS)
    _, out2, _ = run_cli(capsys, *EVENT_ARGS)
    assert out1 == out2


def test_event_output_verifies(capsys):
    code, out, _ = run_cli(capsys, *EVENT_ARGS)
    assert code == 0
    doc = json.loads(out)
    plan = ev.plan_from_dict(doc["plan"])
    assert len(doc["runs"]) == 3
    for run in doc["runs"]:
        transcript = ev.transcript_from_dict(run, plan)
        assert ev.verify_transcript(transcript, plan).ok


def test_event_unreachable_target_is_domain_error(capsys):
    code, _, err = run_cli(
        capsys, "event", "--target", "0.5", "--epsilon", "0.000001",
        "--range-from", "7", "--range-to", "2000", "--seed", "1", "--max-ops", "3",
    )
    assert code == 2
    assert err.startswith("error: ")
