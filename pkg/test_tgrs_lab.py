import io
import json

import pytest

import codes.linear_code as linear_code
import tgrs_lab
from codes.covering import load_leader_weights
from datalogging import ScanArchive
from reports import CheckReportModel, ScanReportModel, emit_report, parse_report

Q11 = ["--field", "11", "--n", "6", "--k", "3", "--h", "1", "--alpha", "0,1,2,3,4,5"]
Q5 = ["--field", "5", "--n", "5", "--k", "3", "--h", "1", "--alpha", "0,1,2,3,4"]


def run(argv):
    out = io.StringIO()
    status = tgrs_lab.main(argv, stdout=out)
    return status, out.getvalue()


def test_scan_mds_finds_the_single_pair():
    status, text = run(["scan-mds", *Q11, "--cross-validate"])
    assert status == 0
    report = parse_report(text)
    assert isinstance(report, ScanReportModel)
    assert [(p.eta, p.delta) for p in report.pairs] == [("4", "7")]
    assert report.cross_checked == 100


def test_check_amds():
    status, text = run(["check-amds", *Q5, "--eta", "1", "--delta", "1", "--cross-validate"])
    assert status == 0
    report = parse_report(text)
    assert isinstance(report, CheckReportModel)
    assert report.result.verdict
    assert report.brute_force == "AMDS"


def test_check_mds_reports_failing_condition():
    status, text = run(["check-mds", *Q11, "--eta", "1", "--delta", "1"])
    assert status == 0
    result = json.loads(text)["result"]
    assert not result["verdict"]
    assert result["conditions"]


def test_deep_hole_report():
    argv = ["deep-hole", "--field", "13", "--n", "6", "--k", "3", "--h", "1", "--alpha", "1,2,3,7,8,9",
            "--eta", "9", "--delta", "2", "--a", "2", "--b", "7"]
    status, text = run(argv)
    assert status == 0
    report = parse_report(text)
    assert report.result.verdict and report.radius == 5
    assert report.hole == ["1", "8", "1", "5", "5", "1", "2", "7"]


@pytest.mark.parametrize("argv", [
    ["scan-mds", "--n", "6", "--k", "3", "--h", "1", "--alpha", "0,1,2,3,4,5"],
    ["scan-mds", "--field", "11", "--n", "6", "--k", "3", "--h", "2", "--alpha", "0,1,2,3,4,5"],
    ["check-mds", *Q11],
    ["check-mds", *Q11, "--eta", "11", "--delta", "1"],
    ["scan-mds", "--field", "6", "--n", "5", "--k", "3", "--h", "1", "--alpha", "0,1,2,3,4"],
    ["no-such-verb"],
])
def test_usage_errors(argv):
    status, text = run(argv)
    assert status == 2
    assert text == ""


def test_budget_exit(monkeypatch):
    monkeypatch.setattr(linear_code, "MESSAGE_BUDGET", 10)
    status, _ = run(["min-distance", *Q11, "--eta", "4", "--delta", "7"])
    assert status == 3


def test_cross_check_exit(monkeypatch):
    monkeypatch.setattr(tgrs_lab, "brute_force_verdict", lambda P, target, a, b: (False, "neither"))
    status, _ = run(["check-mds", *Q11, "--eta", "4", "--delta", "7", "--cross-validate"])
    assert status == 4


def test_min_distance():
    status, text = run(["min-distance", *Q11, "--eta", "4", "--delta", "7"])
    assert status == 0
    report = parse_report(text)
    assert report.d == 6 and report.code_class == "MDS"
    assert sum(w != "0" for w in report.witness) == 6


def test_non_grs_certificates():
    status, text = run(["non-grs", *Q11, "--eta", "4", "--delta", "7"])
    assert status == 0
    certificates = {c.kind: c for c in parse_report(text).certificates}
    assert len(certificates) == 2
    assert any(c.applicable and c.valid for c in certificates.values())


def test_csv_scan():
    status, text = run(["scan-amds", *Q5, "--format", "csv"])
    assert status == 0
    lines = text.splitlines()
    assert lines[0] == "eta,delta,verdict,first_failing_condition"
    assert len(lines) == 13
    assert all(line.split(",")[2] == "true" for line in lines[1:])


def test_output_is_deterministic_across_workers():
    _, one = run(["scan-amds", *Q5, "--workers", "1"])
    _, many = run(["scan-amds", *Q5, "--workers", "4"])
    _, again = run(["scan-amds", *Q5, "--workers", "1"])
    assert one == many == again


def test_report_text_round_trips():
    _, text = run(["scan-amds", *Q5])
    assert emit_report(parse_report(text)) == text


def test_workers_from_environment(monkeypatch):
    monkeypatch.setenv(tgrs_lab.WORKERS_ENV, "3")
    assert tgrs_lab.default_workers() == 3
    monkeypatch.setenv(tgrs_lab.WORKERS_ENV, "lots")
    assert tgrs_lab.default_workers() == tgrs_lab.DEFAULT_WORKERS


def test_archive_flag(tmp_path):
    db = str(tmp_path / "scans.db")
    status, _ = run(["scan-amds", *Q5, "--archive", db])
    assert status == 0
    runs = ScanArchive(db).runs()
    assert len(runs) == 1 and runs[0][4] == 12


def test_dump_table(tmp_path):
    path = tmp_path / "cosets.bin"
    status, text = run(["covering-radius", *Q11, "--eta", "4", "--delta", "7", "--dump-table", str(path)])
    assert status == 0
    report = parse_report(text)
    header, weights = load_leader_weights(path)
    assert header["entries"] == 11 ** 5
    assert int(weights.max()) == report.radius
    assert sum(report.coset_histogram) == 11 ** 5


@pytest.mark.slow
@pytest.mark.parametrize("target", ["table1", "table2", "sec5"])
def test_reproduce(target):
    status, text = run(["reproduce", target])
    report = parse_report(text)
    assert status == 0 and report.passed
    assert all(row.passed for row in report.rows)
