"""The catalog-wide verification sweep as seen by a caller."""

import pytest

from racklat.verify import (VerificationReport, preferred_mode, run_group_checks,
                            verify_catalog)
from conftest import group

BASE_CHECKS = ["class-sizes", "commuting-atoms", "center", "centralizers",
               "abelian-sets", "normal-abelian-sets", "m-set", "subrack-count",
               "mode-agreement", "nilpotence-class", "partition-survey",
               "p-nilpotence"]


@pytest.fixture(scope="module")
def sweep8():
    return verify_catalog(8, parallel=False)


def test_order_eight_sweep_fully_green(sweep8):
    assert sweep8.passed
    n_pass, n_fail, n_skip = sweep8.counts()
    assert n_fail == 0 and n_skip == 0
    assert len(sweep8.groups) == 14


def test_every_check_appears_once_per_group(sweep8):
    for gv in sweep8.groups:
        names = [c.name for c in gv.checks]
        assert len(names) == len(set(names))
        expected = list(BASE_CHECKS)
        if gv.name == "S3":
            expected.append("s3-goldens")
        g = group(gv.name)
        if g.center_mask.bit_count() == 1:
            expected.append("cycle-form-properties")
        assert names == expected


def test_trivial_group_report():
    rep = verify_catalog(1, parallel=False)
    assert rep.passed
    assert [g.name for g in rep.groups] == ["Z1"]


def test_report_text_is_byte_stable():
    a = verify_catalog(4, parallel=False).to_text()
    b = verify_catalog(4, parallel=False).to_text()
    assert a == b
    assert "seconds" not in a


def test_report_json_carries_timings():
    rep = verify_catalog(2, parallel=False)
    d = rep.to_json_dict()
    assert d["passed"] is True
    for gv in d["groups"]:
        for c in gv["checks"]:
            assert "seconds" in c


def test_summary_line_counts(sweep8):
    text = sweep8.to_text()
    last = text.strip().splitlines()[-1]
    n_pass, n_fail, n_skip = sweep8.counts()
    assert last == (f"14 groups, {n_pass + n_fail + n_skip} checks: "
                    f"{n_pass} pass, {n_fail} fail, {n_skip} skipped")


def test_parallel_and_serial_agree():
    par = verify_catalog(6, parallel=True)
    ser = verify_catalog(6, parallel=False)
    strip = lambda rep: [(g.name, [(c.name, c.status, c.detail) for c in g.checks])
                         for g in rep.groups]
    assert strip(par) == strip(ser)


def test_larger_orders_skip_with_reasons():
    gv = run_group_checks("D8")   # order 16: surveys and brute counts are out
    by_name = {c.name: c for c in gv.checks}
    assert by_name["partition-survey"].status == "skipped"
    assert "exhaustive range" in by_name["partition-survey"].detail
    assert by_name["subrack-count"].status == "skipped"
    assert "brute range" in by_name["subrack-count"].detail
    assert by_name["mode-agreement"].status == "pass"
    assert by_name["m-set"].status == "pass"


def test_preferred_mode_policy():
    assert preferred_mode(group("Z16")) == "auto"
    assert preferred_mode(group("S3")) == "auto"
    assert preferred_mode(group("A4")) == "implicit"
    assert preferred_mode(group("S4")) == "implicit"
    assert preferred_mode(group("S4"), implicit_only=True) == "implicit"


def test_s4_runs_implicit_and_clean():
    gv = run_group_checks("S4")
    assert gv.mode == "implicit"
    assert all(c.status != "fail" for c in gv.checks)
    by_name = {c.name: c for c in gv.checks}
    assert by_name["m-set"].status == "pass"
    assert by_name["implicit-performance"].status == "pass"
    assert by_name["p-nilpotence"].status == "pass"
