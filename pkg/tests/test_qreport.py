import pytest

from matroidlab.qreport import DOCUMENTED, FAIL, PASS, binary_report
from matroidlab.raylab import PhiSet


@pytest.fixture(scope="module")
def zero_report():
    return binary_report(PhiSet.q(["(0)"]), depth=5)


def test_single_class_verdicts(zero_report):
    assert zero_report.status(1) == DOCUMENTED
    assert zero_report.status(2) == FAIL
    for n in range(3, 9):
        assert zero_report.status(n) == PASS
    assert zero_report.status(9) == FAIL
    assert zero_report.matches_summary()


def test_report_lines_are_stable(zero_report):
    lines = zero_report.lines()
    assert lines[0].startswith("phi:")
    assert sum(line.startswith("condition-") for line in lines) == 9
    assert lines[-1] == "summary-match: yes"


def test_mod3_classes_fail_parity_closure():
    report = binary_report(PhiSet.q(["(001)", "(010)", "(100)"]), depth=4)
    assert report.status(7) == FAIL and report.status(8) == FAIL
    assert report.matches_summary()


def test_empty_phi_is_trivial():
    report = binary_report(PhiSet.q([]), depth=3)
    assert report.trivial
    assert all(report.status(n) == PASS for n in range(1, 10))
    assert report.matches_summary()
