import pytest

from thompoly.verify import REGISTERED, Check, report, run_checks


def test_registered():
    assert REGISTERED == (3, 4, 5)
    with pytest.raises(KeyError):
        run_checks(2)


@pytest.mark.parametrize("k", [3, 4])
def test_low_k_checks_pass(k):
    checks = run_checks(k)
    assert checks and all(c.ok for c in checks), report(checks)


def test_report_lines():
    text = report([Check("a", True), Check("b", False, "why")])
    assert text == "PASS a\nFAIL b (why)\n"
