import pytest

from unipriv import verify


def test_suite_passes():
    results = verify.run_suite(0)
    assert len(results) == len(verify.SUITE)
    failed = [r.line() for r in results if not r.passed]
    assert not failed, failed


@pytest.mark.parametrize("seed", [1, 2])
def test_suite_other_seeds(seed):
    assert all(r.passed for r in verify.run_suite(seed))


def test_result_line():
    ok = verify._result("x", "p", -1e-12)  # margin is slack; negative means violated
    bad = verify._result("x", "p", -1e-3)
    assert ok.passed and not bad.passed
    assert ok.line().startswith("PASS") and bad.line().startswith("FAIL")


def test_suite_is_deterministic():
    assert [r.line() for r in verify.run_suite(5)] == [r.line() for r in verify.run_suite(5)]
