import pytest

from hsusy.repro import CASES, Check, run_case


def test_check_line_format():
    assert Check("x", 1e-9, 1e-8).line().startswith("PASS")
    assert not Check("x", float("nan"), 1.0).passed


@pytest.mark.slow
@pytest.mark.parametrize("case", sorted(CASES))
def test_every_case_passes(case, tmp_path):
    res = run_case(case, tmp_path)
    assert res.passed, res.report()
    assert (tmp_path / "report.txt").read_text() == res.report()
    for name in res.files:
        assert (tmp_path / name).exists()


def test_repro_csv_is_deterministic(tmp_path):
    a = run_case("uncertainty", tmp_path / "a")
    b = run_case("uncertainty", tmp_path / "b")
    for name in a.files:
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
