import math

import numpy as np
import pytest

from src import analysis, families
from src.core import probabilities
from src.errors import InvalidParameterError, WindowUnreachableError

CLAIMS = {"sym_half_pi": [3, 5, 6], "asym_half_pi": [4, 5, 7]}


# -- profiles ------------------------------------------------------------------------

def test_prime_two_profile():
    prof = analysis.profile(families.prime_two(0.5), -1.0, 1.0, 201)
    assert prof.eps_grid.size == 201
    assert prof.eps_grid[100] == 0.0
    assert prof.probabilities[100] == pytest.approx(0.5, abs=1e-15)
    assert prof.probabilities[0] == pytest.approx(0.0, abs=1e-15)
    assert prof.probabilities[-1] == pytest.approx(0.0, abs=1e-15)
    assert np.allclose(prof.probabilities, prof.probabilities[::-1], atol=1e-14)


def test_profile_frame_columns():
    frame = analysis.profile(families.symmetric_half_pi(3), points=5).to_frame()
    assert list(frame.columns) == ["eps", "probability"]
    assert frame["eps"].tolist() == [-1.0, -0.5, 0.0, 0.5, 1.0]


def test_profile_needs_two_points():
    with pytest.raises(InvalidParameterError):
        analysis.profile(families.symmetric_half_pi(2), points=1)
    with pytest.raises(InvalidParameterError):
        analysis.profile(families.symmetric_half_pi(2), 0.5, -0.5, 11)


@pytest.mark.parametrize("n", range(2, 8))
def test_profile_symmetry(n):
    grid = np.linspace(0.0, 1.0, 51)
    sym = families.symmetric_half_pi(n)
    asym = families.asymmetric_half_pi(n)
    assert np.allclose(probabilities(sym, grid), probabilities(sym, -grid), atol=1e-12)
    assert np.allclose(probabilities(asym, grid) - 0.5, 0.5 - probabilities(asym, -grid), atol=1e-12)


def test_deviation_flattens_with_n():
    grid = np.linspace(-0.5, 0.5, 101)
    for build in (families.symmetric_half_pi, families.asymmetric_half_pi):
        previous = None
        for n in range(2, 11):
            dev = np.abs(probabilities(build(n), grid) - 0.5)
            if previous is not None:
                assert np.all(dev <= previous + 1e-14)
            previous = dev


def test_design_target():
    assert analysis.design_target(families.prime_two(0.3)) == pytest.approx(0.3)
    untagged = families.prime_two(0.3).relabel("x", p_target=None)
    assert analysis.design_target(untagged) == pytest.approx(0.3, abs=1e-14)


# -- closed forms ------------------------------------------------------------------------

def test_closed_form_aliases_and_primes():
    eps = np.linspace(-1.0, 1.0, 11)
    assert np.allclose(analysis.closed_form_probability("sym", 3, eps),
                       analysis.closed_form_probability("sym_half_pi", 3, eps))
    got = analysis.closed_form_probability("prime4_abba", None, eps, 0.25)
    assert np.allclose(got, probabilities(families.prime_four(0.25, "ABBA"), eps), atol=1e-12)
    with pytest.raises(InvalidParameterError):
        analysis.closed_form_probability("prime3", None, eps)
    with pytest.raises(InvalidParameterError):
        analysis.closed_form_probability("bb1", None, eps, 0.5)


# -- windows -----------------------------------------------------------------------------

def test_window_example():
    report = analysis.robustness_window(families.asymmetric_half_pi(2), 0.5, 1e-2)
    expected = (2 / math.pi) * math.asin(0.02 ** (1 / 3))
    assert report.eps_star == pytest.approx(expected, abs=1e-6)
    assert report.eps_star == pytest.approx(0.175, abs=1e-3)


def test_window_limits():
    assert analysis.robustness_window(families.symmetric_half_pi(2), 0.5, 1.0).eps_star == 1.0
    assert analysis.robustness_window(families.symmetric_half_pi(5), 0.5, 1e-4).eps_star >= 0.2
    assert analysis.robustness_window(families.prime_two(0.3), 0.5, 0.01).eps_star == 0.0
    with pytest.raises(InvalidParameterError):
        analysis.robustness_window(families.symmetric_half_pi(2), 0.5, 0.0)


@pytest.mark.parametrize("tol", [1e-4, 1e-2])
@pytest.mark.parametrize("n", range(2, 9))
def test_closed_form_window_matches_propagator(n, tol):
    for family, build in (("sym_half_pi", families.symmetric_half_pi), ("asym_half_pi", families.asymmetric_half_pi)):
        closed = analysis.closed_form_window(family, n, tol)
        oracle = analysis.robustness_window(build(n), 0.5, tol).eps_star
        assert closed == pytest.approx(oracle, abs=1e-6)


def test_min_pulses_examples():
    assert analysis.min_pulses_for_window("asym", 1e-4, 0.2) == 5
    assert analysis.min_pulses_for_window("sym", 1e-4, 0.2) == 5
    assert analysis.min_pulses_for_window("sym", 0.499, 1e-6) == 2


def test_min_pulses_unreachable():
    with pytest.raises(WindowUnreachableError):
        analysis.min_pulses_for_window("sym", 1e-12, 1.0, n_max=5)
    with pytest.raises(InvalidParameterError):
        analysis.min_pulses_for_window("prime3", 1e-4, 0.2)
    with pytest.raises(InvalidParameterError):
        analysis.min_pulses_for_window("sym", 1e-4, 1.5)


def test_closed_form_and_propagator_counts_agree():
    for family in ("sym", "asym"):
        for eps in (0.05, 0.1, 0.2, 0.3):
            assert analysis.min_pulses_for_window(family, 1e-4, eps) == analysis.oracle_min_pulses(family, 1e-4, eps)


def test_window_audit():
    rows = analysis.window_audit(1e-4, [0.1, 0.2, 0.3], CLAIMS)
    assert len(rows) == 6
    assert all(r["success"] and r["methods_agree"] for r in rows)
    computed = {(r["family"], r["eps"]): r["closed_form_n"] for r in rows}
    assert [computed[("sym_half_pi", e)] for e in (0.1, 0.2, 0.3)] == [4, 5, 7]
    assert [computed[("asym_half_pi", e)] for e in (0.1, 0.2, 0.3)] == [3, 5, 6]
    at_02 = [r for r in rows if r["eps"] == 0.2]
    assert all(r["matches_claim"] for r in at_02)
    assert not all(r["matches_claim"] for r in rows)


# -- comparison ----------------------------------------------------------------------------

def test_high_order_families_beat_bb1():
    report = analysis.compare([families.asymmetric_half_pi(5), families.bb1(0.5)], band=0.2)
    assert report.max_deviation["asym_half_pi N=5"] < report.max_deviation["bb1 theta=0.5"]
    assert report.best == "asym_half_pi N=5"
    three = analysis.band_deviation(families.prime_three(0.5), 0.2)
    assert three < analysis.band_deviation(families.bb1(0.5), 0.2)


def test_compare_table_shape():
    grid = analysis.eps_grid(-1.0, 1.0, 21)
    seq = families.symmetric_half_pi(3)
    report = analysis.compare([seq, seq], grid)
    assert list(report.deviations.columns) == ["eps", seq.label, f"{seq.label}#2"]
    assert len(report.deviations) == 21
    assert report.p_target == 0.5


def test_compare_rejects_mixed_targets():
    with pytest.raises(InvalidParameterError):
        analysis.compare([families.prime_two(0.3), families.symmetric_half_pi(2)])
    with pytest.raises(InvalidParameterError):
        analysis.compare([])


def test_compare_with_itself():
    seq = families.prime_three(0.5, 4)
    report = analysis.compare([seq, seq])
    assert np.array_equal(report.deviations.iloc[:, 1].to_numpy(), report.deviations.iloc[:, 2].to_numpy())
