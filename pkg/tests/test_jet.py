import math

import numpy as np
import pytest

from src.core import Jet
from src.errors import InvalidParameterError


def test_product_truncates_at_order():
    x = Jet([1.0, 1.0])
    assert np.allclose((x * x).coeffs, [1.0, 2.0])


def test_abs2_of_complex_jet():
    x = Jet([1j, 2.0, 0.0])
    assert np.allclose(x.abs2().coeffs, [1.0, 0.0, 4.0])


def test_scalar_arithmetic():
    x = Jet.linear(2.0, 1.0, 3)
    assert np.allclose((3 - x).coeffs, [1.0, -1.0, 0.0, 0.0])
    assert np.allclose((x + 1).coeffs, [3.0, 1.0, 0.0, 0.0])
    assert np.allclose((2 * x).coeffs, [4.0, 2.0, 0.0, 0.0])


def test_mismatched_orders_rejected():
    with pytest.raises(InvalidParameterError):
        Jet.constant(1.0, 2) + Jet.constant(1.0, 3)


def test_sincos_matches_taylor_expansion():
    x0 = 0.3
    s, c = Jet.linear(x0, 1.0, 8).sincos()
    expected_s = [math.sin(x0 + k * math.pi / 2) / math.factorial(k) for k in range(9)]
    expected_c = [math.cos(x0 + k * math.pi / 2) / math.factorial(k) for k in range(9)]
    assert np.allclose(s.coeffs, expected_s, atol=1e-15)
    assert np.allclose(c.coeffs, expected_c, atol=1e-15)


def test_sincos_of_scaled_argument():
    # sin(g·(1+ε)) with g = π/4
    g = math.pi / 4
    s = Jet.linear(g, g, 6).sin()
    for k in range(7):
        assert s[k].real == pytest.approx(g ** k * math.sin(g + k * math.pi / 2) / math.factorial(k), abs=1e-15)


def test_coefficients_depend_only_on_lower_orders():
    base = np.array([0.2, 0.7, -0.1, 0.05, 0.3])
    bumped = base.copy()
    bumped[4] += 10.0
    s1, c1 = Jet(base).sincos()
    s2, c2 = Jet(bumped).sincos()
    assert np.allclose(s1.coeffs[:4], s2.coeffs[:4])
    assert np.allclose(c1.coeffs[:4], c2.coeffs[:4])
    assert not np.isclose(s1[4], s2[4])


def test_evaluate_sums_series():
    x = Jet([1.0, 2.0, 3.0])
    assert x.evaluate(0.5) == pytest.approx(1.0 + 1.0 + 0.75)


def test_coefficients_are_read_only():
    x = Jet([1.0, 2.0])
    with pytest.raises(ValueError):
        x.coeffs[0] = 5.0
