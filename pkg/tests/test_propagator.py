import math
from dataclasses import replace

import numpy as np
import pytest

from config.settings import settings
from src import families
from src.core import (
    CompositeSequence,
    Propagator,
    Pulse,
    bloch_inversion,
    cayley_klein,
    compose,
    inversion,
    jet_compose,
    probabilities,
    probability_series,
    pulse_propagator,
    transition_probability,
)
from src.core import propagator as propagator_module
from src.errors import InvalidParameterError, InvalidPulseError, SeriesConsistencyError

from helpers import random_sequence, sin_half

HALF_PI = math.pi / 2


# -- pulses ------------------------------------------------------------------

def test_pi_pulse_at_zero_error():
    u = pulse_propagator(Pulse(1.0, 0.0), 0.0)
    assert abs(u.a) < 1e-15
    assert u.b == pytest.approx(-1j, abs=1e-15)


def test_half_pi_pulse_at_zero_error():
    u = pulse_propagator(Pulse(0.5, 0.0), 0.0)
    r = math.sqrt(2) / 2
    assert u.a == pytest.approx(r, abs=1e-15)
    assert u.b == pytest.approx(-1j * r, abs=1e-15)


def test_phased_pulse_with_error():
    u = pulse_propagator(Pulse(1.0, 2.0 / 3.0), 0.1)
    half = 0.55 * math.pi
    assert u.a == pytest.approx(math.cos(half), abs=1e-15)
    assert u.b == pytest.approx(-1j * math.sin(half) * complex(math.cos(2 * math.pi / 3), math.sin(2 * math.pi / 3)),
                                abs=1e-15)


@pytest.mark.parametrize("area", [0.0, -0.5, float("inf"), float("nan")])
def test_invalid_area_rejected(area):
    with pytest.raises(InvalidPulseError):
        Pulse(area, 0.0)


def test_empty_sequence_rejected():
    with pytest.raises(InvalidPulseError):
        CompositeSequence(())


# -- composition -------------------------------------------------------------

def test_freeman_gives_half_at_zero_error():
    assert transition_probability(compose(families.symmetric_half_pi(2), 0.0)) == pytest.approx(0.5, abs=1e-15)


def test_three_pulse_value_at_finite_error():
    p = transition_probability(compose(families.symmetric_half_pi(3), 0.2))
    assert p == pytest.approx(0.5 - 0.5 * math.sin(0.1 * math.pi) ** 4, abs=1e-14)
    assert p == pytest.approx(0.495440, abs=1e-6)


def test_single_pulse_composition_equals_pulse():
    pulse = Pulse(0.5, 0.3)
    seq = CompositeSequence((pulse,))
    for eps in (-0.4, 0.0, 0.25):
        u, v = compose(seq, eps), pulse_propagator(pulse, eps)
        assert u.a == pytest.approx(v.a, abs=1e-15)
        assert u.b == pytest.approx(v.b, abs=1e-15)


def test_bb1_at_zero_error():
    assert transition_probability(compose(families.bb1(0.5), 0.0)) == pytest.approx(0.5, abs=1e-12)


def test_inversion():
    assert bloch_inversion(families.symmetric_half_pi(2), 0.0) == pytest.approx(0.0, abs=1e-15)
    assert bloch_inversion(CompositeSequence((Pulse(1.0, 0.0),)), 0.0) == pytest.approx(1.0)


def test_vectorized_matches_scalar():
    seq = families.asymmetric_half_pi(4)
    grid = np.linspace(-1.0, 1.0, 11)
    vec = probabilities(seq, grid)
    for eps, p in zip(grid, vec):
        assert p == pytest.approx(transition_probability(compose(seq, float(eps))), abs=1e-15)


def test_propagator_matrix_is_unitary():
    u = compose(families.bb1(0.5), 0.17)
    m = u.matrix()
    assert np.allclose(m @ m.conj().T, np.eye(2), atol=1e-13)


# -- invariants over random trains ---------------------------------------------

def test_random_sequences_properties(rng):
    grid = np.linspace(-1.0, 1.0, 41)
    for _ in range(100):
        seq = random_sequence(rng)
        a, b = cayley_klein(seq, grid)
        assert Propagator(a, b).is_unitary()

        p = np.abs(b) ** 2
        assert np.allclose(probabilities(families.negate(seq), grid), p, atol=1e-12)
        assert np.allclose(probabilities(families.global_shift(seq, 0.37), grid), p, atol=1e-12)
        turns = rng.integers(-2, 3, size=len(seq)).tolist()
        assert np.allclose(probabilities(families.add_turns(seq, turns), grid), p, atol=1e-12)

        # reversed order gives (a*, b)
        ra, rb = cayley_klein(seq.reversed(), grid)
        assert np.allclose(ra, np.conj(a), atol=1e-12)
        assert np.allclose(rb, b, atol=1e-12)


def test_composition_is_associative(rng):
    for _ in range(20):
        first, second = random_sequence(rng, 4), random_sequence(rng, 4)
        eps = float(rng.uniform(-1.0, 1.0))
        whole = compose(first + second, eps)
        split = compose(second, eps) @ compose(first, eps)
        assert whole.a == pytest.approx(split.a, abs=1e-12)
        assert whole.b == pytest.approx(split.b, abs=1e-12)


# -- series ----------------------------------------------------------------------

def test_jet_order_must_be_positive():
    with pytest.raises(InvalidParameterError):
        jet_compose(families.symmetric_half_pi(2), 0)


def test_jet_constant_term_matches_propagator():
    seq = families.bb1(0.5)
    a, b = jet_compose(seq, 4)
    u = compose(seq, 0.0)
    assert a[0] == pytest.approx(u.a, abs=1e-14)
    assert b[0] == pytest.approx(u.b, abs=1e-14)


def test_single_half_pi_pulse_series():
    c = probability_series(CompositeSequence((Pulse(0.5, 0.0),)), 3)
    # P = (1 + sin(πε/2)) / 2
    assert c[0] == pytest.approx(0.5, abs=1e-15)
    assert c[1] == pytest.approx(math.pi / 4, abs=1e-14)
    assert c[2] == pytest.approx(0.0, abs=1e-14)
    assert c[3] == pytest.approx(-HALF_PI ** 3 / 12, abs=1e-13)


def test_three_pulse_series():
    c = probability_series(families.symmetric_half_pi(3), 6)
    assert c[0] == pytest.approx(0.5, abs=1e-14)
    assert np.allclose(c[1:4], 0.0, atol=1e-12)
    assert c[4] == pytest.approx(-HALF_PI ** 4 / 2, rel=1e-10)


def test_two_pulse_asymmetric_series():
    c = probability_series(families.asymmetric_half_pi(2), 4)
    assert np.allclose(c[1:3], 0.0, atol=1e-12)
    assert c[3] == pytest.approx(HALF_PI ** 3 / 2, rel=1e-10)


def test_freeman_series_against_finite_differences():
    seq = families.symmetric_half_pi(2)
    c = probability_series(seq, 4)
    assert c[2] == pytest.approx(-HALF_PI ** 2 / 2, rel=1e-12)
    assert c[4] == pytest.approx(HALF_PI ** 4 / 6, rel=1e-10)

    def p(e):
        return float(probabilities(seq, e))

    def second_difference(h):
        return (p(h) - 2 * p(0.0) + p(-h)) / h ** 2

    h = 1e-2
    extrapolated = (4 * second_difference(h / 2) - second_difference(h)) / 3
    assert 0.5 * extrapolated == pytest.approx(c[2], rel=1e-6)
    first = (p(h) - p(-h)) / (2 * h)
    assert first == pytest.approx(c[1], abs=1e-8)


def test_series_approximates_profile(rng):
    order = 12
    for _ in range(30):
        seq = random_sequence(rng)
        c = probability_series(seq, order)
        g = 0.5 * math.pi * seq.total_area_pi
        for eps in (0.01, 0.05, 0.1):
            approx = np.polyval(c[::-1], eps)
            exact = float(probabilities(seq, eps))
            x = 2 * g * eps
            bound = 4 ** (len(seq) - 1) * x ** (order + 1) / math.factorial(order + 1) * math.exp(x)
            assert abs(approx - exact) <= bound + 1e-12


def test_imaginary_residue_is_reported(monkeypatch):
    monkeypatch.setattr(propagator_module, "settings", replace(settings, series_residue_tol=-1.0))
    with pytest.raises(SeriesConsistencyError):
        probability_series(families.symmetric_half_pi(2), 2)


def test_freeman_matches_closed_form():
    grid = np.linspace(-1.0, 1.0, 21)
    s = sin_half(grid)
    assert np.allclose(probabilities(families.symmetric_half_pi(2), grid), 0.5 - 0.5 * s ** 2, atol=1e-14)


def test_transition_probability_and_inversion_values():
    assert transition_probability(Propagator(0j, -1j)) == 1.0
    assert transition_probability(Propagator.identity()) == 0.0
    assert inversion(1.0) == 1.0
    assert inversion(0.5) == 0.0
    assert inversion(math.sin(math.pi / 6) ** 2) == pytest.approx(-0.5)


def test_half_pi_pulse_first_order_jet():
    a, _ = jet_compose(CompositeSequence((Pulse(0.5, 0.0),)), 1)
    assert a[0] == pytest.approx(math.cos(math.pi / 4), abs=1e-15)
    assert a[1] == pytest.approx(-(math.pi / 4) * math.sin(math.pi / 4), abs=1e-15)


def test_reversed_propagator():
    seq = families.bb1(0.5)
    forward = compose(seq, 0.13).reversed()
    backward = compose(seq.reversed(), 0.13)
    assert backward.a == pytest.approx(forward.a, abs=1e-12)
    assert backward.b == pytest.approx(forward.b, abs=1e-12)
