"""Resonant SU(2) propagators in Cayley–Klein form.

A propagator is the matrix [[a, b], [-b*, a*]]. A pulse of nominal area
𝒜 (units of π) and phase φ, hit by a relative area error ε, has
a = cos(𝒜π(1+ε)/2) and b = −i·sin(𝒜π(1+ε)/2)·e^{iφπ}.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Tuple, Union

import numpy as np

from config.settings import settings
from src.core.jet import Jet
from src.core.sequence import CompositeSequence, Pulse
from src.errors import InvalidParameterError, SeriesConsistencyError

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]


@dataclass(frozen=True)
class Propagator:
    a: complex
    b: complex

    @classmethod
    def identity(cls) -> "Propagator":
        return cls(1.0 + 0j, 0j)

    def matrix(self) -> np.ndarray:
        return np.array([[self.a, self.b], [-np.conj(self.b), np.conj(self.a)]], dtype=complex)

    def __matmul__(self, other: "Propagator") -> "Propagator":
        # self · other, i.e. `other` acts first
        return Propagator(
            self.a * other.a - self.b * np.conj(other.b),
            self.a * other.b + self.b * np.conj(other.a),
        )

    def reversed(self) -> "Propagator":
        """Propagator of the same pulses applied in reverse order."""
        return Propagator(np.conj(self.a), self.b)

    def norm_defect(self) -> float:
        return float(np.max(np.abs(np.abs(self.a) ** 2 + np.abs(self.b) ** 2 - 1.0)))

    def is_unitary(self, tol: float = 1e-12) -> bool:
        return self.norm_defect() <= tol


def _pulse_ab(p: Pulse, eps: ArrayLike):
    half = 0.5 * np.pi * p.area_pi * (1.0 + np.asarray(eps, dtype=float))
    a = np.cos(half) + 0j
    b = -1j * np.sin(half) * np.exp(1j * np.pi * p.phase_pi)
    return a, b


def pulse_propagator(p: Pulse, eps: float) -> Propagator:
    a, b = _pulse_ab(p, eps)
    return Propagator(complex(a), complex(b))


def cayley_klein(seq: CompositeSequence, eps: ArrayLike) -> Tuple[np.ndarray, np.ndarray]:
    """(a, b) of the whole train, broadcast over an array of errors."""
    eps = np.asarray(eps, dtype=float)
    a = np.ones(eps.shape, dtype=complex)
    b = np.zeros(eps.shape, dtype=complex)
    for p in seq.pulses:
        pa, pb = _pulse_ab(p, eps)
        a, b = pa * a - pb * np.conj(b), pa * b + pb * np.conj(a)
    return a, b


def compose(seq: CompositeSequence, eps: float) -> Propagator:
    """U_N ··· U_1 at a single error value."""
    a, b = cayley_klein(seq, eps)
    return Propagator(complex(a), complex(b))


def transition_probability(u: Propagator) -> float:
    return float(np.abs(u.b) ** 2)


def probabilities(seq: CompositeSequence, eps: ArrayLike) -> np.ndarray:
    """Transition probability over an ε grid."""
    _, b = cayley_klein(seq, eps)
    return np.abs(b) ** 2


def inversion(p: float) -> float:
    return 2.0 * p - 1.0


def bloch_inversion(seq: CompositeSequence, eps: float) -> float:
    """Population inversion w = 2P − 1 left behind by the sequence."""
    return inversion(transition_probability(compose(seq, eps)))


# -- series -----------------------------------------------------------------

@lru_cache(maxsize=256)
def _half_angle_sincos(area_pi: float, order: int) -> Tuple[Tuple[complex, ...], Tuple[complex, ...]]:
    half = 0.5 * np.pi * area_pi
    s, c = Jet.linear(half, half, order).sincos()
    return tuple(s.coeffs), tuple(c.coeffs)


def jet_compose(seq: CompositeSequence, order: int) -> Tuple[Jet, Jet]:
    """Taylor jets of (a(ε), b(ε)) about ε = 0, truncated at ``order``."""
    if int(order) != order or order < 1:
        raise InvalidParameterError(f"series order must be an integer >= 1, got {order}")
    order = int(order)
    a = Jet.constant(1.0, order)
    b = Jet.constant(0.0, order)
    for p in seq.pulses:
        s, c = _half_angle_sincos(float(p.area_pi), order)
        pa = Jet(c)
        pb = Jet(s) * (-1j * np.exp(1j * np.pi * p.phase_pi))
        a, b = pa * a - pb * b.conj(), pa * b + pb * a.conj()
    return a, b


def probability_series_scaled(seq: CompositeSequence, order: int) -> Tuple[np.ndarray, np.ndarray]:
    """Probability coefficients c_0..c_K together with their cancellation scale.

    The scale S_k = Σ_j |b_j||b_{k−j}| bounds the size of the terms summed
    into c_k; it is the yardstick for both the imaginary-residue check and
    for deciding whether a coefficient vanished.
    """
    _, b = jet_compose(seq, order)
    p = b.abs2().coeffs
    mags = np.abs(b.coeffs)
    scale = np.convolve(mags, mags)[: order + 1]
    limit = settings.series_residue_tol * np.maximum(1.0, scale)
    bad = np.nonzero(np.abs(p.imag) > limit)[0]
    if bad.size:
        k = int(bad[0])
        raise SeriesConsistencyError(
            f"coefficient c_{k} of '{seq.label or seq.notation()}' has imaginary part {p.imag[k]:.3e}"
        )
    return p.real.copy(), scale


def probability_series(seq: CompositeSequence, order: int) -> np.ndarray:
    """c_0..c_K with P(ε) = Σ c_k ε^k + O(ε^{K+1})."""
    return probability_series_scaled(seq, order)[0]
