"""Truncated power series in the pulse-area error.

A ``Jet`` of order K holds the Taylor coefficients 0..K of a complex function
of the real error ε. Every operation truncates at K, so coefficient k of a
result only ever depends on coefficients 0..k of its inputs.
"""
from __future__ import annotations

from typing import Tuple, Union

import numpy as np

from src.errors import InvalidParameterError

Scalar = Union[int, float, complex]


class Jet:
    __slots__ = ("_c",)

    def __init__(self, coeffs):
        c = np.array(coeffs, dtype=complex).ravel()
        if c.size < 1:
            raise InvalidParameterError("a jet needs at least one coefficient")
        c.setflags(write=False)
        self._c = c

    # -- construction ---------------------------------------------------------
    @classmethod
    def constant(cls, value: Scalar, order: int) -> "Jet":
        c = np.zeros(order + 1, dtype=complex)
        c[0] = value
        return cls(c)

    @classmethod
    def linear(cls, value: Scalar, slope: Scalar, order: int) -> "Jet":
        c = np.zeros(order + 1, dtype=complex)
        c[0] = value
        if order >= 1:
            c[1] = slope
        return cls(c)

    # -- accessors ------------------------------------------------------------
    @property
    def coeffs(self) -> np.ndarray:
        return self._c

    @property
    def order(self) -> int:
        return self._c.size - 1

    def __getitem__(self, k: int) -> complex:
        return complex(self._c[k])

    def __len__(self) -> int:
        return self._c.size

    def __repr__(self) -> str:
        return f"Jet(order={self.order}, coeffs={self._c!r})"

    def evaluate(self, eps: float) -> complex:
        """Sum the truncated series at ``eps`` (Horner)."""
        return complex(np.polyval(self._c[::-1], eps))

    # -- arithmetic -----------------------------------------------------------
    def _coerce(self, other) -> np.ndarray:
        if isinstance(other, Jet):
            if other.order != self.order:
                raise InvalidParameterError(
                    f"jet orders differ ({self.order} vs {other.order})"
                )
            return other._c
        out = np.zeros_like(self._c)
        out[0] = other
        return out

    def __add__(self, other) -> "Jet":
        return Jet(self._c + self._coerce(other))

    __radd__ = __add__

    def __sub__(self, other) -> "Jet":
        return Jet(self._c - self._coerce(other))

    def __rsub__(self, other) -> "Jet":
        return Jet(self._coerce(other) - self._c)

    def __neg__(self) -> "Jet":
        return Jet(-self._c)

    def __mul__(self, other) -> "Jet":
        if isinstance(other, Jet):
            o = self._coerce(other)
            return Jet(np.convolve(self._c, o)[: self._c.size])
        return Jet(self._c * other)

    __rmul__ = __mul__

    def conj(self) -> "Jet":
        # ε is real, so conjugation acts coefficient-wise
        return Jet(np.conj(self._c))

    def abs2(self) -> "Jet":
        return self * self.conj()

    def sincos(self) -> Tuple["Jet", "Jet"]:
        """Sine and cosine by the coupled recurrence k·s_k = Σ j·g_j·c_{k−j}, k·c_k = −Σ j·g_j·s_{k−j}."""
        g = self._c
        n = g.size
        s = np.zeros(n, dtype=complex)
        c = np.zeros(n, dtype=complex)
        s[0] = np.sin(g[0])
        c[0] = np.cos(g[0])
        jg = np.arange(n) * g
        for k in range(1, n):
            s[k] = np.dot(jg[1 : k + 1], c[k - 1 :: -1][:k]) / k
            c[k] = -np.dot(jg[1 : k + 1], s[k - 1 :: -1][:k]) / k
        return Jet(s), Jet(c)

    def sin(self) -> "Jet":
        return self.sincos()[0]

    def cos(self) -> "Jet":
        return self.sincos()[1]
