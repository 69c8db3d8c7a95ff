"""Truncated Taylor series ("jets") with numpy coefficient arrays.

A jet of order K stores ``c[j] = f^(j)(x0) / j!`` for ``j = 0..K``. The
leading axis indexes the Taylor order; any trailing axes are a batch of
expansion points, so one jet can carry a whole grid of points at once.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from seqcontest.errors import JetDivisionError

Scalar = Union[int, float, np.floating, np.ndarray]


@dataclass(frozen=True)
class SeriesJet:
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=float)
        if c.ndim == 0:
            c = c[None]
        object.__setattr__(self, "coeffs", c)

    # construction -----------------------------------------------------

    @classmethod
    def variable(cls, x0, order: int) -> "SeriesJet":
        """The identity function expanded at ``x0``."""
        x0 = np.asarray(x0, dtype=float)
        c = np.zeros((order + 1,) + x0.shape)
        c[0] = x0
        if order >= 1:
            c[1] = 1.0
        return cls(c)

    @classmethod
    def constant(cls, value, order: int) -> "SeriesJet":
        value = np.asarray(value, dtype=float)
        c = np.zeros((order + 1,) + value.shape)
        c[0] = value
        return cls(c)

    # accessors --------------------------------------------------------

    @property
    def order(self) -> int:
        return self.coeffs.shape[0] - 1

    @property
    def value(self) -> np.ndarray:
        return self.coeffs[0]

    def derivative_at(self, j: int) -> np.ndarray:
        """The j-th derivative of the underlying function at the point."""
        return self.coeffs[j] * math.factorial(j)

    def derivative(self) -> "SeriesJet":
        """Jet of f' (one order lower)."""
        if self.order == 0:
            raise ValueError("cannot differentiate an order-0 jet")
        k = np.arange(1, self.order + 1, dtype=float)
        k = k.reshape((-1,) + (1,) * (self.coeffs.ndim - 1))
        return SeriesJet(self.coeffs[1:] * k)

    def truncate(self, order: int) -> "SeriesJet":
        if order > self.order:
            raise ValueError(f"cannot raise order {self.order} to {order}")
        return SeriesJet(self.coeffs[: order + 1])

    # arithmetic -------------------------------------------------------

    def _coerce(self, other) -> "SeriesJet":
        if isinstance(other, SeriesJet):
            return other
        return SeriesJet.constant(np.broadcast_to(other, self.value.shape), self.order)

    def _align(self, other: "SeriesJet"):
        k = min(self.order, other.order)
        return self.coeffs[: k + 1], other.coeffs[: k + 1]

    def __neg__(self) -> "SeriesJet":
        return SeriesJet(-self.coeffs)

    def __add__(self, other) -> "SeriesJet":
        if not isinstance(other, SeriesJet):
            c = self.coeffs.copy()
            c[0] = c[0] + other
            return SeriesJet(c)
        a, b = self._align(other)
        return SeriesJet(a + b)

    __radd__ = __add__

    def __sub__(self, other) -> "SeriesJet":
        return self + (-other)

    def __rsub__(self, other) -> "SeriesJet":
        return (-self) + other

    def __mul__(self, other) -> "SeriesJet":
        if not isinstance(other, SeriesJet):
            return SeriesJet(self.coeffs * other)
        a, b = self._align(other)
        out = np.empty(np.broadcast_shapes(a.shape, b.shape))
        for j in range(a.shape[0]):
            out[j] = np.sum(a[: j + 1] * b[j::-1], axis=0)
        return SeriesJet(out)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "SeriesJet":
        if not isinstance(other, SeriesJet):
            return SeriesJet(self.coeffs / other)
        a, b = self._align(other)
        b0 = b[0]
        if np.any(b0 == 0):
            raise JetDivisionError("jet division by a series with zero constant term")
        q = np.empty(np.broadcast_shapes(a.shape, b.shape))
        for j in range(a.shape[0]):
            acc = a[j] - np.sum(q[:j] * b[j:0:-1], axis=0) if j else a[0]
            q[j] = acc / b0
        return SeriesJet(q)

    def __rtruediv__(self, other) -> "SeriesJet":
        return self._coerce(other) / self

    def reciprocal(self) -> "SeriesJet":
        return 1.0 / self

    def compose(self, outer: Callable[[np.ndarray, int], np.ndarray]) -> "SeriesJet":
        """Apply a function given by its Taylor coefficients.

        ``outer(y0, order)`` must return the coefficients of ``F`` expanded at
        ``y0 = self.value``; the result is the jet of ``F(self)``.
        """
        fc = np.asarray(outer(self.value, self.order), dtype=float)
        dev = SeriesJet(np.concatenate([np.zeros_like(self.coeffs[:1]), self.coeffs[1:]]))
        # Horner in the deviation; dev has zero constant term so powers beyond
        # the order vanish after truncation.
        acc = SeriesJet.constant(fc[self.order], self.order)
        for j in range(self.order - 1, -1, -1):
            acc = acc * dev + fc[j]
        return acc

    def exp(self) -> "SeriesJet":
        return self.compose(_exp_coeffs)

    def log(self) -> "SeriesJet":
        if np.any(self.value <= 0):
            raise ValueError("log of a jet with nonpositive value")
        return self.compose(_log_coeffs)

    def __pow__(self, p: int) -> "SeriesJet":
        if not isinstance(p, (int, np.integer)) or p < 0:
            raise ValueError("only nonnegative integer powers are supported")
        out = SeriesJet.constant(np.ones_like(self.value), self.order)
        for _ in range(p):
            out = out * self
        return out


def _exp_coeffs(y0, order):
    e = np.exp(y0)
    return [e / math.factorial(j) for j in range(order + 1)]


def _log_coeffs(y0, order):
    out = [np.log(y0)]
    for j in range(1, order + 1):
        out.append((-1.0) ** (j + 1) / (j * y0**j))
    return out
