"""Rational functions in one variable with complex coefficients.

Coefficients are stored in ascending order (the ``numpy.polynomial``
convention): ``c[k]`` multiplies ``xi**k``.  Every instance is normalized so
that the denominator takes the value 1 at the origin, and common factors of
numerator and denominator are cancelled by a tolerance-aware Euclidean
algorithm.
"""

from __future__ import annotations

import numpy as np
from numpy.polynomial import polynomial as P

from chfn.errors import EvaluationError, ParameterError

GCD_RTOL = 1e-12


def trim(c, atol=0.0):
    """Drop trailing coefficients with magnitude ``<= atol``; keep at least one."""
    c = np.atleast_1d(np.asarray(c, dtype=complex))
    n = len(c)
    while n > 1 and abs(c[n - 1]) <= atol:
        n -= 1
    return c[:n].copy()


def degree(c):
    c = trim(c)
    if len(c) == 1 and c[0] == 0:
        return -1
    return len(c) - 1


def poly_gcd(a, b, rtol=GCD_RTOL):
    """Monic greatest common divisor of two polynomials, up to ``rtol``.

    Remainders whose coefficients are all below ``rtol`` times the largest
    input coefficient are treated as zero.
    """
    a = trim(a)
    b = trim(b)
    scale = max(np.abs(a).max(), np.abs(b).max())
    atol = rtol * scale
    a = trim(a, atol)
    b = trim(b, atol)
    if np.abs(b).max() <= atol:
        return a / a[-1]
    while np.abs(b).max() > atol:
        if len(b) == 1:
            return np.array([1.0 + 0j])
        _, r = P.polydiv(a, b)
        a, b = b, trim(r, atol)
    return a / a[-1]


def _as_coeffs(c):
    arr = np.atleast_1d(np.asarray(c, dtype=complex))
    if arr.ndim != 1 or arr.size == 0:
        raise ParameterError("polynomial coefficients must be a non-empty 1-d sequence")
    if not np.all(np.isfinite(arr)):
        raise ParameterError("polynomial coefficients must be finite")
    return arr


class ComplexRational:
    """Ratio ``num(xi) / den(xi)`` of complex-coefficient polynomials.

    Parameters
    ----------
    num, den : array_like
        Ascending coefficient sequences.
    reduce : bool, default True
        Cancel common factors (tolerance :data:`GCD_RTOL`).

    Instances are immutable; arithmetic returns new, reduced objects.
    """

    __slots__ = ("_num", "_den")

    def __init__(self, num, den=(1.0,), reduce=True):
        num = trim(_as_coeffs(num))
        den = trim(_as_coeffs(den))
        if degree(den) < 0:
            raise ParameterError("denominator is the zero polynomial")
        if den[0] == 0:
            raise ParameterError("denominator vanishes at 0")
        if reduce and degree(num) > 0 and degree(den) > 0:
            g = poly_gcd(num, den)
            if len(g) > 1:
                num = trim(P.polydiv(num, g)[0])
                den = trim(P.polydiv(den, g)[0])
        d0 = den[0]
        num = trim(num / d0)
        den = trim(den / d0)
        num.setflags(write=False)
        den.setflags(write=False)
        self._num = num
        self._den = den

    @classmethod
    def constant(cls, value):
        return cls([value])

    @classmethod
    def polynomial(cls, coeffs):
        return cls(coeffs, [1.0])

    @property
    def num(self):
        return self._num

    @property
    def den(self):
        return self._den

    @property
    def num_degree(self):
        return degree(self._num)

    @property
    def den_degree(self):
        return degree(self._den)

    def __call__(self, xi):
        xi = np.asarray(xi)
        n = P.polyval(xi, self._num)
        d = P.polyval(xi, self._den)
        # pole test relative to the size of the terms being summed
        mag = P.polyval(np.abs(xi), np.abs(self._den))
        if np.any(np.abs(d) <= 1e-15 * mag):
            bad = np.atleast_1d(xi)[np.atleast_1d(np.abs(d) <= 1e-15 * mag)][0]
            raise EvaluationError(f"denominator vanishes at xi={bad!r}")
        out = n / d
        return out[()] if out.ndim == 0 else out

    # arithmetic ---------------------------------------------------------

    @staticmethod
    def _coerce(other):
        if isinstance(other, ComplexRational):
            return other
        if np.isscalar(other):
            return ComplexRational.constant(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        num = P.polyadd(P.polymul(self._num, other._den), P.polymul(other._num, self._den))
        return ComplexRational(num, P.polymul(self._den, other._den))

    __radd__ = __add__

    def __neg__(self):
        return ComplexRational(-self._num, self._den, reduce=False)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return ComplexRational(P.polymul(self._num, other._num), P.polymul(self._den, other._den))

    __rmul__ = __mul__

    def reciprocal(self):
        if degree(self._num) < 0:
            raise EvaluationError("reciprocal of the zero function")
        if self._num[0] == 0:
            raise EvaluationError("reciprocal has a pole at 0")
        return ComplexRational(self._den, self._num)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.reciprocal()

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def __pow__(self, n):
        if not isinstance(n, (int, np.integer)):
            return NotImplemented
        if n < 0:
            return self.reciprocal() ** (-n)
        num = P.polypow(self._num, int(n)) if n else np.array([1.0])
        den = P.polypow(self._den, int(n)) if n else np.array([1.0])
        return ComplexRational(num, den, reduce=False)

    # structure ----------------------------------------------------------

    def rescale(self, c):
        """Return ``xi -> self(c * xi)``."""
        k_num = c ** np.arange(len(self._num))
        k_den = c ** np.arange(len(self._den))
        return ComplexRational(self._num * k_num, self._den * k_den, reduce=False)

    def _scale(self):
        return max(np.abs(self._num).max(), np.abs(self._den).max(), 1.0)

    def is_even(self, rtol=1e-12):
        tol = rtol * self._scale()
        return bool(np.all(np.abs(self._num[1::2]) <= tol) and np.all(np.abs(self._den[1::2]) <= tol))

    def has_real_coefficients(self, rtol=1e-12):
        tol = rtol * self._scale()
        return bool(np.all(np.abs(self._num.imag) <= tol) and np.all(np.abs(self._den.imag) <= tol))

    def is_polynomial(self):
        return self.den_degree == 0

    def even_parts(self):
        """Coefficients of ``num`` and ``den`` as polynomials in ``u = xi**2``.

        Only meaningful when :meth:`is_even` holds; imaginary parts are dropped
        when the coefficients are real.
        """
        num, den = trim(self._num[0::2]), trim(self._den[0::2])
        if self.has_real_coefficients():
            return num.real.copy(), den.real.copy()
        return num, den

    def allclose(self, other, rtol=1e-12):
        """Coefficientwise comparison after normalization."""
        if self.num_degree != other.num_degree or self.den_degree != other.den_degree:
            return False
        scale = max(self._scale(), other._scale())
        return bool(
            np.allclose(self._num, other._num, rtol=0, atol=rtol * scale)
            and np.allclose(self._den, other._den, rtol=0, atol=rtol * scale)
        )

    def __repr__(self):
        return f"ComplexRational(num={self._num.tolist()}, den={self._den.tolist()})"
