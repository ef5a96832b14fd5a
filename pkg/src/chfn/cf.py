"""Evaluable characteristic functions.

A :class:`CharFn` is one of

* :class:`Rational`: a closed-form :class:`~chfn.rational.ComplexRational`;
* :class:`Composed`: ``L(a * psi(xi))`` for a completely monotone kernel
  ``L`` and a (possibly drifted) Lévy–Khintchine exponent ``psi``;
* :class:`Power`: an integer power of another characteristic function, kept
  unexpanded so large powers stay cheap;
* :class:`Tabulated`: values on a sorted grid, linearly interpolated.

All variants are immutable and evaluate vectorized over numpy arrays.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from chfn.errors import ParameterError, RangeError, StructureError
from chfn.rational import ComplexRational


class CharFn:
    """Common interface; call with a scalar or array of real ``xi``."""

    def __call__(self, xi):
        raise NotImplementedError

    def as_rational(self):
        """Exact rational form, when the variant has one."""
        raise StructureError(f"{type(self).__name__} has no exact rational form")


def _finish(out):
    out = np.asarray(out, dtype=complex)
    return out[()] if out.ndim == 0 else out


@dataclass(frozen=True)
class Rational(CharFn):
    rational: ComplexRational

    def __post_init__(self):
        if not isinstance(self.rational, ComplexRational):
            raise ParameterError("Rational expects a ComplexRational")
        if abs(self.rational(0.0) - 1.0) > 1e-12:
            raise ParameterError("a characteristic function must equal 1 at the origin")

    @classmethod
    def from_coeffs(cls, num, den):
        return cls(ComplexRational(num, den))

    def __call__(self, xi):
        return _finish(self.rational(np.asarray(xi, dtype=float)))

    def as_rational(self):
        return self.rational


@dataclass(frozen=True)
class Composed(CharFn):
    """``kernel(scale * exponent(xi))``."""

    kernel: object
    scale: float
    exponent: object

    def __post_init__(self):
        scale = float(self.scale)
        if not np.isfinite(scale) or scale < 0:
            raise ParameterError(f"scale must be a finite nonnegative number, got {self.scale}")
        object.__setattr__(self, "scale", scale)

    def exponent_values(self, xi):
        xi = np.asarray(xi, dtype=float)
        if self.scale == 0:
            return np.zeros_like(xi)
        return self.scale * self.exponent(xi)

    def __call__(self, xi):
        return _finish(self.kernel(self.exponent_values(xi)))

    def as_rational(self):
        coeffs = getattr(self.exponent, "polynomial_coefficients", lambda: None)()
        if coeffs is None:
            raise StructureError("exponent has atoms; no rational form")
        psi = ComplexRational.polynomial(self.scale * np.asarray(coeffs))
        return self.kernel.rational_of(psi)


@dataclass(frozen=True)
class Power(CharFn):
    base: CharFn
    n: int

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ParameterError(f"power must be a positive integer, got {self.n}")
        object.__setattr__(self, "n", int(self.n))

    def __call__(self, xi):
        return _finish(np.asarray(self.base(xi)) ** self.n)

    def as_rational(self):
        return self.base.as_rational() ** self.n


@dataclass(frozen=True, eq=False)
class Tabulated(CharFn):
    grid: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=float)
        values = np.asarray(self.values, dtype=complex)
        if grid.ndim != 1 or grid.shape != values.shape or grid.size < 2:
            raise ParameterError("grid and values must be 1-d arrays of equal length >= 2")
        if np.any(np.diff(grid) <= 0):
            raise ParameterError("grid must be strictly increasing")
        grid.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)
        if grid[0] <= 0 <= grid[-1] and abs(self(0.0) - 1.0) > 1e-12:
            raise ParameterError("tabulated characteristic function must equal 1 at the origin")

    def __call__(self, xi):
        xi = np.asarray(xi, dtype=float)
        if np.any(xi < self.grid[0]) or np.any(xi > self.grid[-1]):
            raise RangeError(f"xi outside tabulated range [{self.grid[0]}, {self.grid[-1]}]")
        re = np.interp(xi, self.grid, self.values.real)
        im = np.interp(xi, self.grid, self.values.imag)
        return _finish(re + 1j * im)


def laplace(a):
    """Characteristic function ``1 / (1 + a*xi**2)`` of a centered Laplace law."""
    if a < 0:
        raise ParameterError("Laplace parameter must be nonnegative")
    return Rational(ComplexRational([1.0], [1.0, 0.0, a]))
