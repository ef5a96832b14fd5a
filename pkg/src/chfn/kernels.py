"""Completely monotone kernels ``L`` and the operations built on them.

Each kernel is injective and completely monotone on ``[0, inf)`` with
``L(0) = 1``, carries a closed-form inverse on ``I_L = L([0, inf)) = (0, 1]``
and, where known, the mixing law ``rho`` with ``L(s) = E[exp(-s*T)]``,
``T ~ rho``.  ``phi_L(x, y) = L(L^{-1}(x) + L^{-1}(y))`` turns the pointwise
composition ``L(a*psi)`` into addition of exponents.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import ClassVar

import numpy as np

from chfn.cf import Composed
from chfn.errors import DomainError, ParameterError, StructureError
from chfn.lk import DriftedLKExponent, LKExponent, is_indecomposable

FIT_RTOL = 1e-10


def _out(v):
    v = np.asarray(v)
    return v[()] if v.ndim == 0 else v


def _is_real(v):
    return not np.iscomplexobj(v) or np.all(np.imag(v) == 0)


@dataclass(frozen=True)
class CMKernel:
    """Base class; subclasses supply ``_eval``, ``_inverse`` and optionally ``_phi``."""

    name: ClassVar[str] = "kernel"
    complex_ok: ClassVar[bool] = False

    def __call__(self, s):
        s = np.asarray(s)
        if _is_real(s):
            s = np.real(s).astype(float)
            if np.any(s < 0) or np.any(np.isnan(s)):
                raise DomainError("kernel argument must be nonnegative", s)
            return _out(self._eval(s))
        if not self.complex_ok:
            raise DomainError(f"{self.name} kernel is evaluated on real arguments only", s)
        if np.any(s.real < 0):
            raise DomainError("complex kernel argument must have nonnegative real part", s)
        return _out(self._eval(s.astype(complex)))

    def inverse(self, v):
        v = np.asarray(v)
        if not _is_real(v):
            raise DomainError("kernel inverse takes real values in (0, 1]", v)
        v = np.real(v).astype(float)
        if np.any(~(v > 0)) or np.any(v > 1):
            raise DomainError("value outside the kernel range (0, 1]", v)
        return _out(self._inverse(v))

    def phi(self, x, y):
        """``L(L^{-1}(x) + L^{-1}(y))``; closed form on complex input where available."""
        x = np.asarray(x)
        y = np.asarray(y)
        if _is_real(x) and _is_real(y):
            xr, yr = np.real(x).astype(float), np.real(y).astype(float)
            for v in (xr, yr):
                if np.any(~(v > 0)) or np.any(v > 1):
                    raise DomainError(f"argument outside I_L = (0, 1] for {self.name} kernel", v)
            if type(self)._phi is not CMKernel._phi:
                return _out(self._phi(xr, yr))
            return _out(self._eval(self._inverse(xr) + self._inverse(yr)))
        if not self.complex_ok:
            raise DomainError(f"{self.name} operation is defined on real arguments only", (x, y))
        return _out(self._phi(x.astype(complex), y.astype(complex)))

    def _phi(self, x, y):
        raise NotImplementedError

    def rational_of(self, psi):
        """Rational form of ``L(psi)`` for a rational exponent ``psi``, when exact."""
        raise StructureError(f"{self.name} kernel has no rational composition")

    def sample_time(self, rng, n):
        """Draw ``n`` times from the mixing law; ``None`` if no sampler ships."""
        return None

    @property
    def mixing_law(self):
        return None


@dataclass(frozen=True)
class Exp(CMKernel):
    name: ClassVar[str] = "exp"
    complex_ok: ClassVar[bool] = True

    def _eval(self, s):
        return np.exp(-s)

    def _inverse(self, v):
        return -np.log(v)

    def _phi(self, x, y):
        return x * y

    def sample_time(self, rng, n):
        return np.ones(n)

    @property
    def mixing_law(self):
        return ("point-mass", 1.0)


@dataclass(frozen=True)
class Kac(CMKernel):
    name: ClassVar[str] = "kac"
    complex_ok: ClassVar[bool] = True

    def _eval(self, s):
        return 1.0 / (1.0 + s)

    def _inverse(self, v):
        return 1.0 / v - 1.0

    def _phi(self, x, y):
        if np.any(x == 0) or np.any(y == 0):
            raise DomainError("Kac operation needs nonzero arguments", (x, y))
        d = 1.0 / x + 1.0 / y - 1.0
        if np.any(d == 0):
            raise DomainError("1/x + 1/y - 1 vanishes", (x, y))
        return 1.0 / d

    def rational_of(self, psi):
        return (psi + 1).reciprocal()

    def sample_time(self, rng, n):
        return rng.exponential(1.0, n)

    @property
    def mixing_law(self):
        return ("exponential", 1.0)


def _check_slit(z, what):
    if np.any((np.imag(z) == 0) & (np.real(z) <= 0)):
        raise DomainError(f"{what} lies on the branch cut (-inf, 0]", z)


@dataclass(frozen=True)
class GammaBeta(CMKernel):
    """``(1 + s/beta)**(-beta)``; the Laplace transform of Gamma(beta, 1/beta)."""

    beta: float = 1.0
    name: ClassVar[str] = "gamma"
    complex_ok: ClassVar[bool] = True

    def __post_init__(self):
        if not (np.isfinite(self.beta) and self.beta > 0):
            raise ParameterError(f"beta must be positive, got {self.beta}")

    def _eval(self, s):
        # principal branch: exp(-beta * Log(1 + s/beta))
        return np.exp(-self.beta * np.log1p(s / self.beta))

    def _inverse(self, v):
        return self.beta * np.expm1(-np.log(v) / self.beta)

    def _phi(self, x, y):
        _check_slit(x, "argument")
        _check_slit(y, "argument")
        e = -1.0 / self.beta
        base = np.power(x, e) + np.power(y, e) - 1.0
        if not float(self.beta).is_integer():
            _check_slit(base, "x^(-1/beta) + y^(-1/beta) - 1")
        return np.power(base, -self.beta)

    def rational_of(self, psi):
        if not float(self.beta).is_integer():
            raise StructureError("non-integer beta has no rational composition")
        n = int(self.beta)
        return (psi * (1.0 / n) + 1) ** (-n)

    def sample_time(self, rng, n):
        return rng.gamma(self.beta, 1.0 / self.beta, n)

    @property
    def mixing_law(self):
        return ("gamma", self.beta, 1.0 / self.beta)


@dataclass(frozen=True)
class GenLinnik(CMKernel):
    """``(1 + s**beta)**(-alpha)``; evaluation only."""

    alpha: float = 1.0
    beta: float = 1.0
    name: ClassVar[str] = "linnik"

    def __post_init__(self):
        if not (self.alpha > 0 and 0 < self.beta <= 1):
            raise ParameterError(f"need alpha > 0 and 0 < beta <= 1, got ({self.alpha}, {self.beta})")

    def _eval(self, s):
        return (1.0 + s**self.beta) ** (-self.alpha)

    def _inverse(self, v):
        return np.expm1(-np.log(v) / self.alpha) ** (1.0 / self.beta)


@dataclass(frozen=True)
class StableExp(CMKernel):
    """``exp(-s**beta)``; evaluation only."""

    beta: float = 1.0
    name: ClassVar[str] = "stable"

    def __post_init__(self):
        if not 0 < self.beta <= 1:
            raise ParameterError(f"need 0 < beta <= 1, got {self.beta}")

    def _eval(self, s):
        return np.exp(-(s**self.beta))

    def _inverse(self, v):
        return (-np.log(v)) ** (1.0 / self.beta)


def kernel_eval(L, s):
    return L(s)


def kernel_inverse(L, v):
    return L.inverse(v)


def phi_L(L, x, y):
    return L.phi(x, y)


def compose(L, a, psi):
    """The characteristic function ``xi -> L(a * psi(xi))``."""
    if not isinstance(psi, (LKExponent, DriftedLKExponent)):
        raise ParameterError("compose expects an LKExponent or DriftedLKExponent")
    return Composed(L, a, psi)


def _fit_grid():
    return np.linspace(-10.0, 10.0, 201)


def factor_recover(L, psi, f, grid=None, rtol=FIT_RTOL):
    """Recover ``a`` with ``f = L(a*psi)`` for an indecomposable ``psi``.

    When ``f`` is stored as ``L(eta)`` its exponent is read directly;
    otherwise the exponent is forced as ``eta = L^{-1}(f)`` pointwise.  The
    least-squares coefficient of ``eta`` on ``psi`` is accepted when the sup
    residual relative to ``sup|eta|`` is below ``rtol``.

    Raises
    ------
    StructureError
        ``eta`` is not proportional to ``psi`` (the counterexample situation),
        or the coefficient lies outside ``[0, 1]``.
    """
    report = is_indecomposable(psi)
    if not report.indecomposable:
        raise ParameterError(f"psi must be indecomposable, got {report.verdict.value}")
    grid = _fit_grid() if grid is None else np.asarray(grid, dtype=float)
    if isinstance(f, Composed) and f.kernel == L:
        eta = np.asarray(f.exponent_values(grid))
    else:
        try:
            eta = np.asarray(L.inverse(f(grid)))
        except DomainError as exc:
            raise StructureError("f takes values outside the kernel range") from exc
    target = psi(grid)
    if np.iscomplexobj(eta) and np.max(np.abs(np.imag(eta))) > 0:
        raise StructureError("exponent is complex; not a multiple of a symmetric psi")
    eta = np.real(eta)
    a = float(np.dot(eta, target) / np.dot(target, target))
    eta_scale = np.max(np.abs(eta))
    residual = 0.0 if eta_scale == 0 else float(np.max(np.abs(eta - a * target)) / eta_scale)
    if residual > rtol:
        raise StructureError(f"exponent is not proportional to psi (relative residual {residual:.3e})", residual)
    if a < -rtol or a > 1 + rtol:
        raise StructureError(f"recovered coefficient {a} lies outside [0, 1]", residual)
    return min(max(a, 0.0), 1.0)


KERNELS = {"exp": Exp, "kac": Kac, "gamma": GammaBeta, "linnik": GenLinnik, "stable": StableExp}


def gaussian_exponent(c=1.0):
    """``c * xi**2`` as an exponent."""
    return LKExponent(2.0 * c)

