"""Kac's operation, identity verification and the counterexample families.

Kac asked whether ``Phi(f1, f2) = 1/(1 + xi**2)`` with
``Phi(x, y) = 1/(1/x + 1/y - 1)`` forces both characteristic functions to be
centered Laplace.  The constructors here produce pairs that solve the
equation (or its ``Phi_beta`` / ``Phi_n`` generalizations) without being of
the Laplace (resp. ``(1 + a*xi**2/beta)**(-beta)``) form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from chfn.cf import CharFn, Composed, Power, Rational, Tabulated, laplace
from chfn.errors import AdmissibilityError, ChfnError, DomainError, ParameterError
from chfn.kernels import CMKernel, GammaBeta, Kac, gaussian_exponent
from chfn.lk import DriftedLKExponent
from chfn.rational import ComplexRational

__all__ = [
    "CharFn",
    "Composed",
    "Power",
    "Rational",
    "Tabulated",
    "laplace",
    "eval_cf",
    "kac_phi",
    "verify_identity",
    "ExpDifference",
    "SignedMixture",
    "GammaDrift",
    "PowerFamily",
    "make_counterexample",
    "principal_branch_check",
    "gaussian_limit_scan",
    "default_grid",
]

IDENTITY_TOL = 1e-10


def default_grid():
    """401 equally spaced points on [-20, 20]."""
    return np.linspace(-20.0, 20.0, 401)


def eval_cf(f, xi):
    return f(xi)


def kac_phi(x, y):
    """``1 / (1/x + 1/y - 1)``, elementwise on scalars or arrays."""
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    if np.any(x == 0):
        raise DomainError("kac_phi: x must be nonzero", x)
    if np.any(y == 0):
        raise DomainError("kac_phi: y must be nonzero", y)
    d = 1.0 / x + 1.0 / y - 1.0
    if np.any(d == 0):
        raise DomainError("kac_phi: 1/x + 1/y - 1 vanishes", d)
    out = 1.0 / d
    return out[()] if out.ndim == 0 else out


@dataclass(frozen=True, eq=False)
class VerificationReport:
    grid: np.ndarray
    op_values: np.ndarray
    target_values: np.ndarray
    residuals: np.ndarray
    max_residual: float
    tol: float
    passed: bool
    errors: tuple = ()


def _apply_op(op, x, y):
    if op is None or isinstance(op, Kac):
        return kac_phi(x, y)
    if isinstance(op, CMKernel):
        return op.phi(x, y)
    return op(x, y)


def verify_identity(f1, f2, target, grid=None, op=None, tol=IDENTITY_TOL):
    """Sup-norm check of ``op(f1, f2) == target`` on ``grid``.

    ``op`` is a :class:`~chfn.kernels.CMKernel` (``Kac()`` gives Kac's
    operation, ``GammaBeta(beta)`` gives ``Phi_beta``) or any binary callable;
    the default is Kac's operation.  Points where evaluation fails are
    recorded in ``errors`` and count as failures.
    """
    grid = default_grid() if grid is None else np.asarray(grid, dtype=float)
    op_vals = np.full(grid.shape, np.nan + 0j)
    tgt_vals = np.full(grid.shape, np.nan + 0j)
    errors = []
    try:
        op_vals = np.asarray(_apply_op(op, f1(grid), f2(grid)), dtype=complex)
        tgt_vals = np.asarray(target(grid), dtype=complex)
    except ChfnError:
        for i, xi in enumerate(grid):
            try:
                op_vals[i] = _apply_op(op, f1(xi), f2(xi))
                tgt_vals[i] = target(xi)
            except ChfnError as exc:
                errors.append((float(xi), str(exc)))
    res = np.abs(op_vals - tgt_vals)
    finite = res[np.isfinite(res)]
    max_res = float(finite.max()) if finite.size else math.inf
    passed = not errors and finite.size == res.size and max_res < tol
    return VerificationReport(grid, op_vals, tgt_vals, res, max_res, tol, passed, tuple(errors))


# --- counterexample families ---------------------------------------------


@dataclass(frozen=True)
class ExpDifference:
    """The pair ``(1 -+ i*xi/2 + xi**2/2)**(-1)``: laws of ``X - Y`` and ``Y - X``."""

    def operation(self):
        return Kac()


@dataclass(frozen=True)
class SignedMixture:
    a: float

    def __post_init__(self):
        if not 0 < self.a < 0.5:
            raise ParameterError(f"SignedMixture needs 0 < a < 1/2, got a={self.a}")

    def operation(self):
        return Kac()


def gamma_drift_bound(beta, a1, a2):
    """Upper bound on ``|b|`` for ``beta > 2``; ``inf`` when ``beta <= 2``."""
    if beta <= 2:
        return math.inf
    return 2.0 * math.sqrt(beta) * math.tan(math.pi / beta) * min(math.sqrt(a1), math.sqrt(a2))


@dataclass(frozen=True)
class GammaDrift:
    beta: float
    a1: float
    a2: float
    b: float

    def __post_init__(self):
        if not self.beta > 0:
            raise ParameterError(f"GammaDrift needs beta > 0, got beta={self.beta}")
        if not (self.a1 > 0 and self.a2 > 0):
            raise ParameterError(f"GammaDrift needs a1, a2 > 0, got ({self.a1}, {self.a2})")
        if self.b == 0:
            raise ParameterError("GammaDrift needs b != 0")
        bound = gamma_drift_bound(self.beta, self.a1, self.a2)
        if not abs(self.b) < bound:
            raise AdmissibilityError(
                f"|b|={abs(self.b):g} violates the principal-branch condition "
                f"0 < |b| < 2*sqrt(beta)*tan(pi/beta)*min(sqrt(a1), sqrt(a2)) = {bound:.6g}",
                bound,
            )

    def operation(self):
        return GammaBeta(self.beta)


@dataclass(frozen=True)
class PowerFamily:
    a: float
    n: int
    theta: float

    def __post_init__(self):
        if not self.a > 0:
            raise ParameterError(f"PowerFamily needs a > 0, got a={self.a}")
        if int(self.n) != self.n or self.n < 1:
            raise ParameterError(f"PowerFamily needs an integer n >= 1, got n={self.n}")
        if not 0 < self.theta < 0.5:
            raise ParameterError(f"PowerFamily needs 0 < theta < 1/2, got theta={self.theta}")

    def operation(self):
        return GammaBeta(int(self.n))


class Counterexample(NamedTuple):
    f1: CharFn
    f2: CharFn
    target: CharFn


def mixture_pair(a):
    """The real, even pair with ``1/f1 + 1/f2 = 2 + xi**2`` for ``0 < a < 1/2``."""
    f1 = Rational(ComplexRational([2.0, 0.0, a], [2.0, 0.0, 2.0 * a]))
    f2 = Rational(ComplexRational([2.0, 0.0, a], [2.0, 0.0, 2.0, 0.0, a]))
    return f1, f2


def make_counterexample(kind):
    """Build ``(f1, f2, target)`` for a counterexample family.

    ``target`` is ``1/(1 + xi**2)`` for the Kac families,
    ``(1 + (a1 + a2)*xi**2/beta)**(-beta)`` for :class:`GammaDrift` and
    ``(1 + a*xi**2/n)**(-n)`` for :class:`PowerFamily`; the matching operation
    is ``kind.operation()``.
    """
    if isinstance(kind, ExpDifference):
        f1 = Rational(ComplexRational([1.0], [1.0, -0.5j, 0.5]))
        f2 = Rational(ComplexRational([1.0], [1.0, 0.5j, 0.5]))
        return Counterexample(f1, f2, laplace(1.0))
    if isinstance(kind, SignedMixture):
        return Counterexample(*mixture_pair(kind.a), laplace(1.0))
    if isinstance(kind, GammaDrift):
        L = GammaBeta(kind.beta)
        f1 = Composed(L, 1.0, DriftedLKExponent(gamma=kind.b, sigma2=2.0 * kind.a1))
        f2 = Composed(L, 1.0, DriftedLKExponent(gamma=-kind.b, sigma2=2.0 * kind.a2))
        return Counterexample(f1, f2, Composed(L, kind.a1 + kind.a2, gaussian_exponent()))
    if isinstance(kind, PowerFamily):
        n, c = int(kind.n), math.sqrt(kind.a / kind.n)
        u1, u2 = (Rational(g.rational.rescale(c)) for g in mixture_pair(kind.theta))
        return Counterexample(Power(u1, n), Power(u2, n), Composed(GammaBeta(n), kind.a, gaussian_exponent()))
    raise ParameterError(f"unknown counterexample kind {kind!r}")


@dataclass(frozen=True, eq=False)
class BranchReport:
    beta: float
    a: float
    b: float
    grid_max_arg: float
    analytic_max_arg: float
    maximizer: float
    bound: float
    passed: bool
    roundtrip_error: float
    roundtrip_ok: bool


def principal_branch_check(beta, a, b, grid=None):
    """Check that ``w = 1 + (a*xi**2 - i*b*xi)/beta`` stays within ``|arg w| < pi/beta``.

    The maximum of ``|arg w|`` is ``arctan(|b| / (2*sqrt(a*beta)))``, attained
    at ``|xi| = sqrt(beta/a)``.  The report also measures how far the
    principal-branch round trip ``(w**(-beta))**(-1/beta)`` lands from ``w``.
    """
    if not (beta > 0 and a > 0):
        raise ParameterError(f"need beta > 0 and a > 0, got ({beta}, {a})")
    grid = default_grid() if grid is None else np.asarray(grid, dtype=float)
    w = 1.0 + (a * grid**2 - 1j * b * grid) / beta
    grid_max = float(np.max(np.abs(np.angle(w))))
    analytic = math.atan(abs(b) / (2.0 * math.sqrt(a * beta)))
    bound = math.pi / beta
    rt = np.power(np.power(w, -beta), -1.0 / beta)
    rt_err = float(np.max(np.abs(rt - w) / np.abs(w)))
    return BranchReport(
        beta, a, b, grid_max, analytic, math.sqrt(beta / a), bound,
        bool(analytic < bound and grid_max < bound), rt_err, rt_err < 1e-12,
    )


@dataclass(frozen=True, eq=False)
class LimitReport:
    family: str
    indices: tuple
    sups1: np.ndarray
    sups2: np.ndarray
    monotone: bool
    threshold: float
    final_below: bool

    @property
    def passed(self):
        return self.monotone and self.final_below


def gamma_drift_default_b(beta):
    """``min(1, sqrt(beta) * tan(pi / max(beta, 2.01)))``: admissible for ``a1, a2 >= 1/4``."""
    return min(1.0, math.sqrt(beta) * math.tan(math.pi / max(beta, 2.01)))


def gaussian_limit_scan(family, indices, *, a=1.0, theta=0.25, a1=1.0, a2=1.0, b_rule=None,
                        grid=None, threshold=0.01):
    """Sup distance of each factor to its Gaussian limit along a family index.

    ``family="power"`` walks ``n`` in :class:`PowerFamily` with limits
    ``exp(-theta*a/2*xi**2)`` and ``exp(-(1 - theta/2)*a*xi**2)``.
    ``family="gamma-drift"`` walks ``beta`` in :class:`GammaDrift` with
    ``b = b_rule(beta)`` and limits ``exp(-a_j*xi**2)``; an inadmissible
    ``(beta, b)`` raises :class:`~chfn.errors.AdmissibilityError`.

    ``monotone`` tests the first factor's sups for non-increase and
    ``final_below`` its last sup against ``threshold``.
    """
    grid = np.linspace(-5.0, 5.0, 1001) if grid is None else np.asarray(grid, dtype=float)
    sups1, sups2 = [], []
    for idx in indices:
        if family == "power":
            f1, f2, _ = make_counterexample(PowerFamily(a, int(idx), theta))
            g1 = np.exp(-theta * a / 2 * grid**2)
            g2 = np.exp(-(1 - theta / 2) * a * grid**2)
        elif family == "gamma-drift":
            rule = gamma_drift_default_b if b_rule is None else b_rule
            f1, f2, _ = make_counterexample(GammaDrift(float(idx), a1, a2, rule(float(idx))))
            g1 = np.exp(-a1 * grid**2)
            g2 = np.exp(-a2 * grid**2)
        else:
            raise ParameterError(f"unknown family {family!r}")
        sups1.append(float(np.max(np.abs(f1(grid) - g1))))
        sups2.append(float(np.max(np.abs(f2(grid) - g2))))
    s1 = np.array(sups1)
    monotone = bool(np.all(np.diff(s1) <= 0))
    return LimitReport(family, tuple(indices), s1, np.array(sups2), monotone, threshold,
                       bool(s1[-1] < threshold))
