"""Fourier inversion of characteristic functions to densities.

Even rational characteristic functions invert in closed form through

    integral of exp(i*xi*x) * exp(-sqrt(lam)*|x|) / (2*sqrt(lam)) dx = 1/(xi**2 + lam),

so a partial-fraction expansion in ``u = xi**2`` gives the density as a
signed combination of Laplace kernels plus an atom at the origin.  A generic
quadrature route serves as an independent oracle and handles functions with
no real-root expansion.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as P
from scipy import integrate

from chfn.cf import Rational
from chfn.errors import ConjugatePairError, MultiplicityError, ParameterError, StructureError
from chfn.rational import ComplexRational, degree, trim

POSITIVITY_THRESHOLD = -1e-12
ROOT_IMAG_RTOL = 1e-10
ROOT_SEP_RTOL = 1e-8


@dataclass(frozen=True)
class DensityMixture:
    """``atom0 * delta_0 + sum_k A_k/(2*rate_k) * exp(-rate_k*|x|) dx`` with ``rate_k = sqrt(lam_k)``."""

    atom0: float
    terms: tuple

    def __post_init__(self):
        terms = tuple((float(A), float(rate)) for A, rate in self.terms)
        if any(rate <= 0 for _, rate in terms):
            raise ParameterError("Laplace rates must be positive")
        object.__setattr__(self, "atom0", float(self.atom0))
        object.__setattr__(self, "terms", terms)

    @property
    def weights(self):
        return np.array([A for A, _ in self.terms])

    @property
    def rates(self):
        return np.array([r for _, r in self.terms])

    @property
    def lambdas(self):
        return self.rates**2

    @property
    def mass(self):
        return self.atom0 + math.fsum(A / r**2 for A, r in self.terms)

    def pdf(self, x):
        """Density of the absolutely continuous part."""
        ax = np.abs(np.asarray(x, dtype=float))
        out = np.zeros_like(ax)
        for A, r in self.terms:
            out = out + A / (2.0 * r) * np.exp(-r * ax)
        return out[()] if out.ndim == 0 else out

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        out = np.where(x >= 0, self.atom0, 0.0)
        for A, r in self.terms:
            lam = r * r
            tail = A / (2.0 * lam) * np.exp(-r * np.abs(x))
            out = out + np.where(x < 0, tail, A / lam - tail)
        return out[()] if out.ndim == 0 else out

    def cf(self):
        """The mixture's characteristic function as an exact rational."""
        total = ComplexRational.constant(self.atom0)
        for A, r in self.terms:
            total = total + ComplexRational([A], [r * r, 0.0, 1.0])
        return Rational(total)


def _roots_in_u(den_u):
    deg = degree(den_u)
    c = np.asarray(den_u, dtype=float)
    if deg == 1:
        return np.array([-c[0] / c[1]], dtype=complex)
    if deg == 2:
        a2, a1, a0 = c[2], c[1], c[0]
        disc = a1 * a1 - 4 * a2 * a0
        if disc < 0:
            sq = 1j * math.sqrt(-disc)
            return np.array([(-a1 + sq) / (2 * a2), (-a1 - sq) / (2 * a2)])
        # cancellation-free pair
        q = -0.5 * (a1 + math.copysign(math.sqrt(disc), a1 if a1 != 0 else 1.0))
        return np.array([q / a2, a0 / q], dtype=complex)
    if deg > 8:
        raise StructureError(f"denominator degree {deg} in xi^2 exceeds the supported 8")
    return P.polyroots(c).astype(complex)


def _even_real_parts(f):
    rat = f.as_rational() if hasattr(f, "as_rational") else f
    if not (rat.is_even() and rat.has_real_coefficients()):
        raise StructureError("expected a real, even rational function")
    return rat.even_parts()


def _expand_u(num_u, den_u):
    roots = _roots_in_u(den_u)
    scale = max(1.0, np.abs(roots).max())
    for r in roots:
        if abs(r.imag) > ROOT_IMAG_RTOL * scale:
            raise ConjugatePairError(f"complex root {r} in xi^2; not a Laplace mixture")
    roots = np.sort(roots.real)[::-1]
    if np.any(roots >= 0):
        raise StructureError("roots in xi^2 must be negative (poles off the real axis)")
    if len(roots) > 1 and np.min(np.abs(np.diff(roots))) <= ROOT_SEP_RTOL * scale:
        raise MultiplicityError("repeated root in xi^2")
    dden = P.polyder(den_u)
    return [(float(P.polyval(r, num_u) / P.polyval(r, dden)), float(-r)) for r in roots]


def partial_fractions_even(f):
    """Expand an even real rational ``f`` as ``sum_k A_k / (xi**2 + lam_k)``.

    Requires ``deg_u(num) < deg_u(den)`` and simple real negative roots of the
    denominator in ``u = xi**2``.  Returns ``[(A_k, lam_k)]`` ordered by
    increasing ``lam_k``.

    Raises
    ------
    ConjugatePairError
        A root in ``u`` is complex (e.g. ``1/(1 + xi**4)``).
    MultiplicityError
        Two roots coincide.
    """
    num_u, den_u = _even_real_parts(f)
    if degree(num_u) >= degree(den_u):
        raise StructureError("numerator degree in xi^2 must be below the denominator's")
    return _expand_u(num_u, den_u)


def density_from_even_rational(f):
    """Closed-form density of an even real rational characteristic function.

    The value of ``f`` at infinity becomes the atom at the origin; the proper
    remainder is expanded by :func:`partial_fractions_even`.
    """
    num_u, den_u = _even_real_parts(f)
    atom0 = 0.0
    if degree(num_u) > degree(den_u):
        raise StructureError("f is unbounded at infinity")
    if degree(num_u) == degree(den_u):
        q, rem = P.polydiv(num_u, den_u)
        atom0 = float(q[0])
        num_u = trim(rem, 1e-14 * np.abs(num_u).max()).real
    terms = []
    if degree(num_u) >= 0:
        terms = [(A, math.sqrt(lam)) for A, lam in _expand_u(num_u, den_u)]
    return DensityMixture(atom0, tuple(terms))


@dataclass(frozen=True, eq=False)
class NumericDensity:
    x: np.ndarray
    p: np.ndarray
    error_estimate: float
    cutoff: float
    warning: str | None = None


def _tail_warning(f):
    probe = np.array([1e3, 2e3, 1e4])
    mags = np.abs(np.asarray(f(probe)))
    if mags[-1] < 1e-12:
        return None
    # |f| <= C / xi^2 on the truncation boundary
    if mags[2] * probe[2] ** 2 > 10.0 * max(mags[0] * probe[0] ** 2, 1e-300):
        return "characteristic function decays slower than xi^-2; inversion may be inaccurate"
    return None


def _cutoff(f, tol=1e-8):
    xi = 1.0
    while xi < 1e7:
        if np.max(np.abs(f(np.linspace(xi, 2 * xi, 17)))) < tol:
            return xi
        xi *= 2
    return math.inf


def _scalar_evaluator(f):
    """Fast scalar callable for the quadrature loop (Horner for rationals)."""
    rat = getattr(f, "rational", None)
    if not isinstance(rat, ComplexRational):
        return lambda t: complex(f(t))
    num = [complex(c) for c in rat.num[::-1]]
    den = [complex(c) for c in rat.den[::-1]]

    def horner(t):
        n = d = 0j
        for c in num:
            n = n * t + c
        for c in den:
            d = d * t + c
        return n / d

    return horner


def numeric_inversion(f, x, *, even=None):
    """``p(x) = (1/pi) * int_0^inf Re[exp(-i*xi*x) f(xi)] dxi`` by adaptive quadrature.

    Oscillatory integrals use QUADPACK's Fourier-weighted routine on the
    half line; the origin uses plain adaptive integration.  For even real
    ``f`` only the cosine transform is computed.
    """
    x = np.asarray(x, dtype=float)
    if even is None:
        probe = np.linspace(0.1, 10.0, 37)
        vals = np.asarray(f(probe))
        even = bool(np.allclose(vals, np.asarray(f(-probe)), rtol=0, atol=1e-14)
                    and np.max(np.abs(np.imag(vals))) < 1e-14)
    g = _scalar_evaluator(f)
    re = lambda t: g(t).real  # noqa: E731
    im = lambda t: g(t).imag  # noqa: E731
    out = np.empty_like(x)
    err = 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        for i, xv in enumerate(np.ravel(x)):
            ax = abs(xv)
            if ax == 0:
                val, e = integrate.quad(re, 0, np.inf, limit=500)
            else:
                val, e = integrate.quad(re, 0, np.inf, weight="cos", wvar=ax, limlst=200)
                if not even:
                    v2, e2 = integrate.quad(im, 0, np.inf, weight="sin", wvar=ax, limlst=200)
                    val, e = val + math.copysign(v2, xv), e + e2
            out.flat[i] = val / math.pi
            err = max(err, e / math.pi)
    return NumericDensity(x, out, err, _cutoff(f), _tail_warning(f))


@dataclass(frozen=True, eq=False)
class PositivityReport:
    grid: np.ndarray
    grid_min: float
    argmin: float
    lower_bound_constant: float | None
    threshold: float
    passed: bool

    @property
    def certified(self):
        """Analytic lower bound present and nonnegative."""
        return self.lower_bound_constant is not None and self.lower_bound_constant >= 0


def positivity_report(p, grid=None, threshold=POSITIVITY_THRESHOLD):
    """Grid minimum of a density on ``x >= 0`` plus the two-term analytic bound.

    For a :class:`DensityMixture` the default grid is 2001 points on
    ``[0, 10/min(rate)]``.  When the mixture has exactly two terms with the
    positive weight on the slower rate, the constant
    ``A+/(2*sqrt(lam-)) + A-/(2*sqrt(lam+))`` is reported: the density is
    bounded below by this constant times ``exp(-sqrt(lam-)*|x|)``.
    """
    if isinstance(p, NumericDensity):
        xs, vals = np.ravel(p.x), np.ravel(p.p)
        const = None
    else:
        if grid is None:
            hi = 10.0 / p.rates.min() if p.terms else 1.0
            grid = np.linspace(0.0, hi, 2001)
        xs = np.asarray(grid, dtype=float)
        vals = np.asarray(p.pdf(xs))
        const = None
        if len(p.terms) == 2:
            (A_slow, r_slow), (A_fast, r_fast) = sorted(p.terms, key=lambda t: t[1])
            if A_slow > 0 > A_fast:
                const = A_slow / (2 * r_slow) + A_fast / (2 * r_fast)
    k = int(np.argmin(vals))
    gmin = float(vals[k])
    return PositivityReport(xs, gmin, float(xs[k]), const, threshold, bool(gmin >= threshold))


def bochner_min_eig(f, points):
    """Smallest eigenvalue of the Hermitian matrix ``[f(xi_j - xi_k)]``."""
    pts = np.asarray(points, dtype=float)
    if pts.size < 2 or np.unique(pts).size < 2:
        raise ParameterError("need at least two distinct points")
    m = np.asarray(f(pts[:, None] - pts[None, :]), dtype=complex)
    m = 0.5 * (m + m.conj().T)
    return float(np.linalg.eigvalsh(m)[0])
