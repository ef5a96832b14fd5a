"""Probability generating functions and the discrete analog of Kac's operation.

A Bernstein function ``eta`` with ``eta(0) = 0`` and a completely monotone
kernel ``L`` give the pgf ``z -> L(a * eta(1 - z))``.  The operation
``Phi_L`` acts on such pgfs exactly as on characteristic functions, so the
same question (does the identity force both factors into the family?) has
a discrete counterpart, answered negatively by explicit rational pairs.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as P

from chfn.errors import (
    DomainError,
    InvalidPGFError,
    MultiplicityError,
    ParameterError,
    StructureError,
)
from chfn.kernels import CMKernel, GammaBeta, Kac
from chfn.rational import ComplexRational, degree, trim

NEG_TOL = -1e-14
AFFINE_RTOL = 1e-8
FIT_RTOL = 1e-10
POLE_SEP_RTOL = 1e-8
UNIT_TOL = 1e-12


# --- Bernstein functions ----------------------------------------------------


@dataclass(frozen=True)
class BernsteinFn:
    """``eta(u) = b*u + sum_i c_i * (1 - exp(-s_i*u))``."""

    b: float = 0.0
    atoms: tuple = ()

    def __post_init__(self):
        b = float(self.b)
        if not (np.isfinite(b) and b >= 0):
            raise ParameterError(f"linear coefficient must be nonnegative, got {self.b}")
        merged = {}
        for s, c in self.atoms:
            s, c = float(s), float(c)
            if not (s > 0 and c > 0 and np.isfinite(s) and np.isfinite(c)):
                raise ParameterError(f"atoms need positive location and mass, got ({s}, {c})")
            merged[s] = merged.get(s, 0.0) + c
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "atoms", tuple(sorted(merged.items())))

    def __call__(self, u):
        u = np.asarray(u)
        out = self.b * u
        for s, c in self.atoms:
            out = out - c * np.expm1(-s * u)
        return out[()] if np.ndim(out) == 0 else out

    @property
    def is_zero(self):
        return self.b == 0 and not self.atoms


IDENTITY = BernsteinFn(1.0)


class BernsteinVerdict(enum.Enum):
    LINEAR = "linear"
    EXP_ATOM = "exp-atom"
    DECOMPOSABLE = "decomposable"
    ZERO = "zero"


@dataclass(frozen=True)
class BernsteinReport:
    verdict: BernsteinVerdict
    s: float | None = None

    @property
    def indecomposable(self):
        return self.verdict in (BernsteinVerdict.LINEAR, BernsteinVerdict.EXP_ATOM)


def bernstein_indecomposable(eta):
    """Classify ``eta`` against the rays ``c*u`` and ``c*(1 - exp(-s*u))``."""
    if eta.is_zero:
        return BernsteinReport(BernsteinVerdict.ZERO)
    if not eta.atoms:
        return BernsteinReport(BernsteinVerdict.LINEAR)
    if eta.b == 0 and len(eta.atoms) == 1:
        return BernsteinReport(BernsteinVerdict.EXP_ATOM, eta.atoms[0][0])
    return BernsteinReport(BernsteinVerdict.DECOMPOSABLE)


# --- pgfs ---------------------------------------------------------------------


def _check_z(z):
    z = np.asarray(z)
    if np.iscomplexobj(z):
        if np.any(np.abs(z) > 1 + UNIT_TOL):
            raise DomainError("complex argument must lie in the closed unit disk", z)
        return z
    z = z.astype(float)
    if np.any(~((z >= 0) & (z <= 1))):
        raise DomainError("argument must lie in [0, 1]", z)
    return z


def _out(v):
    v = np.asarray(v)
    if not np.iscomplexobj(v) or np.all(np.imag(v) == 0):
        v = np.real(v)
    return v[()] if v.ndim == 0 else v


class PGF:
    def __call__(self, z):
        return _out(self._eval(_check_z(z)))

    def _eval(self, z):
        raise NotImplementedError


@dataclass(frozen=True, eq=False)
class RationalZ(PGF):
    """Ratio of real polynomials in ``z`` (ascending coefficients)."""

    rational: ComplexRational

    def __post_init__(self):
        if not self.rational.has_real_coefficients():
            raise InvalidPGFError("pgf coefficients must be real")
        if abs(self.rational(1.0) - 1.0) > UNIT_TOL:
            raise InvalidPGFError(f"G(1) = {complex(self.rational(1.0)).real!r}, expected 1")

    @classmethod
    def from_coeffs(cls, num, den):
        return cls(ComplexRational(num, den))

    @property
    def num(self):
        return self.rational.num.real

    @property
    def den(self):
        return self.rational.den.real

    def _eval(self, z):
        return self.rational(z)


@dataclass(frozen=True, eq=False)
class ComposedZ(PGF):
    """``kernel(a * eta(1 - z))``."""

    kernel: CMKernel
    a: float
    eta: BernsteinFn

    def __post_init__(self):
        a = float(self.a)
        if not (np.isfinite(a) and a >= 0):
            raise ParameterError(f"a must be nonnegative, got {self.a}")
        object.__setattr__(self, "a", a)

    def exponent_values(self, z):
        return self.a * self.eta(1.0 - np.asarray(z))

    def _eval(self, z):
        return self.kernel(self.exponent_values(z))


@dataclass(frozen=True, eq=False)
class PowerOf(PGF):
    base: PGF
    n: int

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ParameterError(f"power must be a positive integer, got {self.n}")
        object.__setattr__(self, "n", int(self.n))

    def _eval(self, z):
        return np.asarray(self.base._eval(z)) ** self.n


def pgf_eval(G, z):
    return G(z)


def _op_kernel(op):
    if isinstance(op, CMKernel):
        return op
    if op == "kac":
        return Kac()
    if isinstance(op, int) and op >= 1:
        return Kac() if op == 1 else GammaBeta(op)
    raise ParameterError(f"unknown operation {op!r}; use 'kac', an integer n, or a kernel")


def pgf_phi(op, G1, G2, z):
    """``Phi(G1(z), G2(z))`` for ``op`` in {'kac', n} (``Phi_n``) or any kernel."""
    L = _op_kernel(op)
    x = np.asarray(G1(z), dtype=float)
    y = np.asarray(G2(z), dtype=float)
    for v in (x, y):
        if np.any(v <= 0):
            raise DomainError("pgf values must be positive", v)
    # G(1) may round to 1 + ulp
    x = np.where((x > 1) & (x <= 1 + UNIT_TOL), 1.0, x)
    y = np.where((y > 1) & (y <= 1 + UNIT_TOL), 1.0, y)
    return _out(L.phi(x, y))


# --- series coefficients ----------------------------------------------------


@dataclass(frozen=True)
class PoleTerm:
    """``A * sum_n p**n z**n``, i.e. ``A / (1 - p*z)``."""

    A: complex
    p: complex


def _pole_expansion(G):
    """Polynomial part and simple-pole terms of a :class:`RationalZ`."""
    num, den = G.num, G.den
    poly = np.zeros(1)
    if degree(num) >= degree(den):
        poly, num = P.polydiv(num, den)
        num = trim(num, 1e-15 * np.abs(G.num).max()).real
    poles = P.polyroots(den) if degree(den) > 0 else np.array([])
    if poles.size:
        if np.any(np.abs(poles) <= 1.0):
            bad = poles[np.abs(poles) <= 1.0][0]
            raise InvalidPGFError(f"pole {bad} inside the closed unit disk")
        gaps = np.abs(poles[:, None] - poles[None, :])
        np.fill_diagonal(gaps, np.inf)
        if np.min(gaps) <= POLE_SEP_RTOL * np.abs(poles).max():
            raise MultiplicityError("repeated pole")
    dden = P.polyder(den)
    terms = []
    for zk in poles:
        R = P.polyval(zk, num) / P.polyval(zk, dden)
        terms.append(PoleTerm(-R / zk, 1.0 / zk))
    terms.sort(key=lambda t: -abs(t.p))
    return np.asarray(poly, dtype=float), tuple(terms)


def _fft_coefficients(G, N):
    M = 4096
    while M < 8 * (N + 1):
        M *= 2
    z = np.exp(2j * np.pi * np.arange(M) / M)
    vals = np.asarray(G._eval(z), dtype=complex)
    c = np.fft.fft(vals) / M
    return c[: N + 1].real


def _cauchy_power(c, n, N):
    out = np.zeros(N + 1)
    out[0] = 1.0
    for _ in range(n):
        out = np.convolve(out, c)[: N + 1]
    return out


def _series(G, N):
    if isinstance(G, RationalZ):
        poly, terms = _pole_expansion(G)
        k = np.arange(N + 1)
        c = np.zeros(N + 1, dtype=complex)
        c[: min(poly.size, N + 1)] += poly[: N + 1]
        for t in terms:
            c += t.A * t.p**k
        # the signed two-term bound only applies to a pure pole expansion
        return c.real, (None if np.any(poly) else terms)
    if isinstance(G, PowerOf):
        base, _ = _series(G.base, N)
        return _cauchy_power(base, G.n, N), None
    if isinstance(G, ComposedZ):
        return _fft_coefficients(G, N), None
    raise ParameterError(f"unsupported pgf {type(G).__name__}")


@dataclass(frozen=True, eq=False)
class NonnegReport:
    coeffs: np.ndarray
    min_coeff: float
    argmin: int
    partial_mass: float
    lower_bound: np.ndarray | None
    lower_bound_holds: bool | None
    passed: bool


def _two_term_bound(terms, N):
    """``p**n * (A + B)`` when the expansion is ``A p^n + B q^n`` with ``0 < q < p`` and ``B < 0``."""
    if terms is None or len(terms) != 2:
        return None
    (hi, lo) = terms
    if any(abs(t.p.imag) > 0 or abs(t.A.imag) > 0 for t in terms):
        return None
    A, p, B, q = hi.A.real, hi.p.real, lo.A.real, lo.p.real
    if not (0 < q < p and B < 0 < A):
        return None
    return p ** np.arange(N + 1) * (A + B)


def coefficients(G, N):
    """First ``N + 1`` series coefficients of ``G`` and their nonnegativity report.

    Rational pgfs expand by partial fractions (``A_k = -R_k/z_k``,
    ``p_k = 1/z_k`` for residue ``R_k`` at pole ``z_k``); powers use repeated
    Cauchy products of the base coefficients; composed pgfs are sampled on
    the unit circle and transformed by FFT.
    """
    if int(N) != N or N < 1:
        raise ParameterError(f"order must be a positive integer, got {N}")
    N = int(N)
    c, terms = _series(G, N)
    bound = _two_term_bound(terms, N)
    holds = None if bound is None else bool(np.all(c >= bound))
    k = int(np.argmin(c))
    return c, NonnegReport(
        coeffs=c,
        min_coeff=float(c[k]),
        argmin=k,
        partial_mass=math.fsum(c),
        lower_bound=bound,
        lower_bound_holds=holds,
        passed=bool(c[k] >= NEG_TOL),
    )


# --- family membership and factor recovery --------------------------------


@dataclass(frozen=True)
class AffineReport:
    residual: float
    slope: float
    intercept: float
    in_family: bool


def affineness_test(G, n=1, points=11, rtol=AFFINE_RTOL):
    """Fit ``G**(-1/n) - 1`` against ``1 - z`` on ``points`` nodes of ``[0, 1]``.

    Geometric (``n = 1``) and negative binomial pgfs make this exactly
    linear in ``1 - z``; a relative residual above ``rtol`` excludes ``G``
    from the family.
    """
    z = np.linspace(0.0, 1.0, points)
    h = np.asarray(G(z), dtype=float) ** (-1.0 / n) - 1.0
    w = 1.0 - z
    X = np.column_stack([np.ones_like(w), w])
    (c0, c1), *_ = np.linalg.lstsq(X, h, rcond=None)
    scale = max(np.max(np.abs(h)), 1e-300)
    res = float(np.max(np.abs(h - (c0 + c1 * w))) / scale)
    return AffineReport(res, float(c1), float(c0), res <= rtol)


def discrete_factor_recover(L, eta, G, points=201, rtol=FIT_RTOL):
    """Recover ``a`` with ``G(z) = L(a*eta(1 - z))`` for an indecomposable ``eta``.

    Raises
    ------
    StructureError
        The exponent of ``G`` is not a multiple of ``eta``, or the multiple
        lies outside ``[0, 1]``.
    """
    report = bernstein_indecomposable(eta)
    if not report.indecomposable:
        raise ParameterError(f"eta must be indecomposable, got {report.verdict.value}")
    z = np.linspace(0.0, 1.0, points)
    if isinstance(G, ComposedZ) and G.kernel == L:
        ex = np.asarray(G.exponent_values(z), dtype=float)
    else:
        try:
            ex = np.asarray(L.inverse(np.minimum(np.asarray(G(z), dtype=float), 1.0)))
        except DomainError as exc:
            raise StructureError("G takes values outside the kernel range") from exc
    target = eta(1.0 - z)
    a = float(np.dot(ex, target) / np.dot(target, target))
    scale = np.max(np.abs(ex))
    residual = 0.0 if scale == 0 else float(np.max(np.abs(ex - a * target)) / scale)
    if residual > rtol:
        raise StructureError(f"exponent is not proportional to eta (relative residual {residual:.3e})", residual)
    if a < -rtol or a > 1 + rtol:
        raise StructureError(f"recovered coefficient {a} lies outside [0, 1]", residual)
    return min(max(a, 0.0), 1.0)


# --- the rational counterexample pair ---------------------------------------


@dataclass(frozen=True, eq=False)
class DiscreteCounterexample:
    g1: PGF
    g2: PGF
    target: PGF
    n: int
    r: float
    p: float
    q: float
    A: float
    B: float


def _w_poly(c0, c1):
    """``c0 + c1*(1 - z)`` as ascending coefficients in ``z``."""
    return np.array([c0 + c1, -c1])


def mixture_pgfs(lam, theta):
    """``G1 = 1/2 + 1/(2*(1 + theta*lam*(1 - z)))`` and the ``G2`` completing the Kac identity."""
    tl = theta * lam
    g1 = ComplexRational(_w_poly(2.0, tl), _w_poly(2.0, 2.0 * tl))
    target = ComplexRational([1.0], _w_poly(1.0, lam))
    g2 = (target.reciprocal() + 1 - g1.reciprocal()).reciprocal()
    return RationalZ(g1), RationalZ(g2)


def discrete_counterexample(lam, theta, n=1):
    """Pair of pgfs solving ``Phi(G1, G2) = (1 + lam*(1 - z))**-1`` (``n = 1``) or its ``Phi_n`` analog.

    For ``n > 1`` the base pair is built at ``lam/n`` and raised to the
    ``n``-th power, which solves
    ``Phi_n(G1, G2) = (1 + lam*(1 - z)/n)**(-n)``.  The closed-form
    expansion ``G2 = sum (A p^k + B q^k) z^k`` of the base pair is returned
    alongside.
    """
    if not (np.isfinite(lam) and lam > 0):
        raise ParameterError(f"lambda must be positive, got {lam}")
    if not 0 < theta < 0.5:
        raise ParameterError(f"theta must lie in (0, 1/2), got {theta}")
    if int(n) != n or n < 1:
        raise ParameterError(f"n must be a positive integer, got {n}")
    n = int(n)
    lb = lam / n
    g1, g2 = mixture_pgfs(lb, theta)
    r = math.sqrt(1.0 - 2.0 * theta)
    p = lb * (1 + r) / (2 + lb * (1 + r))
    q = lb * (1 - r) / (2 + lb * (1 - r))
    A = (1 + r - theta) / (r * (2 + lb * (1 + r)))
    B = -(1 - r - theta) / (r * (2 + lb * (1 - r)))
    if n == 1:
        target = ComposedZ(Kac(), lam, IDENTITY)
    else:
        g1, g2 = PowerOf(g1, n), PowerOf(g2, n)
        target = ComposedZ(GammaBeta(n), lam, IDENTITY)
    return DiscreteCounterexample(g1, g2, target, n, r, p, q, A, B)


@dataclass(frozen=True, eq=False)
class DiscreteReport:
    pair: DiscreteCounterexample
    identity_residual: float
    nonneg1: NonnegReport
    nonneg2: NonnegReport
    affine1: AffineReport
    affine2: AffineReport

    @property
    def passed(self):
        return (
            self.identity_residual < 1e-12
            and self.nonneg1.passed
            and self.nonneg2.passed
            and not self.affine1.in_family
            and not self.affine2.in_family
        )


def discrete_report(lam, theta, n=1, order=200, points=101):
    """Build the pair and run the identity, nonnegativity and family-exclusion checks."""
    pair = discrete_counterexample(lam, theta, n)
    z = np.linspace(0.0, 1.0, points)
    lhs = pgf_phi(n, pair.g1, pair.g2, z)
    res = float(np.max(np.abs(lhs - pair.target(z))))
    _, nn1 = coefficients(pair.g1, order)
    _, nn2 = coefficients(pair.g2, order)
    return DiscreteReport(
        pair, res, nn1, nn2, affineness_test(pair.g1, n), affineness_test(pair.g2, n)
    )
