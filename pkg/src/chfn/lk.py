"""Lévy–Khintchine exponents with atomic Lévy measures.

Two flavours are supported:

* :class:`LKExponent`: symmetric exponents
  ``psi(xi) = sigma2/2 * xi**2 + sum_i c_i * (1 - cos(t_i * xi))``, the
  class of real, nonnegative continuous negative definite functions that
  vanish at the origin.
* :class:`DriftedLKExponent`: exponents with drift ``gamma`` and an atomic
  Lévy measure on the whole line, written so that ``-psi`` is the usual
  Lévy–Khintchine exponent with truncation ``1{|x| <= 1}``.

The module also houses the indecomposability classifier and the tests built on
``psi = 1/f - 1`` for rational characteristic functions (geometric infinite
divisibility and the Laplace characterization of Kac's equation).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from chfn.errors import EvaluationError, ParameterError, PreconditionError
from chfn.rational import ComplexRational

ATOM_MERGE_TOL = 1e-12
COEFF_RTOL = 1e-10
GAMMA_ZERO_TOL = 1e-10


def _canonical_atoms(atoms, *, positive_support):
    pairs = []
    for item in atoms:
        loc, c = (float(v) for v in item)
        if not (np.isfinite(loc) and np.isfinite(c)):
            raise ParameterError("atom location and weight must be finite")
        if positive_support and loc <= 0:
            raise ParameterError(f"atom location must be positive, got {loc}")
        if not positive_support and loc == 0:
            raise ParameterError("atom location must be nonzero")
        if c <= 0:
            raise ParameterError(f"atom weight must be positive, got {c}")
        pairs.append((loc, c))
    pairs.sort()
    merged = []
    for loc, c in pairs:
        if merged and abs(loc - merged[-1][0]) <= ATOM_MERGE_TOL:
            merged[-1] = (merged[-1][0], merged[-1][1] + c)
        else:
            merged.append((loc, c))
    return tuple(merged)


@dataclass(frozen=True)
class LKExponent:
    """Symmetric exponent with Gaussian coefficient ``sigma2`` and atoms ``(t, c)``."""

    sigma2: float = 0.0
    atoms: tuple = field(default=())

    def __post_init__(self):
        sigma2 = float(self.sigma2)
        if not np.isfinite(sigma2) or sigma2 < 0:
            raise ParameterError(f"sigma2 must be a finite nonnegative number, got {self.sigma2}")
        object.__setattr__(self, "sigma2", sigma2)
        object.__setattr__(self, "atoms", _canonical_atoms(self.atoms, positive_support=True))

    @property
    def is_zero(self):
        return self.sigma2 == 0 and not self.atoms

    def __call__(self, xi):
        xi = np.asarray(xi, dtype=float)
        out = 0.5 * self.sigma2 * xi**2
        for t, c in self.atoms:
            # 1 - cos(x) = 2 sin^2(x/2) keeps small arguments accurate
            out = out + 2.0 * c * np.sin(0.5 * t * xi) ** 2
        return out[()] if np.ndim(out) == 0 else out

    def scaled(self, s):
        if s < 0:
            raise ParameterError("scale must be nonnegative")
        if s == 0:
            return LKExponent()
        return LKExponent(s * self.sigma2, tuple((t, s * c) for t, c in self.atoms))

    def polynomial_coefficients(self):
        """Ascending coefficients in ``xi`` when the exponent has no atoms, else ``None``."""
        if self.atoms:
            return None
        return np.array([0.0, 0.0, 0.5 * self.sigma2])


@dataclass(frozen=True)
class DriftedLKExponent:
    """Exponent ``psi`` with ``-psi(xi) = i*gamma*xi - sigma2/2*xi**2 + int(...) nu(dx)``.

    The Lévy measure is ``sum_i c_i * delta_{x_i}`` with ``x_i != 0``; the
    compensator uses the truncation ``1{|x| <= 1}``.
    """

    gamma: float = 0.0
    sigma2: float = 0.0
    atoms: tuple = field(default=())

    def __post_init__(self):
        gamma, sigma2 = float(self.gamma), float(self.sigma2)
        if not np.isfinite(gamma):
            raise ParameterError("gamma must be finite")
        if not np.isfinite(sigma2) or sigma2 < 0:
            raise ParameterError(f"sigma2 must be a finite nonnegative number, got {self.sigma2}")
        object.__setattr__(self, "gamma", gamma)
        object.__setattr__(self, "sigma2", sigma2)
        object.__setattr__(self, "atoms", _canonical_atoms(self.atoms, positive_support=False))

    def __call__(self, xi):
        xi = np.asarray(xi, dtype=float)
        out = -1j * self.gamma * xi + 0.5 * self.sigma2 * xi**2
        for x, c in self.atoms:
            comp = x if abs(x) <= 1 else 0.0
            out = out - c * (np.expm1(1j * x * xi) - 1j * comp * xi)
        out = np.asarray(out, dtype=complex)
        return out[()] if out.ndim == 0 else out

    def polynomial_coefficients(self):
        if self.atoms:
            return None
        return np.array([0.0, -1j * self.gamma, 0.5 * self.sigma2])


def lk_eval(psi, xi):
    """Evaluate a symmetric (real) or drifted (complex) exponent at ``xi``."""
    return psi(xi)


def lk_combine(psi1, psi2, scale1=1.0, scale2=1.0):
    """Return ``scale1 * psi1 + scale2 * psi2`` as a single :class:`LKExponent`.

    Gaussian coefficients add; atom lists are merged with coincident
    locations (within :data:`ATOM_MERGE_TOL`) combined.
    """
    if scale1 < 0 or scale2 < 0:
        raise ParameterError("scales must be nonnegative")
    atoms = [(t, scale1 * c) for t, c in psi1.atoms if scale1 > 0]
    atoms += [(t, scale2 * c) for t, c in psi2.atoms if scale2 > 0]
    return LKExponent(scale1 * psi1.sigma2 + scale2 * psi2.sigma2, tuple(atoms))


class Indecomposability(enum.Enum):
    GAUSSIAN = "indecomposable-gaussian"
    COSINE = "indecomposable-cosine"
    DECOMPOSABLE = "decomposable"
    ZERO = "zero"


@dataclass(frozen=True)
class IndecomposableReport:
    verdict: Indecomposability
    t: float | None = None

    @property
    def indecomposable(self):
        return self.verdict in (Indecomposability.GAUSSIAN, Indecomposability.COSINE)


def is_indecomposable(psi):
    """Classify ``psi`` against the rays ``c*xi**2`` and ``c*(1 - cos(t*xi))``."""
    if psi.is_zero:
        return IndecomposableReport(Indecomposability.ZERO)
    if not psi.atoms:
        return IndecomposableReport(Indecomposability.GAUSSIAN)
    if psi.sigma2 == 0 and len(psi.atoms) == 1:
        return IndecomposableReport(Indecomposability.COSINE, psi.atoms[0][0])
    return IndecomposableReport(Indecomposability.DECOMPOSABLE)


def indecomposable_parts(psi):
    """Split ``psi`` into its indecomposable summands (Gaussian part, then one per atom)."""
    parts = []
    if psi.sigma2 > 0:
        parts.append(LKExponent(psi.sigma2))
    parts.extend(LKExponent(0.0, ((t, c),)) for t, c in psi.atoms)
    return parts


# --- psi = 1/f - 1 for rational characteristic functions ------------------


def _rational_of(f):
    if isinstance(f, ComplexRational):
        return f
    return f.as_rational()


def exponent_of(f):
    """The rational function ``1/f - 1`` (zero of ``f`` at the origin is an error)."""
    return _rational_of(f).reciprocal() - 1


def drifted_quadratic(psi, rtol=COEFF_RTOL):
    """Match ``psi`` against ``-i*gamma*xi + a*xi**2`` with real ``gamma`` and ``a >= 0``.

    Returns ``(gamma, a)`` or ``None`` when the coefficients do not have that
    form.  ``|gamma| < GAMMA_ZERO_TOL`` is snapped to 0.
    """
    if not psi.is_polynomial() or psi.num_degree > 2:
        return None
    c = np.zeros(3, dtype=complex)
    c[: len(psi.num)] = psi.num
    tol = rtol * max(1.0, np.abs(c).max())
    if abs(c[0]) > tol or abs(c[1].real) > tol or abs(c[2].imag) > tol or c[2].real < -tol:
        return None
    gamma = -c[1].imag
    if abs(gamma) < GAMMA_ZERO_TOL:
        gamma = 0.0
    return float(gamma), float(max(c[2].real, 0.0))


class GidVerdict(enum.Enum):
    GID = "gid"
    NOT_GID = "not-gid"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class GidReport:
    verdict: GidVerdict
    gamma: float | None
    a: float | None
    structural_match: bool
    gram_min_eigs: dict
    psi: ComplexRational


def _gram_min_eig(values):
    m = 0.5 * (values + values.conj().T)
    return float(np.linalg.eigvalsh(m)[0])


def geometric_id_check(f, *, ts=(0.1, 0.5, 1.0, 2.0), n_points=16, span=10.0, seed=0, eig_tol=1e-10):
    """Semi-decide geometric infinite divisibility of a rational characteristic function.

    The structural path recognizes ``1/f - 1 = -i*gamma*xi + a*xi**2`` and
    answers ``GID`` with the extracted ``(gamma, a)``.  Otherwise the Gram
    matrices ``[exp(-t*psi(xi_j - xi_k))]`` are tested on ``n_points`` random
    points for each ``t``: a negative eigenvalue proves the answer is no,
    while a pass leaves the verdict ``UNKNOWN``.
    """
    psi = exponent_of(f)
    rat = _rational_of(f)
    rng = np.random.default_rng(seed)
    pts = rng.uniform(-span, span, n_points)
    diffs = pts[:, None] - pts[None, :]
    fvals = rat(diffs)
    if np.any(fvals == 0):
        raise EvaluationError("f vanishes on the test grid")
    match = drifted_quadratic(psi)
    if match is not None:
        return GidReport(GidVerdict.GID, match[0], match[1], True, {}, psi)
    psi_vals = 1.0 / fvals - 1.0
    eigs = {}
    verdict = GidVerdict.UNKNOWN
    for t in ts:
        eigs[t] = _gram_min_eig(np.exp(-t * psi_vals))
        if eigs[t] < -eig_tol:
            verdict = GidVerdict.NOT_GID
    return GidReport(verdict, None, None, False, eigs, psi)


class Symmetry(enum.Enum):
    REAL_VALUED = "real"
    EVEN = "even"
    NONE = "none"


class ClassVerdict(enum.Enum):
    LAPLACE = "laplace"
    DRIFTED = "drifted"
    NOT_GID = "not-gid"


@dataclass(frozen=True)
class Classification:
    verdict: ClassVerdict
    a1: float | None = None
    a2: float | None = None
    gamma1: float | None = None
    gamma2: float | None = None
    failing_factor: int | None = None
    detail: str = ""
    identity_residual: float = 0.0


def _default_grid():
    return np.linspace(-20.0, 20.0, 401)


def main_theorem_classify(f1, f2, symmetry=Symmetry.NONE, grid=None, tol=1e-10):
    """Run the Laplace characterization on a rational pair solving Kac's equation.

    Checks ``1/f1 + 1/f2 = 2 + xi**2`` on ``grid`` (relative tolerance
    ``tol``), then reads ``psi_j = 1/f_j - 1``.  When both are of the form
    ``-i*gamma_j*xi + a_j*xi**2`` the pair is returned in drifted form, or in
    Laplace form when a symmetry of ``f1`` is asserted.  A factor whose
    exponent is not of that form makes the pair ``NOT_GID``: geometrically
    infinitely divisible solutions always have quadratic exponents.
    """
    symmetry = Symmetry(symmetry)
    grid = _default_grid() if grid is None else np.asarray(grid, dtype=float)
    r1, r2 = _rational_of(f1), _rational_of(f2)
    v1, v2 = r1(grid), r2(grid)
    if np.any(v1 == 0) or np.any(v2 == 0):
        raise PreconditionError("a factor vanishes on the grid")
    lhs = 1.0 / v1 + 1.0 / v2
    rhs = 2.0 + grid**2
    residual = float(np.max(np.abs(lhs - rhs) / rhs))
    if residual > tol:
        raise PreconditionError(f"pair does not satisfy 1/f1 + 1/f2 = 2 + xi^2 (residual {residual:.3e})")
    if symmetry is Symmetry.REAL_VALUED and np.max(np.abs(v1.imag)) > tol:
        raise PreconditionError("f1 was declared real-valued but is not on the grid")
    if symmetry is Symmetry.EVEN and np.max(np.abs(r1(-grid) - v1)) > tol:
        raise PreconditionError("f1 was declared even but is not on the grid")

    parts = []
    for j, r in ((1, r1), (2, r2)):
        m = drifted_quadratic(r.reciprocal() - 1)
        if m is None:
            return Classification(
                ClassVerdict.NOT_GID,
                failing_factor=j,
                detail=f"1/f{j} - 1 is not of the form -i*gamma*xi + a*xi^2",
                identity_residual=residual,
            )
        parts.append(m)
    (g1, a1), (g2, a2) = parts
    if abs(g1 + g2) > tol or abs(a1 + a2 - 1.0) > tol:
        raise PreconditionError("extracted triplets violate gamma1+gamma2=0, a1+a2=1")
    if symmetry is not Symmetry.NONE:
        if g1 != 0.0 or g2 != 0.0:
            raise PreconditionError("symmetric f1 produced a nonzero drift")
        return Classification(ClassVerdict.LAPLACE, a1, a2, 0.0, 0.0, identity_residual=residual)
    return Classification(ClassVerdict.DRIFTED, a1, a2, g1, g2, identity_residual=residual)
