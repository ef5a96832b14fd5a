"""Seeded samplers for the laws behind each construction, and empirical-CF checks.

Every sampler is a pure function of ``(law, n, seed, stream)``: the generator
is PCG64 keyed by ``SeedSequence(seed, spawn_key=(stream,))``, so independent
streams can be drawn in any order and recombined deterministically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from chfn.cf import Composed, Rational
from chfn.errors import EnvelopeError, ParameterError, SamplerRefusalError
from chfn.inversion import DensityMixture, positivity_report
from chfn.kernels import CMKernel, Exp, GammaBeta, Kac, compose
from chfn.lk import DriftedLKExponent, LKExponent, lk_combine
from chfn.rational import ComplexRational

MIN_ACCEPTANCE = 0.01


def make_rng(seed, stream=0):
    if int(seed) != seed or seed < 0 or seed >= 2**64:
        raise ParameterError(f"seed must be an integer in [0, 2**64), got {seed}")
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(seed), spawn_key=(int(stream),))))


def _positive(name, v):
    if not (np.isfinite(v) and v > 0):
        raise ParameterError(f"{name} must be positive, got {v}")


# --- laws ------------------------------------------------------------------


@dataclass(frozen=True)
class Exponential:
    rate: float = 1.0

    def __post_init__(self):
        _positive("rate", self.rate)

    def draw(self, rng, n):
        return rng.exponential(1.0 / self.rate, n)

    def cf(self):
        return Rational(ComplexRational([1.0], [1.0, -1j / self.rate]))


@dataclass(frozen=True)
class Gamma:
    shape: float
    scale: float

    def __post_init__(self):
        _positive("shape", self.shape)
        _positive("scale", self.scale)

    def draw(self, rng, n):
        return rng.gamma(self.shape, self.scale, n)

    def cf(self):
        # (1 - i*scale*xi)^(-shape) = L_shape(-i*shape*scale*xi)
        return Composed(GammaBeta(self.shape), 1.0, DriftedLKExponent(gamma=self.shape * self.scale))


@dataclass(frozen=True)
class Normal:
    mean: float = 0.0
    var: float = 1.0

    def __post_init__(self):
        if not (np.isfinite(self.var) and self.var >= 0):
            raise ParameterError(f"var must be nonnegative, got {self.var}")

    def draw(self, rng, n):
        return self.mean + math.sqrt(self.var) * rng.standard_normal(n)

    def cf(self):
        return Composed(Exp(), 1.0, DriftedLKExponent(gamma=self.mean, sigma2=self.var))


@dataclass(frozen=True)
class Laplace:
    """Density ``rate/2 * exp(-rate*|x|)``."""

    rate: float = 1.0

    def __post_init__(self):
        _positive("rate", self.rate)

    def draw(self, rng, n):
        return rng.laplace(0.0, 1.0 / self.rate, n)

    def cf(self):
        return Rational(ComplexRational([1.0], [1.0, 0.0, 1.0 / self.rate**2]))


@dataclass(frozen=True)
class AtomLaplaceMix:
    """``w0 * delta_0 + (1 - w0) * Laplace(rate)``."""

    w0: float
    rate: float

    def __post_init__(self):
        if not 0 <= self.w0 <= 1:
            raise ParameterError(f"w0 must lie in [0, 1], got {self.w0}")
        _positive("rate", self.rate)

    def draw(self, rng, n):
        atom = rng.random(n) < self.w0
        x = rng.laplace(0.0, 1.0 / self.rate, n)
        return np.where(atom, 0.0, x)

    def cf(self):
        c = 1.0 / self.rate**2
        return Rational(ComplexRational([1.0, 0.0, self.w0 * c], [1.0, 0.0, c]))


@dataclass(frozen=True)
class TwoSidedGeometric:
    """``P(X = k*t) = (1 - r)/(1 + r) * r**|k|``: difference of two geometric counts."""

    r: float
    t: float = 1.0

    def __post_init__(self):
        if not 0 <= self.r < 1:
            raise ParameterError(f"r must lie in [0, 1), got {self.r}")
        _positive("t", self.t)

    def draw(self, rng, n):
        g1 = rng.geometric(1.0 - self.r, n) - 1
        g2 = rng.geometric(1.0 - self.r, n) - 1
        return self.t * (g1 - g2).astype(float)

    def cf(self):
        if self.r == 0:
            return compose(Kac(), 0.0, LKExponent())
        c = 2.0 * self.r / (1.0 - self.r) ** 2
        return compose(Kac(), 1.0, LKExponent(0.0, ((self.t, c),)))


@dataclass(frozen=True)
class ExpDifference:
    """``X - Y`` with ``X ~ Exp(rate1)``, ``Y ~ Exp(rate2)`` independent."""

    rate1: float = 1.0
    rate2: float = 2.0

    def __post_init__(self):
        _positive("rate1", self.rate1)
        _positive("rate2", self.rate2)

    def draw(self, rng, n):
        x = rng.exponential(1.0 / self.rate1, n)
        y = rng.exponential(1.0 / self.rate2, n)
        return x - y

    def cf(self):
        r1, r2 = self.rate1, self.rate2
        # (1 - i xi/r1)(1 + i xi/r2)
        den = [1.0, 1j / r2 - 1j / r1, 1.0 / (r1 * r2)]
        return Rational(ComplexRational([1.0], den))


@dataclass(frozen=True)
class GammaNormalDrift:
    """``X = b*G + sqrt(2*a*G)*Z`` with ``G ~ Gamma(beta, 1/beta)``, ``Z ~ N(0, 1)``."""

    beta: float
    a: float
    b: float

    def __post_init__(self):
        _positive("beta", self.beta)
        _positive("a", self.a)

    def draw(self, rng, n):
        g = rng.gamma(self.beta, 1.0 / self.beta, n)
        z = rng.standard_normal(n)
        return self.b * g + np.sqrt(2.0 * self.a * g) * z

    def cf(self):
        return Composed(GammaBeta(self.beta), 1.0, DriftedLKExponent(gamma=self.b, sigma2=2.0 * self.a))


@dataclass(frozen=True)
class SignedMixture:
    """Law with density given by a (possibly signed) :class:`DensityMixture`."""

    mixture: DensityMixture

    def certify(self):
        report = positivity_report(self.mixture)
        if not report.passed or abs(self.mixture.mass - 1.0) > 1e-9 or not 0 <= self.mixture.atom0 <= 1:
            raise SamplerRefusalError(
                f"density not certified (grid min {report.grid_min:.3e}, mass {self.mixture.mass:.12f})"
            )
        return report

    def envelope(self):
        """``(rate, M)``: Laplace envelope rate and the bound ``p_cont <= M * Laplace(rate)``."""
        pos = [(A, r) for A, r in self.mixture.terms if A > 0]
        if not pos:
            raise EnvelopeError("mixture has no positive term")
        rate = min(r for _, r in self.mixture.terms)
        height = sum(A / (2.0 * r) for A, r in pos)
        return rate, height * 2.0 / rate

    def acceptance(self):
        rate, M = self.envelope()
        return (1.0 - self.mixture.atom0) / M

    def draw(self, rng, n):
        self.certify()
        acc = self.acceptance()
        if acc < MIN_ACCEPTANCE:
            raise EnvelopeError(f"rejection acceptance {acc:.4f} below {MIN_ACCEPTANCE}")
        rate, M = self.envelope()
        atom = rng.random(n) < self.mixture.atom0
        need = int(np.count_nonzero(~atom))
        accepted = []
        got = 0
        while got < need:
            m = int((need - got) / acc * 1.1) + 64
            x = rng.laplace(0.0, 1.0 / rate, m)
            u = rng.random(m)
            env = M * 0.5 * rate * np.exp(-rate * np.abs(x))
            keep = x[u * env <= self.mixture.pdf(x)]
            accepted.append(keep)
            got += keep.size
        cont = np.concatenate(accepted)[:need]
        out = np.zeros(n)
        out[~atom] = cont
        return out

    def cf(self):
        return self.mixture.cf()


@dataclass(frozen=True)
class SubordinatedSum:
    """``Y1(T) + Y2(T)`` for independent Lévy processes run to a common time ``T ~ rho``.

    Each ``Y_j`` has Gaussian part of variance ``sigma2 * T`` and, per atom
    ``(t, c)``, a Poisson(``c*T``) number of ``+-t`` jumps with fair signs.
    """

    psi1: LKExponent
    psi2: LKExponent
    kernel: CMKernel

    def __post_init__(self):
        if self.kernel.mixing_law is None:
            raise ParameterError(f"{self.kernel.name} kernel has no shipped mixing-law sampler")

    @staticmethod
    def _levy_at(rng, psi, T):
        out = np.sqrt(psi.sigma2 * T) * rng.standard_normal(T.size) if psi.sigma2 > 0 else np.zeros(T.size)
        for t, c in psi.atoms:
            k = rng.poisson(c * T)
            up = rng.binomial(k, 0.5)
            out = out + t * (2 * up - k)
        return out

    def draw(self, rng, n):
        T = np.asarray(self.kernel.sample_time(rng, n), dtype=float)
        return self._levy_at(rng, self.psi1, T) + self._levy_at(rng, self.psi2, T)

    def cf(self):
        return compose(self.kernel, 1.0, lk_combine(self.psi1, self.psi2))


# --- sampling and validation ------------------------------------------------


@dataclass(frozen=True, eq=False)
class SampleBatch:
    law: object
    n: int
    seed: int
    stream: int
    values: np.ndarray


def sample(law, n, seed, stream=0):
    """Draw ``n`` variates; identical arguments give identical batches."""
    if int(n) != n or n < 1:
        raise ParameterError(f"n must be a positive integer, got {n}")
    values = np.asarray(law.draw(make_rng(seed, stream), int(n)), dtype=float)
    values.setflags(write=False)
    return SampleBatch(law, int(n), int(seed), int(stream), values)


@dataclass(frozen=True, eq=False)
class EmpiricalCF:
    grid: np.ndarray
    estimates: np.ndarray
    n: int


def empirical_cf(batch, grid):
    """``mean(exp(i*xi*X))`` for each ``xi`` in ``grid``."""
    x = batch.values if isinstance(batch, SampleBatch) else np.asarray(batch, dtype=float)
    if x.size == 0:
        raise ParameterError("empty batch")
    grid = np.atleast_1d(np.asarray(grid, dtype=float))
    est = np.empty(grid.shape, dtype=complex)
    for i, xi in enumerate(grid):
        if xi == 0:
            est[i] = 1.0
            continue
        arg = xi * x
        est[i] = complex(np.mean(np.cos(arg)), np.mean(np.sin(arg)))
    return EmpiricalCF(grid, est, int(x.size))


@dataclass(frozen=True, eq=False)
class McReport:
    grid: np.ndarray
    estimates: np.ndarray
    target: np.ndarray
    errors: np.ndarray
    tolerance: float
    n: int
    seed: int
    passed: bool


def mc_validate(law, target, grid, n, seed, c=5.0):
    """Compare the empirical CF of ``n`` draws to ``target`` within ``c/sqrt(n)`` per point."""
    grid = np.atleast_1d(np.asarray(grid, dtype=float))
    if grid.size > 64:
        raise ParameterError("at most 64 grid points")
    if n < 10_000:
        raise ParameterError("n must be at least 1e4")
    batch = sample(law, n, seed)
    ecf = empirical_cf(batch, grid)
    tgt = np.asarray(target(grid), dtype=complex)
    err = np.abs(ecf.estimates - tgt)
    tol = c / math.sqrt(n)
    return McReport(grid, ecf.estimates, tgt, err, tol, int(n), int(seed), bool(np.all(err <= tol)))


def kolmogorov_distance(batch, cdf):
    """Sup distance between the empirical CDF of ``batch`` and ``cdf`` (atoms allowed)."""
    x = np.sort(batch.values if isinstance(batch, SampleBatch) else np.asarray(batch, dtype=float))
    n = x.size
    uniq, last = np.unique(x, return_index=False, return_counts=True)
    right = np.cumsum(last) / n
    left = right - last / n
    F = np.asarray(cdf(uniq))
    F_left = np.asarray(cdf(np.nextafter(uniq, -np.inf)))
    return float(max(np.max(np.abs(right - F)), np.max(np.abs(left - F_left))))
