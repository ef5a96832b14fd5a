import math

import numpy as np
import pytest

from chfn.charfn import ExpDifference as EDKind
from chfn.charfn import GammaDrift, SignedMixture as SMKind, make_counterexample
from chfn.errors import EnvelopeError, ParameterError, SamplerRefusalError
from chfn.inversion import DensityMixture, density_from_even_rational
from chfn.kernels import Exp, GammaBeta, Kac
from chfn.lk import LKExponent
from chfn.montecarlo import (
    AtomLaplaceMix,
    Exponential,
    ExpDifference,
    Gamma,
    GammaNormalDrift,
    Laplace,
    Normal,
    SignedMixture,
    SubordinatedSum,
    TwoSidedGeometric,
    empirical_cf,
    kolmogorov_distance,
    mc_validate,
    sample,
)
from chfn.cf import laplace

GRID = np.linspace(-5, 5, 21)


def _mixture_law(a=0.25):
    _, f2, _ = make_counterexample(SMKind(a))
    return SignedMixture(density_from_even_rational(f2))


LAWS = [
    Exponential(1.5),
    Gamma(0.4, 2.0),
    Gamma(3.0, 0.5),
    Normal(0.3, 2.0),
    Laplace(2.0),
    AtomLaplaceMix(0.3, 1.5),
    TwoSidedGeometric(0.5, 0.7),
    ExpDifference(1.0, 2.0),
    GammaNormalDrift(3.0, 1.0, 1.0),
    _mixture_law(),
    SubordinatedSum(LKExponent(0.6), LKExponent(0.0, ((1.0, 0.5),)), Kac()),
    SubordinatedSum(LKExponent(1.0), LKExponent(0.4), GammaBeta(2.5)),
    SubordinatedSum(LKExponent(1.0), LKExponent(0.4), Exp()),
]


def test_determinism():
    a = sample(GammaNormalDrift(3, 1, 1), 1000, 42)
    b = sample(GammaNormalDrift(3, 1, 1), 1000, 42)
    c = sample(GammaNormalDrift(3, 1, 1), 1000, 42, stream=1)
    assert np.array_equal(a.values, b.values)
    assert not np.array_equal(a.values, c.values)


def test_exponential_mean():
    n = 10**6
    x = sample(Exponential(1.0), n, 1).values
    assert abs(x.mean() - 1) < 4 / math.sqrt(n)


def test_gamma_small_shape_moments():
    x = sample(Gamma(0.3, 2.0), 400_000, 3).values
    assert x.mean() == pytest.approx(0.6, abs=0.01)
    assert x.var() == pytest.approx(0.3 * 4.0, rel=0.03)


def test_two_sided_geometric_atom():
    n = 200_000
    x = sample(TwoSidedGeometric(0.5), n, 5).values
    assert abs(np.mean(x == 0) - 1 / 3) < 4 / math.sqrt(n)


def test_empirical_cf_basics():
    zeros = np.zeros(10)
    assert np.all(empirical_cf(zeros, GRID).estimates == 1)
    pm = np.array([-1.0, 1.0] * 50)
    assert np.allclose(empirical_cf(pm, GRID).estimates, np.cos(GRID))
    batch = sample(Laplace(1.0), 10**6, 9)
    est = empirical_cf(batch, [0.0, 1.0, -1.0]).estimates
    assert est[0] == 1
    assert abs(est[1] - 0.5) < 5 / 1000
    assert est[2] == pytest.approx(np.conj(est[1]))
    assert np.all(np.abs(empirical_cf(batch, GRID).estimates) <= 1 + 1e-15)
    with pytest.raises(ParameterError):
        empirical_cf(np.array([]), GRID)


@pytest.mark.parametrize("law", LAWS, ids=lambda l: type(l).__name__)
def test_every_law_matches_its_cf(law):
    assert mc_validate(law, law.cf(), GRID, 100_000, 11).passed


def test_subordinated_kac_is_laplace():
    law = SubordinatedSum(LKExponent(0.6), LKExponent(1.4), Kac())
    assert mc_validate(law, laplace(1.0), GRID, 200_000, 2).passed


def test_subordinated_zero_is_degenerate():
    law = SubordinatedSum(LKExponent(), LKExponent(), Kac())
    b = sample(law, 1000, 0)
    assert np.all(b.values == 0)
    assert np.all(empirical_cf(b, GRID).estimates == 1)


def test_counterexample_targets():
    f1 = make_counterexample(EDKind()).f1
    assert mc_validate(ExpDifference(1, 2), f1, GRID, 10**6, 7).passed
    g1 = make_counterexample(GammaDrift(3, 1, 2, 1)).f1
    assert mc_validate(GammaNormalDrift(3, 1, 1), g1, GRID, 10**6, 7).passed


def test_signed_mixture_kolmogorov():
    law = _mixture_law(0.45)
    n = 10**6
    b = sample(law, n, 17)
    assert kolmogorov_distance(b, law.mixture.cdf) < 2 / math.sqrt(n)


def test_atom_kolmogorov():
    f1 = make_counterexample(SMKind(0.25)).f1
    law = SignedMixture(density_from_even_rational(f1))
    n = 200_000
    assert kolmogorov_distance(sample(law, n, 4), law.mixture.cdf) < 2 / math.sqrt(n)


def test_refusal_and_envelope():
    neg = DensityMixture(0.0, ((3.0, 1.0), (-8.0, 2.0)))
    assert neg.mass == pytest.approx(1.0)
    with pytest.raises(SamplerRefusalError):
        sample(SignedMixture(neg), 10, 0)
    spiky = DensityMixture(0.0, ((0.01, 1.0), (0.99 * 200.0**2, 200.0)))
    assert spiky.mass == pytest.approx(1.0)
    with pytest.raises(EnvelopeError):
        sample(SignedMixture(spiky), 10, 0)


def test_validate_preconditions():
    with pytest.raises(ParameterError):
        mc_validate(Laplace(1.0), laplace(1.0), np.linspace(-1, 1, 65), 10**4, 0)
    with pytest.raises(ParameterError):
        mc_validate(Laplace(1.0), laplace(1.0), GRID, 100, 0)
    with pytest.raises(ParameterError):
        sample(Laplace(1.0), 0, 0)
    with pytest.raises(ParameterError):
        Exponential(-1.0)


def _median_error(law, n, seed, reps=200):
    nz = GRID[GRID != 0]
    target = law.cf()(nz)
    errs = [np.abs(empirical_cf(sample(law, n, seed, stream=s), nz).estimates - target) for s in range(reps)]
    return float(np.median(errs))


@pytest.mark.slow
@pytest.mark.parametrize("law", LAWS, ids=lambda l: type(l).__name__)
def test_error_shrinks_like_root_n(law):
    # 200 replications: with 20 the ratio's spread (sd ~0.2) straddles the band
    ratio = _median_error(law, 2000, 101) / _median_error(law, 4000, 202)
    assert 1.2 <= ratio <= 1.7
