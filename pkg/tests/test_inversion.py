import numpy as np
import pytest
from scipy import integrate

from chfn.cf import Rational, laplace
from chfn.charfn import ExpDifference, SignedMixture, make_counterexample
from chfn.errors import ConjugatePairError, MultiplicityError, ParameterError
from chfn.inversion import (
    DensityMixture,
    bochner_min_eig,
    density_from_even_rational,
    numeric_inversion,
    partial_fractions_even,
    positivity_report,
)

QUARTIC = Rational.from_coeffs([1.0], [1.0, 0.0, 0.0, 0.0, 1.0])


def test_laplace_density():
    m = density_from_even_rational(laplace(1.0))
    assert m.atom0 == 0 and m.terms == ((1.0, 1.0),)
    assert m.pdf(0.0) == pytest.approx(0.5)


def test_signed_mixture_partial_fractions():
    _, f2, _ = make_counterexample(SignedMixture(0.25))
    terms = partial_fractions_even(f2)
    s = np.sqrt(2)
    # roots of 1 + 4u + u^2/... in closed form: lam = 4 -+ 2*sqrt(2)
    assert [lam for _, lam in terms] == pytest.approx([4 - 2 * s, 4 + 2 * s])
    assert [A for A, _ in terms] == pytest.approx([(1 + s) / 2, (1 - s) / 2])


@pytest.mark.parametrize("a", [0.05, 0.25, 0.45])
def test_mixture_densities_match_quadrature(a):
    f1, f2, _ = make_counterexample(SignedMixture(a))
    x = np.linspace(-8, 8, 41)
    for f in (f1, f2):
        m = density_from_even_rational(f)
        nd = numeric_inversion(f, x[x != 0] if m.atom0 else x)
        xs = nd.x
        assert np.max(np.abs(nd.p - m.pdf(xs))) < 1e-6


@pytest.mark.parametrize("a", [0.05, 0.25, 0.45])
def test_mixture_mass_and_positivity(a):
    _, f2, _ = make_counterexample(SignedMixture(a))
    m = density_from_even_rational(f2)
    assert abs(m.mass - 1) < 1e-9
    total, _ = integrate.quad(m.pdf, -np.inf, np.inf)
    assert total == pytest.approx(1.0, abs=1e-9)
    rep = positivity_report(m)
    assert rep.passed and rep.certified
    assert rep.lower_bound_constant > 0
    # the bound is an actual lower bound on the grid
    slow = min(m.rates)
    assert np.all(m.pdf(rep.grid) >= rep.lower_bound_constant * np.exp(-slow * rep.grid) - 1e-15)


def test_atom_extracted():
    f1, _, _ = make_counterexample(SignedMixture(0.25))
    m = density_from_even_rational(f1)
    assert m.atom0 == pytest.approx(0.5)
    assert m.cf().rational.allclose(f1.rational)


def test_cdf_consistency():
    _, f2, _ = make_counterexample(SignedMixture(0.45))
    m = density_from_even_rational(f2)
    val, _ = integrate.quad(m.pdf, -np.inf, 0.7)
    assert m.cdf(0.7) == pytest.approx(val, abs=1e-10)
    assert m.cdf(50.0) == pytest.approx(1.0)


def test_quartic_negative_control():
    with pytest.raises(ConjugatePairError):
        partial_fractions_even(QUARTIC)
    x = np.linspace(0, 8, 161)
    nd = numeric_inversion(QUARTIC, x)
    rep = positivity_report(nd)
    assert not rep.passed and rep.grid_min < -1e-3
    # first sign change at |x| = 3*pi/(4*(1/sqrt 2)) ~ 3.33
    first_neg = x[np.argmax(nd.p < 0)]
    assert first_neg == pytest.approx(3.33, abs=0.06)


def test_repeated_root():
    with pytest.raises(MultiplicityError):
        partial_fractions_even(laplace(1.0).rational * laplace(1.0).rational)


def test_non_even_numeric_inversion():
    f1, _, _ = make_counterexample(ExpDifference())
    x = np.array([-3.0, -0.5, 0.0, 0.5, 3.0])
    nd = numeric_inversion(f1, x)
    exact = np.where(x >= 0, 2 / 3 * np.exp(-x), 2 / 3 * np.exp(2 * x))
    assert np.allclose(nd.p, exact, atol=1e-6)


def test_bochner():
    pts = np.linspace(-10, 10, 41)
    assert bochner_min_eig(laplace(1.0), pts) > 0
    assert bochner_min_eig(QUARTIC, pts) < -0.1
    with pytest.raises(ParameterError):
        bochner_min_eig(laplace(1.0), [1.0])


def test_density_mixture_validation():
    with pytest.raises(ParameterError):
        DensityMixture(0.0, ((1.0, -1.0),))
