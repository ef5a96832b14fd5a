import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chfn.errors import DomainError, InvalidPGFError, MultiplicityError, ParameterError, StructureError
from chfn.kernels import Exp, GammaBeta, Kac
from chfn.pgf import (
    IDENTITY,
    BernsteinFn,
    BernsteinVerdict,
    ComposedZ,
    PowerOf,
    RationalZ,
    affineness_test,
    bernstein_indecomposable,
    coefficients,
    discrete_counterexample,
    discrete_factor_recover,
    discrete_report,
    pgf_eval,
    pgf_phi,
)

Z = np.linspace(0, 1, 101)


def series_division(num, den, N):
    """Power-series coefficients of num/den by the recursion den * c = num."""
    num = np.concatenate([num, np.zeros(N + 1)])[: N + 1]
    den = np.concatenate([den, np.zeros(N + 1)])[: N + 1]
    c = np.zeros(N + 1)
    for k in range(N + 1):
        c[k] = (num[k] - np.dot(den[1 : k + 1], c[:k][::-1])) / den[0]
    return c


def test_values_at_special_points():
    d = discrete_counterexample(1.0, 0.25)
    assert pgf_eval(d.g1, 1.0) == pytest.approx(1.0)
    assert pgf_eval(d.g2, 1.0) == pytest.approx(1.0)
    assert d.g1(0.0) == pytest.approx(0.9)
    assert ComposedZ(Kac(), 2.0, IDENTITY)(0.0) == pytest.approx(1 / 3)
    with pytest.raises(DomainError):
        d.g1(1.5)


def test_base_constants():
    d = discrete_counterexample(1.0, 0.25)
    assert d.r == pytest.approx(math.sqrt(0.5))
    assert d.p == pytest.approx(0.4604957, abs=1e-7)
    assert d.q == pytest.approx(0.1277396, abs=1e-7)
    assert d.A == pytest.approx(0.5558675, abs=1e-7)
    assert d.B == pytest.approx(-0.0264557, abs=1e-7)
    assert d.A + d.B == pytest.approx(9 / 17)


def test_g2_coefficients_match_closed_form():
    d = discrete_counterexample(1.0, 0.25)
    c, rep = coefficients(d.g2, 60)
    k = np.arange(61)
    assert np.allclose(c, d.A * d.p**k + d.B * d.q**k, rtol=1e-12, atol=1e-300)
    assert c[0] == pytest.approx(0.5294118, abs=1e-7)
    assert c[1] == pytest.approx(0.2525952, abs=1e-7)
    assert rep.lower_bound_holds and rep.passed


@settings(max_examples=30, deadline=None)
@given(st.floats(0.1, 5.0), st.floats(0.01, 0.49))
def test_rational_coefficients_match_series_division(lam, theta):
    d = discrete_counterexample(lam, theta)
    for g in (d.g1, d.g2):
        c, _ = coefficients(g, 40)
        assert np.allclose(c, series_division(g.num, g.den, 40), rtol=1e-9, atol=1e-15)


def test_geometric_coefficients():
    c, rep = coefficients(RationalZ.from_coeffs([1.0], [2.0, -1.0]), 3)
    assert np.allclose(c, [1 / 2, 1 / 4, 1 / 8, 1 / 16])
    c2, _ = coefficients(ComposedZ(Kac(), 1.0, IDENTITY), 3)
    assert np.allclose(c2, c, atol=1e-13)


def test_poisson_coefficients_by_fft():
    c, _ = coefficients(ComposedZ(Exp(), 0.7, IDENTITY), 10)
    k = np.arange(11)
    expect = np.exp(-0.7) * 0.7**k / np.array([math.factorial(i) for i in k])
    assert np.allclose(c, expect, atol=1e-14)


@pytest.mark.parametrize("n", [2, 3, 5])
def test_power_coefficients_are_cauchy_products(n):
    d = discrete_counterexample(1.3, 0.2)
    base, _ = coefficients(d.g2, 50)
    c, _ = coefficients(PowerOf(d.g2, n), 50)
    oracle = np.array([1.0])
    for _ in range(n):
        oracle = np.convolve(oracle, base)
    assert np.allclose(c, oracle[:51], atol=1e-15)


def test_coefficient_errors():
    with pytest.raises(MultiplicityError):
        coefficients(RationalZ.from_coeffs([0.25], [1.0, -1.0, 0.25]), 3)
    # (1 - 2)/(1 - 2z) has G(1) = 1 but a pole at z = 1/2
    with pytest.raises(InvalidPGFError):
        coefficients(RationalZ.from_coeffs([-1.0], [1.0, -2.0]), 3)
    with pytest.raises(InvalidPGFError):
        RationalZ.from_coeffs([1.0], [3.0, -1.0])
    with pytest.raises(ParameterError):
        coefficients(RationalZ.from_coeffs([1.0], [2.0, -1.0]), 0)


def test_nonnegativity_on_random_parameters(rng):
    for _ in range(100):
        d = discrete_counterexample(rng.uniform(0.1, 5.0), rng.uniform(0.01, 0.49))
        for g in (d.g1, d.g2):
            c, rep = coefficients(g, 2000)
            assert np.min(c[:201]) >= -1e-14
            # mass within rounding of 1: the sum of 2000 terms carries ~1e-15 error
            assert 1 - 1e-6 <= rep.partial_mass <= 1 + 1e-12
        if d.B < 0:
            assert rep.lower_bound_holds


@pytest.mark.parametrize("lam,theta", [(1.0, 0.25), (0.3, 0.05), (4.0, 0.45)])
def test_identity(lam, theta):
    d = discrete_counterexample(lam, theta)
    lhs = pgf_phi("kac", d.g1, d.g2, Z)
    assert np.max(np.abs(lhs - 1 / (1 + lam * (1 - Z)))) < 1e-12
    assert pgf_phi("kac", d.g1, d.g2, 0.0) == pytest.approx(1 / (1 + lam))


@pytest.mark.parametrize("n", [2, 10])
def test_power_identity(n):
    d = discrete_counterexample(1.0, 0.25, n)
    lhs = pgf_phi(n, d.g1, d.g2, Z)
    assert np.max(np.abs(lhs - (1 + (1 - Z) / n) ** (-n))) < 1e-12
    assert lhs[0] == pytest.approx((1 + 1 / n) ** (-n))


def test_phi_neutral_and_domain():
    d = discrete_counterexample(1.0, 0.25)
    one = RationalZ.from_coeffs([1.0], [1.0])
    assert np.allclose(pgf_phi("kac", d.g1, one, Z), d.g1(Z))
    with pytest.raises(ParameterError):
        pgf_phi("bogus", d.g1, d.g2, 0.5)


def test_affineness_excludes_factors():
    for n in (1, 2, 10):
        d = discrete_counterexample(1.0, 0.25, n)
        assert not affineness_test(d.g1, n).in_family
        assert not affineness_test(d.g2, n).in_family
    geo = ComposedZ(Kac(), 0.4, IDENTITY)
    assert affineness_test(geo).in_family
    negbin = ComposedZ(GammaBeta(3), 0.4, IDENTITY)
    assert affineness_test(negbin, 3).in_family


def test_report_passes():
    rep = discrete_report(1.0, 0.25)
    assert rep.passed and rep.identity_residual < 1e-12


def test_parameter_errors():
    for theta in (0.0, 0.5, 0.7):
        with pytest.raises(ParameterError):
            discrete_counterexample(1.0, theta)
    with pytest.raises(ParameterError):
        discrete_counterexample(-1.0, 0.2)


def brute_force_bernstein_decomposable(b, atoms):
    u = np.linspace(0.05, 6.0, 91)
    comps = ([u * b] if b > 0 else []) + [c * (1 - np.exp(-s * u)) for s, c in atoms]
    total = sum(comps)
    for r in range(1, len(comps)):
        for idx in itertools.combinations(range(len(comps)), r):
            if np.ptp(sum(comps[i] for i in idx) / total) > 1e-9:
                return True
    return False


def test_bernstein_classifier_agrees_with_brute_force(rng):
    for _ in range(1000):
        b = float(rng.choice([0.0, 0.0, rng.uniform(0.1, 2.0)]))
        atoms = tuple((float(rng.choice([0.5, 1.0, 3.0])), float(rng.uniform(0.1, 2))) for _ in range(rng.integers(0, 4)))
        verdict = bernstein_indecomposable(BernsteinFn(b, atoms)).verdict
        if b == 0 and not atoms:
            assert verdict is BernsteinVerdict.ZERO
        else:
            assert (verdict is BernsteinVerdict.DECOMPOSABLE) == brute_force_bernstein_decomposable(b, atoms)


def test_bernstein_examples():
    assert bernstein_indecomposable(BernsteinFn(2.0)).verdict is BernsteinVerdict.LINEAR
    rep = bernstein_indecomposable(BernsteinFn(0.0, ((3.0, 1.0),)))
    assert rep.verdict is BernsteinVerdict.EXP_ATOM and rep.s == 3.0
    assert bernstein_indecomposable(BernsteinFn(1.0, ((1.0, 1.0),))).verdict is BernsteinVerdict.DECOMPOSABLE
    eta = BernsteinFn(0.5, ((2.0, 1.0),))
    assert eta(0.0) == 0 and np.all(np.diff(eta(np.linspace(0, 5, 50))) > 0)


def test_discrete_factor_recovery():
    assert discrete_factor_recover(Exp(), IDENTITY, ComposedZ(Exp(), 0.7, IDENTITY)) == pytest.approx(0.7, abs=1e-12)
    geo = RationalZ.from_coeffs([1.0], [1.4, -0.4])
    assert discrete_factor_recover(Kac(), IDENTITY, geo) == pytest.approx(0.4, abs=1e-12)
    atom = BernsteinFn(0.0, ((2.0, 1.0),))
    assert discrete_factor_recover(Kac(), atom, ComposedZ(Kac(), 0.3, atom)) == pytest.approx(0.3)
    with pytest.raises(StructureError):
        discrete_factor_recover(Kac(), IDENTITY, discrete_counterexample(1.0, 0.25).g1)
    with pytest.raises(StructureError):
        discrete_factor_recover(GammaBeta(4), IDENTITY, discrete_counterexample(1.0, 0.25, 4).g2)
    with pytest.raises(ParameterError):
        discrete_factor_recover(Kac(), BernsteinFn(1.0, ((1.0, 1.0),)), geo)
