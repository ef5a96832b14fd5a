import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chfn.errors import EvaluationError, ParameterError
from chfn.rational import ComplexRational, poly_gcd

coef = st.floats(-3, 3, allow_nan=False).filter(lambda v: abs(v) > 1e-3)


def test_gcd_cancels_common_factor():
    # (1 + x)(2 - x) / (1 + x)(3 + x)
    num = np.polynomial.polynomial.polymul([1, 1], [2, -1])
    den = np.polynomial.polynomial.polymul([1, 1], [3, 1])
    r = ComplexRational(num, den)
    assert r.num_degree == 1 and r.den_degree == 1
    assert np.isclose(r(0.7), (2 - 0.7) / (3 + 0.7))


def test_poly_gcd_of_coprime_is_one():
    assert np.allclose(poly_gcd([1, 1], [2, 1]), [1])


def test_normalized_denominator():
    r = ComplexRational([2.0], [4.0, 0.0, 4.0])
    assert r.den[0] == 1
    assert np.isclose(r(1.0), 0.25)


def test_pole_raises():
    with pytest.raises(EvaluationError):
        ComplexRational([1.0], [1.0, -1.0])(1.0)


def test_zero_denominator_rejected():
    with pytest.raises(ParameterError):
        ComplexRational([1.0], [0.0])


@settings(max_examples=60, deadline=None)
@given(coef, coef, coef, coef, st.floats(-2, 2))
def test_arithmetic_matches_pointwise(a, b, c, d, x):
    p = ComplexRational([1.0, a], [1.0, 0.0, b * b])
    q = ComplexRational([c, 1.0], [1.0, d * d])
    pv, qv = p(x), q(x)
    assert np.isclose((p + q)(x), pv + qv)
    assert np.isclose((p * q)(x), pv * qv)
    assert np.isclose((p - q)(x), pv - qv)
    if abs(qv) > 1e-6:
        assert np.isclose((p / q)(x), pv / qv)


def test_rescale_and_symmetry():
    r = ComplexRational([1.0], [1.0, 0.0, 2.0])
    assert r.is_even() and r.has_real_coefficients()
    assert np.isclose(r.rescale(3.0)(0.5), r(1.5))
    drift = ComplexRational([1.0], [1.0, -0.5j, 0.5])
    assert not drift.is_even() and not drift.has_real_coefficients()


def test_power_and_even_parts():
    r = ComplexRational([1.0], [1.0, 0.0, 1.0]) ** 2
    assert np.isclose(r(2.0), 1 / 25)
    num_u, den_u = r.even_parts()
    assert np.allclose(den_u, [1, 2, 1])
