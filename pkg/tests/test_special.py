import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from numpy.polynomial import hermite as H
from scipy.special import eval_laguerre

from focklab.errors import DivergentIntegralError, OrderOutOfRangeError, RangeError
from focklab.special import (GaussianIntegralParams, HermiteOrder, antideriv_A, gaussian_integral,
                             hermite_all, hermite_eval, laguerre_coefficients, laguerre_eval)


def hermite_oracle(n, t):
    # physicists' polynomials at sqrt(2 pi) t
    c = np.zeros(n + 1)
    c[n] = 1
    norm = 2 ** 0.25 / math.sqrt(2 ** n * math.factorial(n))
    return norm * H.hermval(math.sqrt(2 * math.pi) * t, c) * np.exp(-math.pi * t * t)


def test_hermite_values_at_zero():
    assert hermite_eval(0, 0.0) == pytest.approx(2 ** 0.25, abs=1e-15)
    assert hermite_eval(1, 0.0) == 0.0


@pytest.mark.parametrize("n", range(17))
def test_hermite_matches_polynomial_form(n):
    t = np.linspace(-3, 3, 121)
    assert np.max(np.abs(hermite_eval(n, t) - hermite_oracle(n, t))) < 1e-11


def test_hermite_orthonormal(sgrid):
    rows = hermite_all(8, sgrid.points)
    gram = rows @ rows.T * sgrid.step
    assert np.max(np.abs(gram - np.eye(9))) < 1e-8


def test_hermite_order_bounds():
    assert HermiteOrder(16) == 16
    with pytest.raises(OrderOutOfRangeError):
        HermiteOrder(17)
    with pytest.raises(OrderOutOfRangeError):
        hermite_eval(-1, 0.0)


def test_laguerre_examples():
    assert laguerre_eval(0, 7.3) == 1.0
    assert all(laguerre_eval(k, 0.0) == pytest.approx(1.0) for k in range(17))
    assert laguerre_eval(1, 2.0) == pytest.approx(-1.0)
    with pytest.raises(OrderOutOfRangeError):
        laguerre_eval(17, 1.0)


@given(st.integers(0, 16), st.floats(0, 20))
def test_laguerre_against_scipy(k, x):
    ref = eval_laguerre(k, x)
    assert laguerre_eval(k, x) == pytest.approx(ref, rel=1e-9, abs=1e-9)


@pytest.mark.parametrize("k", range(7))
def test_laguerre_coefficients_expand(k):
    x = np.linspace(0, 20, 50)
    c = laguerre_coefficients(k)
    direct = sum(c[m] * x ** m for m in range(k + 1))
    assert np.allclose(laguerre_eval(k, x), direct, rtol=1e-9, atol=1e-9)


def test_antideriv_examples():
    assert antideriv_A(0) == 0
    assert antideriv_A(1.0) == pytest.approx(1.4626517459071816, rel=1e-14)
    assert antideriv_A(1.5 - 0.8j) == pytest.approx(-0.25188663451074017 - 2.383586745236283j, rel=1e-12)


@settings(max_examples=60)
@given(st.floats(-9.5, 9.5), st.floats(-9.5, 9.5))
def test_antideriv_against_erfi(x, y):
    z = complex(x, y)
    if abs(z) > 9.9:
        return
    ref = complex(mp.sqrt(mp.pi) / 2 * mp.erfi(z))
    assert abs(antideriv_A(z) - ref) <= 1e-11 * max(1.0, abs(ref))


@given(st.floats(-2, 2), st.floats(-2, 2))
def test_antideriv_odd(x, y):
    z = complex(x, y)
    a = antideriv_A(z)
    assert abs(a + antideriv_A(-z)) < 1e-10 * (1 + abs(a))


def test_antideriv_range():
    with pytest.raises(RangeError):
        antideriv_A(10.5)


def test_gaussian_integral_examples():
    assert gaussian_integral(math.pi, 0) == pytest.approx(1.0, rel=1e-15)
    assert gaussian_integral(math.pi / 2, 0) == pytest.approx(math.sqrt(2), rel=1e-15)
    z = 1 + 0.5j
    val = gaussian_integral(GaussianIntegralParams(math.pi * (0.5 + 1j), -math.pi * z))
    assert val == pytest.approx(1.7006235826279634 - 1.4636696763814403j, rel=1e-12)


@settings(max_examples=12, deadline=None)
@given(st.floats(0.3, 5), st.floats(-2, 2), st.floats(-3.5, 3.5), st.floats(-3.5, 3.5))
def test_gaussian_integral_against_mpmath(ar, ai, br, bi):
    a, b = complex(ar, ai), complex(br, bi)
    # finite window split into short panels; the integrand oscillates
    c = br / (2 * ar)
    half = 12 / math.sqrt(ar)
    nodes = [c - half + 2 * half * j / 240 for j in range(241)]
    with mp.workdps(20):
        ref = complex(mp.quad(lambda y: mp.exp(-a * y * y + b * y), nodes))
    assert abs(gaussian_integral(a, b) - ref) <= 1e-8 * abs(ref)


def test_gaussian_integral_diverges():
    with pytest.raises(DivergentIntegralError):
        gaussian_integral(-1.0, 0)
    with pytest.raises(DivergentIntegralError):
        GaussianIntegralParams(1j, 0)
