"""Hermite functions, Laguerre polynomials, the antiderivative of exp(u^2)
and closed-form complex Gaussian integrals.

Hermite functions use the pi-scaled convention

    phi_0(t) = 2^{1/4} exp(-pi t^2),

which is the one under which the Gaussian-window STFT is an isometry and the
Bargmann transform sends phi_n to sqrt(pi^n / n!) z^n.
"""
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from ._kernels import laguerre_array
from .errors import DivergentIntegralError, OrderOutOfRangeError, RangeError

MAX_ORDER = 16
A_SERIES_RADIUS = 3.0
A_MAX_RADIUS = 10.0


class HermiteOrder(int):
    """Hermite order 0 <= n <= 16; larger orders are rejected, not extrapolated."""

    def __new__(cls, n):
        if isinstance(n, bool) or int(n) != n:
            raise OrderOutOfRangeError(f"Hermite order must be an integer, got {n!r}")
        n = int(n)
        if not 0 <= n <= MAX_ORDER:
            raise OrderOutOfRangeError(f"Hermite order {n} outside [0, {MAX_ORDER}]")
        return super().__new__(cls, n)


def _check_order(k, name="order"):
    if isinstance(k, bool) or int(k) != k or not 0 <= int(k) <= MAX_ORDER:
        raise OrderOutOfRangeError(f"{name} {k!r} outside [0, {MAX_ORDER}]")
    return int(k)


def hermite_all(nmax, t):
    """Rows phi_0..phi_nmax evaluated at ``t``; shape (nmax + 1,) + t.shape."""
    nmax = int(HermiteOrder(nmax))
    t = np.asarray(t, dtype=np.float64)
    out = np.empty((nmax + 1,) + t.shape)
    out[0] = 2.0 ** 0.25 * np.exp(-np.pi * t * t)
    if nmax >= 1:
        out[1] = 2.0 * math.sqrt(math.pi) * t * out[0]
    for n in range(1, nmax):
        out[n + 1] = (2.0 * math.sqrt(math.pi) * t / math.sqrt(n + 1)) * out[n] \
            - math.sqrt(n / (n + 1)) * out[n - 1]
    return out


def hermite_eval(n, t):
    """L2-normalised Hermite function phi_n(t) (scalar or array ``t``)."""
    n = HermiteOrder(n)
    t_arr = np.asarray(t, dtype=np.float64)
    if not np.all(np.isfinite(t_arr)):
        raise RangeError("Hermite evaluation needs finite t")
    val = hermite_all(n, t_arr)[n]
    return float(val) if val.ndim == 0 else val


def laguerre_eval(k, x):
    """Laguerre polynomial L_k(x), via (j+1)L_{j+1} = (2j+1-x)L_j - j L_{j-1}."""
    k = _check_order(k, "Laguerre order")
    x_arr = np.asarray(x, dtype=np.float64)
    if not np.all(np.isfinite(x_arr)):
        raise RangeError("Laguerre evaluation needs finite x")
    val = laguerre_array(k, x_arr)
    return float(val) if val.ndim == 0 else val


def laguerre_coefficients(k):
    """Monomial coefficients c_m of L_k(x) = sum_m c_m x^m."""
    k = _check_order(k, "Laguerre order")
    return np.array([(-1) ** m * math.comb(k, m) / math.factorial(m)
                     for m in range(k + 1)])


def _a_series(z):
    z2 = z * z
    term = z  # z^{2n+1} / n!
    total = 0j
    n = 0
    while True:
        contrib = term / (2 * n + 1)
        total += contrib
        if abs(contrib) <= 1e-17 * max(abs(total), 1e-300) and n > 2:
            break
        n += 1
        term = term * z2 / n
        if n > 200:
            break
    return total


def _a_quad(z):
    # A(z) = z * int_0^1 exp(z^2 s^2) ds along the straight segment
    z2 = z * z

    def re(s):
        return (z * np.exp(z2 * s * s)).real

    def im(s):
        return (z * np.exp(z2 * s * s)).imag

    scale = abs(z) * max(1.0, math.exp(z2.real))
    opts = dict(epsabs=1e-15 * scale, epsrel=1e-13, limit=400)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        return complex(integrate.quad(re, 0.0, 1.0, **opts)[0],
                       integrate.quad(im, 0.0, 1.0, **opts)[0])


def antideriv_A(z):
    """A(z) = int_0^z exp(u^2) du, A(0) = 0, for |z| <= 10."""
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise RangeError("A(z) needs finite z")
    if abs(z) > A_MAX_RADIUS:
        raise RangeError(f"|z| = {abs(z):.3g} exceeds the A(z) range limit {A_MAX_RADIUS}")
    if z == 0:
        return 0j
    if abs(z) <= A_SERIES_RADIUS:
        return _a_series(z)
    return _a_quad(z)


@dataclass(frozen=True)
class GaussianIntegralParams:
    """Coefficients of int_R exp(-a y^2 + b y) dy; requires Re a > 0."""

    a: complex
    b: complex = 0j

    def __post_init__(self):
        a = complex(self.a)
        if not a.real > 0:
            raise DivergentIntegralError(f"Re(a) = {a.real} <= 0: integral diverges")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", complex(self.b))


def gaussian_integral(p, b=None):
    """sqrt(pi/a) * exp(b^2 / (4a)) with the principal square root.

    Accepts a :class:`GaussianIntegralParams` or the pair ``(a, b)``.
    """
    if not isinstance(p, GaussianIntegralParams):
        p = GaussianIntegralParams(p, 0j if b is None else b)
    a, bb = p.a, p.b
    return complex(np.sqrt(np.pi / a) * np.exp(bb * bb / (4.0 * a)))


def gaussian_log_integral(a, b):
    """Vectorised log of the Gaussian integral; ``a`` scalar, ``b`` array."""
    a = complex(a)
    if not a.real > 0:
        raise DivergentIntegralError(f"Re(a) = {a.real} <= 0: integral diverges")
    b = np.asarray(b, dtype=np.complex128)
    return 0.5 * np.log(np.pi / a) + b * b / (4.0 * a)
