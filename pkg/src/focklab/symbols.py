"""Convolution symbols u and their Fock-side kernels phi and psi.

    phi(z)    = int u(y) exp(-pi y^2/2 - pi y z) dy
    psi(z, w) = int L_n(pi |z - y|^2) u(y) exp(-pi y^2/2 - pi y w) dy

``phi`` grows like exp(pi (Re z)^2 / 2) in the worst case, so every symbol
also offers a *damped* evaluation ``phi(z) * exp(-pi (Re z)^2 / 2)``; with
that factor the integrand becomes exp(-pi (y + Re z)^2 / 2) times a phase and
is well conditioned for any z.  Operator kernels only ever need the damped
values.
"""
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.special import wofz

from .errors import ConditioningError, RangeError, UnsupportedPathError
from .grids import RealGrid, SampledSignal
from .special import _check_order, laguerre_coefficients

TAGS = ("dirac", "gaussian", "chirp", "hilbert", "sampled")
PHI_RE_LIMIT = 4.0
# y-grid for real-line quadrature of closed-form symbols
QUAD_HALF_WIDTH = 16.0
QUAD_STEP = 1.0 / 64
MULTIPLIER_CUTOFF = 12.0


@dataclass(frozen=True)
class Symbol:
    """Convolution kernel u.

    dirac(a): u = delta_a.  gaussian(alpha): u(y) = exp(-alpha pi y^2).
    chirp(t): u(y) = exp(-i t pi y^2).  hilbert: Fourier multiplier
    -i sgn(xi), no real-line samples.  sampled: explicit samples.
    """

    tag: str
    param: float = 0.0
    samples: Optional[SampledSignal] = field(default=None, repr=False)
    description: str = ""

    def __post_init__(self):
        if self.tag not in TAGS:
            raise ValueError(f"unknown symbol tag {self.tag!r}")
        if (self.tag == "sampled") != (self.samples is not None):
            raise ValueError("samples are required exactly for tag 'sampled'")
        if self.tag == "gaussian" and not self.param > 0:
            raise ValueError("gaussian symbol needs alpha > 0")
        if not self.description:
            object.__setattr__(self, "description", self.label)

    @classmethod
    def dirac(cls, a=0.0):
        return cls("dirac", float(a))

    @classmethod
    def gaussian(cls, alpha):
        return cls("gaussian", float(alpha))

    @classmethod
    def chirp(cls, t=1.0):
        return cls("chirp", float(t))

    @classmethod
    def hilbert(cls):
        return cls("hilbert")

    @classmethod
    def sampled(cls, signal, description="sampled"):
        return cls("sampled", 0.0, signal, description)

    @property
    def label(self):
        if self.tag in ("hilbert", "sampled"):
            return self.tag
        return f"{self.tag}:{self.param:g}"

    @property
    def quadratic_coefficient(self):
        """c with u(y) = exp(-c y^2) for the Gaussian family, else None."""
        if self.tag == "gaussian":
            return complex(self.param * math.pi)
        if self.tag == "chirp":
            return complex(0.0, self.param * math.pi)
        return None

    def has_real_line_path(self):
        return self.tag != "hilbert"

    def u(self, y):
        """Pointwise values of u (Gaussian family only)."""
        c = self.quadratic_coefficient
        if c is None:
            raise UnsupportedPathError(f"u({self.tag}) has no pointwise values")
        y = np.asarray(y, dtype=np.float64)
        return np.exp(-c * y * y)

    def real_line_samples(self, grid=None):
        """(y, u(y)) on a quadrature grid; dirac and hilbert have none."""
        if self.tag == "sampled":
            return self.samples.grid.points, self.samples.values
        if self.quadratic_coefficient is not None:
            grid = grid or RealGrid(QUAD_HALF_WIDTH, QUAD_STEP)
            y = grid.points
            return y, self.u(y)
        raise UnsupportedPathError(f"{self.tag} symbol has no real-line samples")


def parse_symbol(text):
    """``dirac:a | gaussian:alpha | chirp:t | hilbert | file:PATH``."""
    from .grids import read_signal_csv

    name, _, arg = text.partition(":")
    name = name.strip().lower()
    if name == "hilbert":
        return Symbol.hilbert()
    if name == "file":
        return Symbol.sampled(read_signal_csv(arg), description=f"file:{arg}")
    if name in ("dirac", "gaussian", "chirp"):
        default = {"dirac": 0.0, "gaussian": 0.5, "chirp": 1.0}[name]
        return Symbol(name, float(arg) if arg else default)
    raise ValueError(f"cannot parse symbol {text!r}")


# -------------------------------------------------------------------- phi

def _damped_quadrature(y, weights, uvals, z, chunk=4096):
    """int u(y) exp(-pi (y + p)^2/2 - i pi y q) dy for z = p + i q."""
    z = np.asarray(z, dtype=np.complex128)
    flat = z.ravel()
    out = np.empty(flat.shape, dtype=np.complex128)
    wu = weights * uvals
    for s in range(0, flat.size, chunk):
        zz = flat[s:s + chunk]
        p = zz.real[:, None]
        q = zz.imag[:, None]
        kern = np.exp(-np.pi * (y[None, :] + p) ** 2 / 2 - 1j * np.pi * y[None, :] * q)
        out[s:s + chunk] = kern @ wu
    return out.reshape(z.shape)


@dataclass(frozen=True)
class PhiSymbol:
    """phi as an evaluator over C.

    ``closed_form`` is ``(c, gamma, delta)`` for phi = c exp(gamma z^2 + delta z).
    ``damped_exact`` is an exact damped evaluator outside that family
    (used for the Hilbert multiplier).  ``damped_quad`` is the quadrature
    route, present whenever the symbol has one.
    """

    label: str
    closed_form: Optional[tuple] = None
    damped_exact: Optional[Callable] = field(default=None, repr=False)
    damped_quad: Optional[Callable] = field(default=None, repr=False)
    log_sup: Optional[Callable] = field(default=None, repr=False)

    def damped(self, z):
        """phi(z) exp(-pi (Re z)^2 / 2)."""
        z = np.asarray(z, dtype=np.complex128)
        if self.closed_form is not None:
            c, g, d = self.closed_form
            return c * np.exp(g * z * z + d * z - np.pi * z.real ** 2 / 2)
        if self.damped_exact is not None:
            return self.damped_exact(z)
        return self.damped_quad(z)

    def __call__(self, z):
        z = np.asarray(z, dtype=np.complex128)
        if self.closed_form is not None:
            c, g, d = self.closed_form
            return c * np.exp(g * z * z + d * z)
        if self.damped_exact is None and np.any(np.abs(z.real) > PHI_RE_LIMIT):
            raise ConditioningError(
                f"direct phi evaluation needs |Re z| <= {PHI_RE_LIMIT}; use damped()")
        return self.damped(z) * np.exp(np.pi * z.real ** 2 / 2)

    def quadrature(self, z):
        """Undamped quadrature value (|Re z| <= 4)."""
        if self.damped_quad is None:
            raise UnsupportedPathError(f"{self.label}: no quadrature route")
        z = np.asarray(z, dtype=np.complex128)
        if np.any(np.abs(z.real) > PHI_RE_LIMIT):
            raise ConditioningError(f"quadrature phi needs |Re z| <= {PHI_RE_LIMIT}")
        return self.damped_quad(z) * np.exp(np.pi * z.real ** 2 / 2)


def _gaussian_family_constants(c):
    a = c + math.pi / 2
    return a, complex(np.sqrt(math.pi / a)), complex(math.pi ** 2 / (4 * a))


def _check_sampled_decay(y, uvals):
    env = np.abs(uvals) * np.exp(-np.pi * y * y / 2)
    edge = max(env[0], env[-1])
    if edge > 1e-12 * max(env.max(), 1e-300):
        raise RangeError("sampled u does not decay below 1e-12 at the grid edge")


def symbol_phi(u):
    """phi(z) = int u(y) exp(-pi y^2/2 - pi y z) dy."""
    if u.tag == "hilbert":
        raise UnsupportedPathError("hilbert symbol: use symbol_phi_from_multiplier")
    if u.tag == "dirac":
        a = u.param
        c = math.exp(-math.pi * a * a / 2)
        return PhiSymbol(u.label, closed_form=(complex(c), 0j, complex(-math.pi * a)),
                         log_sup=lambda r: math.log(c) + math.pi * abs(a) * r)
    y, uvals = u.real_line_samples()
    step = y[1] - y[0]
    if u.tag == "sampled":
        _check_sampled_decay(y, uvals)
    weights = np.full(y.shape, step)

    def quad(z):
        return _damped_quadrature(y, weights, uvals, z)

    def log_sup_quad(r):
        return float(np.log(np.sum(np.abs(uvals) * np.exp(-np.pi * y * y / 2 + np.pi * np.abs(y) * r)) * step))

    if u.tag == "sampled":
        return PhiSymbol(u.label, damped_quad=quad, log_sup=log_sup_quad)
    a, cst, gam = _gaussian_family_constants(u.quadratic_coefficient)
    return PhiSymbol(u.label, closed_form=(cst, gam, 0j), damped_quad=quad,
                     log_sup=lambda r: math.log(abs(cst)) + abs(gam) * r * r)


def _legendre_panels(lo, hi, width=0.5, nodes=20):
    x, w = leggauss(nodes)
    edges = np.arange(lo, hi + 1e-12, width)
    ys, ws = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        ys.append((b - a) / 2 * x + (a + b) / 2)
        ws.append((b - a) / 2 * w)
    return np.concatenate(ys), np.concatenate(ws)


class MultiplierPhi:
    """phi from a Fourier multiplier m: 2^{1/2} int m(y) exp(-2 pi (y + i z/2)^2) dy.

    Composite Gauss-Legendre on [-12, 0] and [0, 12] so that a jump of m at
    the origin sits on a panel boundary.
    """

    def __init__(self, m, cutoff=MULTIPLIER_CUTOFF):
        self.m = m
        self.cutoff = cutoff
        yl, wl = _legendre_panels(-cutoff, 0.0)
        yr, wr = _legendre_panels(0.0, cutoff)
        self.y = np.concatenate([yl, yr])
        self.w = np.concatenate([wl, wr])
        self.mvals = np.asarray(m(self.y), dtype=np.complex128)

    def damped(self, z, chunk=2048):
        # -2 pi (y + i z/2)^2 - pi p^2/2 = -2 pi (y - q/2)^2 - 2 pi i y p + i pi p q
        z = np.asarray(z, dtype=np.complex128)
        flat = z.ravel()
        out = np.empty(flat.shape, dtype=np.complex128)
        wm = self.w * self.mvals
        for s in range(0, flat.size, chunk):
            zz = flat[s:s + chunk]
            p = zz.real[:, None]
            q = zz.imag[:, None]
            y = self.y[None, :]
            kern = np.exp(-2 * np.pi * (y - q / 2) ** 2 - 2j * np.pi * y * p + 1j * np.pi * p * q)
            out[s:s + chunk] = math.sqrt(2) * (kern @ wm)
        return out.reshape(z.shape)

    def truncation_flag(self, z, tol=1e-12):
        """True where the integrand has not decayed below ``tol`` at +-cutoff."""
        z = np.asarray(z, dtype=np.complex128)
        q = z.imag
        m_edge = np.abs(np.asarray(self.m(np.array([-self.cutoff, self.cutoff])), dtype=np.complex128))
        edge = np.maximum(m_edge[0] * np.exp(-2 * np.pi * (-self.cutoff - q / 2) ** 2),
                          m_edge[1] * np.exp(-2 * np.pi * (self.cutoff - q / 2) ** 2))
        peak = np.max(np.abs(self.mvals)) + 1e-300
        return edge > tol * peak


def symbol_phi_from_multiplier(m, label="multiplier"):
    """PhiSymbol for the operator with Fourier multiplier ``m``.

    The returned symbol evaluates by quadrature; use
    ``MultiplierPhi(m).truncation_flag(z)`` to check the cutoff.
    """
    mp = MultiplierPhi(m)
    return PhiSymbol(label, damped_quad=mp.damped)


def hilbert_multiplier(xi):
    return -1j * np.sign(xi)


def _damped_hilbert_exact(z):
    """-erfi(sqrt(pi/2) z) exp(-pi (Re z)^2/2) via the Faddeeva function.

    erfi(v) = -i (1 - exp(v^2) w(-v))  (Im v <= 0)
            = -i (exp(v^2) w(v) - 1)   (Im v > 0)
    so the large factor exp(v^2) is merged with the damping exponent.
    """
    z = np.asarray(z, dtype=np.complex128)
    v = math.sqrt(math.pi / 2) * z
    damp = -np.pi * z.real ** 2 / 2
    upper = v.imag > 0
    wv = np.where(upper, wofz(np.where(upper, v, 0)), wofz(np.where(upper, 0, -v)))
    sign = np.where(upper, -1.0, 1.0)
    erfi_damped = -1j * sign * (np.exp(damp) - np.exp(v * v + damp) * wv)
    return -erfi_damped


def hilbert_phi():
    """phi for the Hilbert transform: quadrature route plus an exact damped
    evaluator, cross-checked against each other in the test suite."""
    mp = MultiplierPhi(hilbert_multiplier)
    return PhiSymbol("hilbert", damped_exact=_damped_hilbert_exact, damped_quad=mp.damped)


def phi_for(u):
    """PhiSymbol for any symbol tag (hilbert through its multiplier)."""
    return hilbert_phi() if u.tag == "hilbert" else symbol_phi(u)


# -------------------------------------------------------------------- psi

def _gaussian_moments(a, beta, nmax):
    """mu_j = int s^j exp(-a s^2 + beta s) ds / int exp(-a s^2 + beta s) ds."""
    mu = np.empty((nmax + 1,) + np.shape(beta), dtype=np.complex128)
    mu[0] = 1.0
    if nmax >= 1:
        mu[1] = beta / (2 * a)
    for j in range(1, nmax):
        mu[j + 1] = (beta / (2 * a)) * mu[j] + (j / (2 * a)) * mu[j - 1]
    return mu


@dataclass(frozen=True)
class PsiSymbol:
    """psi(z, w) for Laguerre index n, tagged with the operator order."""

    symbol: Symbol
    order: int
    laguerre_index: int
    phi: PhiSymbol = field(repr=False)

    def damped(self, z, w):
        """psi(z, w) exp(-pi (Re w)^2 / 2)."""
        z = np.asarray(z, dtype=np.complex128)
        w = np.asarray(w, dtype=np.complex128)
        n = self.laguerre_index
        u = self.symbol
        if n == 0:
            return np.broadcast_to(self.phi.damped(w), np.broadcast_shapes(z.shape, w.shape)).copy()
        if u.tag == "dirac":
            a = u.param
            lag = _laguerre_poly(n, np.pi * np.abs(z - a) ** 2)
            return lag * np.exp(-np.pi * (a + w.real) ** 2 / 2 - 1j * np.pi * a * w.imag)
        if u.quadratic_coefficient is not None:
            return self._damped_closed(z, w)
        if u.tag == "hilbert":
            raise UnsupportedPathError("psi for the Hilbert symbol is not available")
        return self.damped_quadrature(z, w)

    def __call__(self, z, w):
        w = np.asarray(w, dtype=np.complex128)
        return self.damped(z, w) * np.exp(np.pi * w.real ** 2 / 2)

    def _damped_closed(self, z, w):
        # y = s + p1 turns |z - y|^2 into s^2 + q1^2; the exponent then
        # collapses to the phi exponent at w, times polynomial moments.
        n = self.laguerre_index
        a = self.symbol.quadratic_coefficient + math.pi / 2
        z, w = np.broadcast_arrays(z, w)
        p1, q1 = z.real, z.imag
        beta = -(2 * a * p1 + math.pi * w)
        mu = _gaussian_moments(a, beta, 2 * n)
        coeffs = laguerre_coefficients(n)
        poly = np.zeros(z.shape, dtype=np.complex128)
        for m in range(n + 1):
            inner = np.zeros(z.shape, dtype=np.complex128)
            for r in range(m + 1):
                inner += math.comb(m, r) * q1 ** (2 * (m - r)) * mu[2 * r]
            poly += coeffs[m] * math.pi ** m * inner
        return self.phi.damped(w) * poly

    def damped_quadrature(self, z, w, chunk=2048):
        """Quadrature route for real-line symbols."""
        y, uvals = self.symbol.real_line_samples()
        step = y[1] - y[0]
        z, w = np.broadcast_arrays(np.asarray(z, dtype=np.complex128),
                                   np.asarray(w, dtype=np.complex128))
        fz, fw = z.ravel(), w.ravel()
        out = np.empty(fz.shape, dtype=np.complex128)
        n = self.laguerre_index
        for s in range(0, fz.size, chunk):
            zz = fz[s:s + chunk, None]
            ww = fw[s:s + chunk, None]
            yy = y[None, :]
            lag = _laguerre_poly(n, np.pi * np.abs(zz - yy) ** 2)
            kern = lag * np.exp(-np.pi * (yy + ww.real) ** 2 / 2 - 1j * np.pi * yy * ww.imag)
            out[s:s + chunk] = (kern @ uvals) * step
        return out.reshape(z.shape)


def _laguerre_poly(n, x):
    from ._kernels import laguerre_array
    return laguerre_array(n, x)


def symbol_psi(u, order, laguerre_index=None):
    """psi for the order-``order`` operator built from ``u``.

    ``laguerre_index`` defaults to ``order`` (B^0 = B is the analytic case
    with L_0 = 1); the alternative ``order - 1`` is kept selectable for the
    index-discrimination experiment.
    """
    order = _check_order(order, "polyanalytic order")
    n = order if laguerre_index is None else _check_order(laguerre_index, "Laguerre index")
    return PsiSymbol(u, order, n, phi_for(u))
