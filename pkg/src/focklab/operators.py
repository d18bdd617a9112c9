"""Time-frequency shifts, Fock shifts, convolution by a symbol, and the
translation-invariant Fock operators S in their integral-kernel and
translation forms.

Weighted kernel of the order-k operator (z = x + i om, w = a + i b):

    K(z, w) = exp(pi z wbar - pi|z|^2/2 - pi|w|^2/2) * psi(z - w, wbar - z)

with psi(., eta) = phi(eta) in the analytic case.  Its modulus is
exp(-pi|z - w|^2/2) |psi| and it depends on a and x only through d = a - x
up to the unimodular factor exp(i pi x om) exp(-i pi a b); the operator is
therefore stored as a (2n-1, n, n) table over (d, om, b).
"""
import math
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np
from scipy.signal import fftconvolve

from ._kernels import apply_table
from .errors import GridMismatchError, RangeError, UnsupportedPathError, WrongSpaceError
from .grids import ComplexGrid, SampledSignal
from .symbols import PhiSymbol, PsiSymbol, Symbol, phi_for, symbol_psi
from .transforms import WeightedFockFunction

SHIFT_MARGIN = 2.0
KERNEL_TOL = 1e-10


# ------------------------------------------------------------------ shifts

def tf_shift(f, x, omega):
    """pi(z) f (t) = exp(2 pi i omega t) f(t - x), x snapped to the time grid."""
    grid = f.grid
    if abs(x) > grid.half_width - SHIFT_MARGIN:
        raise RangeError(f"shift {x} leaves the time grid margin")
    k = int(round(x / grid.step))
    vals = np.zeros_like(f.values)
    if k >= 0:
        vals[k:] = f.values[:f.values.size - k]
    else:
        vals[:k] = f.values[-k:]
    vals = vals * np.exp(2j * np.pi * omega * grid.points)
    return SampledSignal(grid, vals)


def _shift_array(values, kx, kw):
    """out[i, j] = values[i - kx, j - kw], zero outside."""
    n = values.shape[0]
    out = np.zeros_like(values)
    si = slice(max(kx, 0), n + min(kx, 0))
    sj = slice(max(kw, 0), n + min(kw, 0))
    ti = slice(max(-kx, 0), n + min(-kx, 0))
    tj = slice(max(-kw, 0), n + min(-kw, 0))
    out[si, sj] = values[ti, tj]
    return out


def _shift_unchecked(F, x, omega):
    grid = F.grid
    kx = int(round(x / grid.step))
    kw = int(round(omega / grid.step))
    xs, ws = kx * grid.step, kw * grid.step
    a, b = grid.mesh()
    # w - zbar = (a - x) + i (b + om)
    shifted = _shift_array(F.values, kx, -kw)
    phase = np.exp(1j * np.pi * (xs * ws + xs * b + ws * a))
    return phase * shifted


def fock_shift(F, z):
    """beta_z F (w) = exp(i pi x om - pi|z|^2/2) exp(pi z w) F(w - zbar), weighted.

    In weighted coordinates the real exponents cancel identically, leaving
    exp(i pi (x om + Im(z w))) F~(w - zbar).  z is snapped to the grid.
    """
    z = complex(z)
    lim = F.grid.radius - SHIFT_MARGIN
    if abs(z.real) > lim + 1e-12 or abs(z.imag) > lim + 1e-12:
        raise RangeError(f"Fock shift {z} exceeds the grid margin {lim}")
    return F.with_values(_shift_unchecked(F, z.real, z.imag))


# ------------------------------------------------------------- convolution

def _hilbert_kernel(n):
    """Impulse response of the multiplier -i sgn(xi) on |xi| < 1/(2 h)."""
    j = np.arange(-(n - 1), n)
    k = np.zeros(j.shape)
    odd = (j % 2) != 0
    k[odd] = 2.0 / (np.pi * j[odd])
    return k


def convolve_symbol(u, f, method="direct"):
    """(u * f)(t) on f's grid.

    Gaussian-family and sampled symbols use the trapezoid rule on the
    signal grid; dirac shifts; hilbert multiplies by -i sgn(xi) in the
    frequency domain (FFT of the exactly band-limited impulse response).
    """
    grid = f.grid
    n = grid.size
    if u.tag == "dirac":
        return tf_shift(f, u.param, 0.0)
    if u.tag == "hilbert":
        kern = _hilbert_kernel(n)
        full = fftconvolve(f.values, kern)
        return SampledSignal(grid, full[n - 1:2 * n - 1])
    h = grid.step
    if u.tag == "sampled":
        sg = u.samples.grid
        if abs(sg.step - h) > 1e-12:
            raise GridMismatchError("sampled symbol must share the signal's time step")
        uvals = u.samples.values
        off = (sg.size - 1) // 2
    else:
        y = (np.arange(2 * n - 1) - (n - 1)) * h
        uvals = u.u(y)
        off = n - 1
    if method == "fft":
        full = fftconvolve(f.values, uvals)
    elif method == "direct":
        full = np.convolve(f.values, uvals)
    else:
        raise ValueError(f"unknown convolution method {method!r}")
    # full[i + off] = sum_m f[m] u[(i - m) + off]
    vals = full[off:off + n] * h
    return SampledSignal(grid, vals)


# --------------------------------------------------------------- operators

def _translation_coords(grid):
    n = grid.n
    h = grid.step
    d = (np.arange(2 * n - 1) - (n - 1)) * h
    ax = grid.axis
    return d[:, None, None], ax[None, :, None], ax[None, None, :]


def _kernel_radius(phi, grid):
    """Smallest r with exp(-pi r^2/2) * sup_{|zeta| <= 2R} |phi| < tol, or None."""
    if phi.log_sup is None:
        return None
    log_sup = phi.log_sup(2 * grid.radius)
    r2 = 2.0 * (log_sup - math.log(KERNEL_TOL)) / math.pi
    return math.sqrt(max(r2, 0.0))


@dataclass
class FockOperator:
    """Matrix-free translation-invariant operator of order k on ``grid``."""

    symbol: Union[PhiSymbol, PsiSymbol]
    order: int
    grid: ComplexGrid
    r_cut: Optional[float] = None
    label: str = ""
    _table: Optional[np.ndarray] = field(default=None, repr=False)

    @classmethod
    def from_symbol(cls, u, order=0, grid=None, laguerre_index=None):
        grid = grid or ComplexGrid(4.0, 0.1)
        if order == 0 and (laguerre_index in (None, 0)):
            phi = phi_for(u)
            return cls(phi, 0, grid, _kernel_radius(phi, grid), u.label)
        if u.tag == "hilbert":
            raise UnsupportedPathError("polyanalytic Hilbert operator is not supported")
        psi = symbol_psi(u, order, laguerre_index)
        return cls(psi, order, grid, None, u.label)

    @property
    def table(self):
        if self._table is None:
            self._table = self._build_table()
        return self._table

    def _build_table(self):
        d, om, b = _translation_coords(self.grid)
        eta = d - 1j * (om + b)  # wbar - z
        base = np.exp(-np.pi * (om - b) ** 2 / 2 + 1j * np.pi * d * (om + b))
        if isinstance(self.symbol, PhiSymbol):
            # phi depends on (d, om + b) only: evaluate on that lattice
            n = self.grid.n
            h = self.grid.step
            dd = (np.arange(2 * n - 1) - (n - 1)) * h
            ss = (np.arange(2 * n - 1) - (n - 1)) * h
            lat = self.symbol.damped(dd[:, None] - 1j * ss[None, :])
            j = np.arange(n)
            sidx = j[:, None] + j[None, :]  # index of om + b
            vals = lat[:, sidx]
        else:
            zeta = -d + 1j * (om - b)  # z - w
            vals = self.symbol.damped(zeta, eta)
        table = base * vals
        if self.r_cut is not None:
            table = np.where(d ** 2 + (om - b) ** 2 > self.r_cut ** 2, 0.0, table)
        return np.ascontiguousarray(table)

    def _check(self, F):
        if F.order != self.order:
            raise WrongSpaceError(f"operator of order {self.order} applied to order {F.order} data")
        if F.grid != self.grid:
            raise GridMismatchError("operator and data live on different grids")

    def apply(self, F):
        self._check(F)
        x, w = self.grid.mesh()
        h = self.grid.step
        pre = np.exp(-1j * np.pi * x * w) * F.values
        out = apply_table(self.table, pre) * np.exp(1j * np.pi * x * w) * (h * h)
        return F.with_values(out)

    def adjoint(self, F):
        """Adjoint with respect to the grid inner product sum F~ conj(G~) h^2."""
        self._check(F)
        x, w = self.grid.mesh()
        h = self.grid.step
        pre = np.exp(-1j * np.pi * x * w) * F.values
        out = apply_table(self.table, pre, adjoint=True) * np.exp(1j * np.pi * x * w) * (h * h)
        return F.with_values(out)

    __call__ = apply


def apply_S(F, op):
    """Weighted S F~ via the integral kernel of ``op``."""
    return op.apply(F)


def apply_S_translation_form(F, u):
    """S F(z) = int u(y) (beta_y F)(z) dy with y on the phase-grid step."""
    grid = F.grid
    if u.tag == "dirac":
        return F.with_values(_shift_unchecked(F, grid.snap(u.param), 0.0))
    if u.tag == "hilbert":
        raise UnsupportedPathError("hilbert symbol has no real-line translation form")
    h = grid.step
    n = grid.n
    ks = np.arange(-(n - 1), n)
    ys = ks * h
    if u.tag == "sampled":
        sg = u.samples.grid
        ratio = h / sg.step
        if abs(ratio - round(ratio)) > 1e-9:
            raise GridMismatchError("sampled symbol step must divide the phase-grid step")
        idx = (sg.size - 1) // 2 + ks * int(round(ratio))
        keep = (idx >= 0) & (idx < sg.size)
        ks, ys = ks[keep], ys[keep]
        uvals = u.samples.values[idx[keep]]
    else:
        uvals = u.u(ys)
    out = np.zeros(F.values.shape, dtype=np.complex128)
    for y, uy in zip(ys, uvals):
        out += uy * _shift_unchecked(F, y, 0.0)
    return F.with_values(out * h)
