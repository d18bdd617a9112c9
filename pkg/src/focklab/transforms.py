"""STFT with Hermite windows, the Bargmann transform and its polyanalytic
versions B^k, with adjoints.

Fock-side data is always stored weighted, ``F~(z) = F(z) exp(-pi |z|^2 / 2)``;
in those coordinates

    B~^k f(x + i w) = exp(-i pi x w) V_{phi_k} f(x, -w).
"""
import math
from dataclasses import dataclass

import numpy as np

from .errors import GridMismatchError, OrderOutOfRangeError, WrongSpaceError
from .grids import ComplexGrid, PhaseSpaceFunction, RealGrid, SampledSignal
from .special import hermite_all

MAX_WINDOW_ORDER = 8
TIME_MARGIN = 3.0


@dataclass(frozen=True)
class WindowSpec:
    """Hermite window phi_k, k <= 8."""

    hermite_order: int = 0

    def __post_init__(self):
        k = self.hermite_order
        if isinstance(k, bool) or int(k) != k or not 0 <= int(k) <= MAX_WINDOW_ORDER:
            raise OrderOutOfRangeError(f"window order {k!r} outside [0, {MAX_WINDOW_ORDER}]")
        object.__setattr__(self, "hermite_order", int(k))


@dataclass(frozen=True)
class WeightedFockFunction(PhaseSpaceFunction):
    """Weighted samples F(z) exp(-pi|z|^2/2) tagged with polyanalytic order."""

    order: int = 0

    def __post_init__(self):
        super().__post_init__()
        if int(self.order) != self.order or self.order < 0:
            raise OrderOutOfRangeError(f"order {self.order!r} must be a non-negative integer")

    def with_values(self, values):
        return WeightedFockFunction(self.grid, values, self.order)


def _window(g):
    return g if isinstance(g, WindowSpec) else WindowSpec(g)


def _check_cover(f, grid):
    if f.grid.half_width < grid.radius + TIME_MARGIN - 1e-12:
        raise GridMismatchError(
            f"signal half width {f.grid.half_width} must be >= radius {grid.radius} + {TIME_MARGIN}")


def _window_matrix(k, t, x):
    """phi_k(t - x) with shape (len(x), len(t))."""
    return hermite_all(k, t[None, :] - x[:, None])[k]


def stft(f, g, grid, method="direct"):
    """V_g f(x, w) = int f(t) conj(phi_k(t - x)) exp(-2 pi i t w) dt on ``grid``."""
    g = _window(g)
    _check_cover(f, grid)
    k = g.hermite_order
    t = f.grid.points
    x = grid.axis
    ht = f.grid.step
    a = f.values[None, :] * _window_matrix(k, t, x)
    if method == "direct":
        e = np.exp(-2j * np.pi * np.outer(t, x))
        vals = (a @ e) * ht
    elif method == "fft":
        vals = _stft_fft(a, f.grid, grid) * ht
    else:
        raise ValueError(f"unknown STFT method {method!r}")
    return PhaseSpaceFunction(grid, vals)


def _stft_fft(a, tgrid, grid):
    # The DFT bin spacing 1/(L h_t) must equal the phase-grid step h.
    base = 1.0 / (grid.step * tgrid.step)
    if abs(base - round(base)) > 1e-9:
        raise GridMismatchError("FFT path needs 1/(h * h_t) to be an integer")
    base = int(round(base))
    nt = tgrid.size
    length = base * math.ceil(nt / base)
    spec = np.fft.fft(a, n=length, axis=1)
    stride = length // base
    n = grid.n
    kk = (np.arange(n) - (n - 1) // 2) * stride
    out = spec[:, kk % length]
    # shift the time origin from t_0 = -T to 0
    return out * np.exp(2j * np.pi * tgrid.half_width * grid.axis)[None, :]


def stft_adjoint(p, g, out_grid=None):
    """V_g^* P(t) = iint P(x, w) phi_k(t - x) exp(2 pi i t w) dx dw."""
    g = _window(g)
    out_grid = out_grid or RealGrid()
    t = out_grid.points
    ax = p.grid.axis
    h = p.grid.step
    e = np.exp(2j * np.pi * np.outer(ax, t))  # (n_omega, n_t)
    q = p.values @ e  # (n_x, n_t)
    w = _window_matrix(g.hermite_order, t, ax)
    vals = np.sum(w * q, axis=0) * (h * h)
    return SampledSignal(out_grid, vals)


def poly_bargmann(f, k, grid=None):
    """Weighted B^k f on ``grid``: exp(-i pi x w) V_{phi_k} f(x, -w)."""
    grid = grid or ComplexGrid()
    k = _window(k).hermite_order
    v = stft(f, k, grid).values
    x, w = grid.mesh()
    vals = np.exp(-1j * np.pi * x * w) * v[:, ::-1]
    return WeightedFockFunction(grid, vals, k)


def bargmann(f, grid=None):
    """Weighted Bargmann transform, order tag 0."""
    return poly_bargmann(f, 0, grid)


def bargmann_adjoint(F, out_grid=None):
    """B^* F(t) = 2^{1/4} int F~(z) exp(2 pi t zbar - pi t^2 - pi zbar^2/2 - pi|z|^2/2) dz.

    Evaluated in the factorised form
    2^{1/4} sum_a exp(-pi (t-a)^2) sum_b F~(a, b) exp(i pi a b - 2 pi i t b) h^2.
    """
    if F.order != 0:
        raise WrongSpaceError(f"Bargmann adjoint needs order 0 data, got order {F.order}")
    out_grid = out_grid or RealGrid()
    t = out_grid.points
    ax = F.grid.axis
    h = F.grid.step
    a, b = F.grid.mesh()
    inner = (F.values * np.exp(1j * np.pi * a * b)) @ np.exp(-2j * np.pi * np.outer(ax, t))
    gauss = np.exp(-np.pi * (t[None, :] - ax[:, None]) ** 2)
    vals = 2.0 ** 0.25 * np.sum(gauss * inner, axis=0) * (h * h)
    return SampledSignal(out_grid, vals)


def poly_bargmann_adjoint(F, out_grid=None):
    """(B^k)^* via the STFT adjoint with window phi_k after un-reflection."""
    k = F.order
    x, w = F.grid.mesh()
    p = np.exp(-1j * np.pi * x * w) * F.values[:, ::-1]
    return stft_adjoint(PhaseSpaceFunction(F.grid, p), k, out_grid)


# ------------------------------------------------------------ test fixtures

def hermite_signal(coeffs, grid=None):
    """sum_n coeffs[n] phi_n sampled on ``grid``."""
    grid = grid or RealGrid()
    coeffs = np.asarray(coeffs, dtype=np.complex128)
    rows = hermite_all(len(coeffs) - 1, grid.points)
    return SampledSignal(grid, coeffs @ rows)


def fock_monomial(n, grid=None):
    """Weighted B phi_n = sqrt(pi^n / n!) z^n exp(-pi|z|^2/2)."""
    grid = grid or ComplexGrid()
    z = grid.z()
    vals = math.sqrt(math.pi ** n / math.factorial(n)) * z ** n * np.exp(-np.pi * np.abs(z) ** 2 / 2)
    return WeightedFockFunction(grid, vals, 0)


def fock_inner(F, G):
    """<F, G>_{F^2} from weighted samples: int F~ conj(G~) dz."""
    from .grids import integrate_complex_array

    if F.grid != G.grid:
        raise GridMismatchError("Fock inner product needs a common grid")
    return complex(integrate_complex_array(F.values * np.conj(G.values), F.grid.step))
