"""Uniform truncated grids on R and on C ~ R^2, trapezoid quadrature, CSV I/O.

Phase-space arrays are stored with shape ``(n_x, n_omega)``: x is the outer
(row) index and omega the inner one, so a point ``z = x + i*omega`` sits at
``values[i, j]``.
"""
from dataclasses import dataclass, field

import numpy as np

from ._kernels import tiled_sum
from .errors import GridMismatchError

_REL_TOL = 1e-9


def _count(half_width, step):
    ratio = 2.0 * half_width / step
    n = int(round(ratio))
    if abs(ratio - n) > _REL_TOL * max(1.0, ratio):
        raise GridMismatchError(
            f"2*{half_width}/{step} = {ratio} is not an integer number of steps")
    if n % 2:
        raise GridMismatchError("grid must contain the origin (even number of steps)")
    return n + 1


@dataclass(frozen=True)
class RealGrid:
    """Grid ``-T, -T + h, ..., T`` on the time axis."""

    half_width: float = 8.0
    step: float = 1.0 / 64

    def __post_init__(self):
        if not self.step > 0 or not self.half_width > 0:
            raise GridMismatchError("half_width and step must be positive")
        if self.step > 1.0 / 16 + 1e-15:
            raise GridMismatchError(f"time step {self.step} exceeds 1/16")
        if self.half_width < 6.0:
            raise GridMismatchError(f"half width {self.half_width} below 6")
        _count(self.half_width, self.step)

    @property
    def size(self):
        return _count(self.half_width, self.step)

    @property
    def points(self):
        n = self.size
        return (np.arange(n) - (n - 1) // 2) * self.step


@dataclass(frozen=True)
class ComplexGrid:
    """Square grid ``[-R, R]^2`` in (x, omega) with area element h^2.

    Radii below 3 are accepted so that undersized configurations can be
    *reported* as failing truncation checks instead of refused outright.
    """

    radius: float = 5.0
    step: float = 0.05

    def __post_init__(self):
        if not self.step > 0 or not self.radius > 0:
            raise GridMismatchError("radius and step must be positive")
        if self.step > 0.2 + 1e-15:
            raise GridMismatchError(f"phase-space step {self.step} exceeds 0.2")
        _count(self.radius, self.step)

    @property
    def n(self):
        return _count(self.radius, self.step)

    @property
    def axis(self):
        n = self.n
        return (np.arange(n) - (n - 1) // 2) * self.step

    def mesh(self):
        """``(X, W)`` coordinate arrays of shape (n, n), x outer."""
        ax = self.axis
        return np.meshgrid(ax, ax, indexing="ij")

    def z(self):
        x, w = self.mesh()
        return x + 1j * w

    def index_of(self, value):
        """Nearest grid index of a coordinate value, or raise if off-grid."""
        k = value / self.step
        ki = int(round(k))
        if abs(k - ki) > 1e-6:
            raise GridMismatchError(f"{value} is not a multiple of the step {self.step}")
        return ki + (self.n - 1) // 2

    def snap(self, value):
        return round(value / self.step) * self.step


def _frozen(a, dtype=np.complex128):
    arr = np.array(a, dtype=dtype)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class SampledSignal:
    """Complex samples of a function on a :class:`RealGrid`."""

    grid: RealGrid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        vals = _frozen(self.values)
        if vals.shape != (self.grid.size,):
            raise GridMismatchError(
                f"signal has {vals.shape} samples, grid has {self.grid.size}")
        if not np.all(np.isfinite(vals)):
            raise GridMismatchError("signal values must be finite")
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_function(cls, fn, grid=None):
        grid = grid or RealGrid()
        return cls(grid, fn(grid.points))

    def norm(self):
        return float(np.sqrt(integrate_real_array(np.abs(self.values) ** 2, self.grid.step).real))

    def __add__(self, other):
        _same(self.grid, other.grid)
        return SampledSignal(self.grid, self.values + other.values)

    def __sub__(self, other):
        _same(self.grid, other.grid)
        return SampledSignal(self.grid, self.values - other.values)

    def __mul__(self, c):
        return SampledSignal(self.grid, self.values * c)

    __rmul__ = __mul__


@dataclass(frozen=True)
class PhaseSpaceFunction:
    """Complex values on a :class:`ComplexGrid`, shape (n, n)."""

    grid: ComplexGrid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        vals = _frozen(self.values)
        n = self.grid.n
        if vals.shape != (n, n):
            raise GridMismatchError(f"phase-space data {vals.shape}, grid wants {(n, n)}")
        if not np.all(np.isfinite(vals)):
            raise GridMismatchError("phase-space values must be finite")
        object.__setattr__(self, "values", vals)


def _same(g1, g2):
    if g1 != g2:
        raise GridMismatchError(f"grid mismatch: {g1} vs {g2}")


def integrate_real_array(values, step):
    return tiled_sum(values) * step


def integrate_complex_array(values, step):
    return tiled_sum(np.asarray(values).ravel()) * step * step


def integrate_real(s):
    """Trapezoid rule on the signal grid (endpoint terms are negligible by the
    decay assumption, so this is the plain Riemann sum)."""
    return complex(integrate_real_array(s.values, s.grid.step))


def integrate_complex(p):
    """Area integral over the phase-space grid, element h^2."""
    return complex(integrate_complex_array(p.values, p.grid.step))


def inner_real(f, g):
    """<f, g>_{L^2} on a common grid."""
    _same(f.grid, g.grid)
    return complex(integrate_real_array(f.values * np.conj(g.values), f.grid.step))


# ---------------------------------------------------------------------- CSV

def _check_uniform(axis, name):
    if axis.size < 2:
        raise GridMismatchError(f"{name} axis needs at least two points")
    d = np.diff(axis)
    step = d.mean()
    if not step > 0 or np.max(np.abs(d - step)) / step > _REL_TOL:
        raise GridMismatchError(f"non-uniform {name} spacing")
    half = -axis[0]
    if abs(axis[-1] - half) > _REL_TOL * max(1.0, half):
        raise GridMismatchError(f"{name} axis is not symmetric about 0")
    return float(half), float(step)


def _read_rows(path, header):
    with open(path) as fh:
        first = fh.readline().strip().replace(" ", "")
        if first != header:
            raise GridMismatchError(f"{path}: expected header {header!r}, got {first!r}")
        data = np.loadtxt(fh, delimiter=",", ndmin=2)
    return data


def _nice_step(step):
    # undo decimal round-off from text so that e.g. 0.015625 stays exact
    for denom in (1, 2, 4, 5, 8, 10, 16, 20, 32, 40, 50, 64, 100, 128, 256, 1000):
        k = step * denom
        if abs(k - round(k)) < 1e-9 and round(k) > 0:
            return round(k) / denom
    return step


def read_signal_csv(path):
    data = _read_rows(path, "t,re,im")
    half, step = _check_uniform(data[:, 0], "t")
    grid = RealGrid(round(half / _nice_step(step)) * _nice_step(step), _nice_step(step))
    return SampledSignal(grid, data[:, 1] + 1j * data[:, 2])


def write_signal_csv(path, s):
    t = s.grid.points
    arr = np.column_stack([t, s.values.real, s.values.imag])
    np.savetxt(path, arr, fmt="%.17g", delimiter=",", header="t,re,im", comments="")


def read_phase_csv(path):
    data = _read_rows(path, "x,omega,re,im")
    xs = np.unique(data[:, 0])
    ws = np.unique(data[:, 1])
    half_x, step_x = _check_uniform(xs, "x")
    half_w, step_w = _check_uniform(ws, "omega")
    if abs(step_x - step_w) > _REL_TOL * step_x or abs(half_x - half_w) > _REL_TOL * half_x:
        raise GridMismatchError("phase-space grid must be square with equal steps")
    n = xs.size
    if data.shape[0] != n * n:
        raise GridMismatchError("phase-space CSV does not cover a full grid")
    order = np.lexsort((data[:, 1], data[:, 0]))
    if not np.array_equal(order, np.arange(n * n)):
        raise GridMismatchError("phase-space rows must be row-major ascending (x outer)")
    step = _nice_step(step_x)
    grid = ComplexGrid(round(half_x / step) * step, step)
    return PhaseSpaceFunction(grid, (data[:, 2] + 1j * data[:, 3]).reshape(n, n))


def write_phase_csv(path, p):
    x, w = p.grid.mesh()
    arr = np.column_stack([x.ravel(), w.ravel(), p.values.real.ravel(), p.values.imag.ravel()])
    np.savetxt(path, arr, fmt="%.17g", delimiter=",", header="x,omega,re,im", comments="")
