import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from focklab._kernels import _tiled_sum_nb, _tiled_sum_np, tiled_sum
from focklab.errors import GridMismatchError
from focklab.grids import (ComplexGrid, PhaseSpaceFunction, RealGrid, SampledSignal,
                           integrate_complex, integrate_real, read_phase_csv, read_signal_csv,
                           write_phase_csv, write_signal_csv)


def test_real_grid_invariants():
    g = RealGrid()
    assert g.size == 1025 and g.size % 2 == 1
    assert g.points[512] == 0.0
    with pytest.raises(ValueError):
        RealGrid(8, 0.1)
    with pytest.raises(ValueError):
        RealGrid(5, 1 / 64)


def test_complex_grid_invariants():
    g = ComplexGrid(4, 0.1)
    assert g.n == 81
    x, w = g.mesh()
    assert x[1, 0] > x[0, 0] and w[0, 1] > w[0, 0]
    assert g.z()[40, 40] == 0
    with pytest.raises(ValueError):
        ComplexGrid(4, 0.3)


def test_integrate_real_examples(sgrid):
    t = sgrid.points
    assert abs(integrate_real(SampledSignal(sgrid, np.exp(-np.pi * t * t))) - 1) < 1e-12
    assert integrate_real(SampledSignal(sgrid, np.zeros(t.size))) == 0
    phi0 = 2 ** 0.25 * np.exp(-np.pi * t * t)
    assert abs(integrate_real(SampledSignal(sgrid, phi0 ** 2)) - 1) < 1e-10


def test_integrate_complex_examples(tgrid):
    z = tgrid.z()
    g = np.exp(-np.pi * np.abs(z) ** 2)
    assert abs(integrate_complex(PhaseSpaceFunction(tgrid, g)) - 1) < 1e-10
    assert abs(integrate_complex(PhaseSpaceFunction(tgrid, np.abs(z) ** 2 * g)) - 1 / np.pi) < 1e-8
    for m in range(5):
        for n in range(5):
            val = integrate_complex(PhaseSpaceFunction(tgrid, z ** m * np.conj(z) ** n * g))
            exact = math.factorial(n) / np.pi ** n if m == n else 0
            assert abs(val - exact) < 1e-7


def test_truncation_doubling(tgrid):
    big = ComplexGrid(10, 0.05)
    f = lambda z: np.abs(z) ** 2 * np.exp(-np.pi * np.abs(z) ** 2)
    a = integrate_complex(PhaseSpaceFunction(tgrid, f(tgrid.z())))
    b = integrate_complex(PhaseSpaceFunction(big, f(big.z())))
    assert abs(a - b) < 1e-10


@settings(max_examples=50)
@given(arrays(np.float64, st.integers(0, 700), elements=st.floats(-1e6, 1e6)))
def test_tiled_sum_backends_bitwise(x):
    assert _tiled_sum_nb(x) == _tiled_sum_np(x)


def test_tiled_sum_compensated():
    x = np.full(100_000, 0.1)
    assert abs(tiled_sum(x) - math.fsum(x)) <= 1e-15 * math.fsum(x)
    z = np.array([1 + 2j, 3 - 1j])
    assert tiled_sum(z) == 4 + 1j


def test_signal_csv_roundtrip(tmp_path, sgrid):
    s = SampledSignal(sgrid, np.exp(-sgrid.points ** 2) * (1 + 0.5j))
    p = tmp_path / "s.csv"
    write_signal_csv(p, s)
    assert p.read_text().splitlines()[0] == "t,re,im"
    back = read_signal_csv(p)
    assert back.grid == sgrid
    assert np.array_equal(back.values, s.values)


def test_phase_csv_roundtrip(tmp_path):
    g = ComplexGrid(3, 0.2)
    v = np.exp(-np.abs(g.z()) ** 2) * g.z()
    p = tmp_path / "p.csv"
    write_phase_csv(p, PhaseSpaceFunction(g, v))
    back = read_phase_csv(p)
    assert back.grid == g and np.array_equal(back.values, v)


def test_csv_rejects_nonuniform(tmp_path):
    p = tmp_path / "bad.csv"
    t = np.linspace(-8, 8, 1025)
    t[10] += 1e-6
    np.savetxt(p, np.column_stack([t, t * 0, t * 0]), delimiter=",", header="t,re,im", comments="")
    with pytest.raises(GridMismatchError):
        read_signal_csv(p)


def test_signals_are_immutable(sgrid):
    s = SampledSignal(sgrid, np.zeros(sgrid.size))
    with pytest.raises(ValueError):
        s.values[0] = 1
