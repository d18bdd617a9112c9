import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.special import dawsn

from conftest import relerr
from focklab import _kernels
from focklab.errors import ConditioningError, RangeError, UnsupportedPathError, WrongSpaceError
from focklab.grids import SampledSignal
from focklab.operators import (FockOperator, apply_S, apply_S_translation_form, convolve_symbol,
                               fock_shift, tf_shift)
from focklab.symbols import (Symbol, hilbert_phi, parse_symbol, phi_for, symbol_phi,
                             symbol_phi_from_multiplier, symbol_psi)
from focklab.transforms import bargmann, bargmann_adjoint, poly_bargmann, poly_bargmann_adjoint


@pytest.fixture(scope="module")
def ops(ogrid):
    cache = {}

    def get(u, k, idx=None):
        key = (u.label, k, idx)
        if key not in cache:
            cache[key] = FockOperator.from_symbol(u, k, ogrid, laguerre_index=idx)
        return cache[key]
    return get


def probe(signal, k, n, grid):
    c = np.zeros(n + 1)
    c[n] = 1
    return poly_bargmann(signal(c), k, grid)


# ------------------------------------------------------------------ shifts

def test_tf_shift_examples(signal, sgrid):
    f = signal([0.5, 0.5j])
    assert np.array_equal(tf_shift(f, 0, 0).values, f.values)
    rng = np.random.default_rng(3)
    t = sgrid.points
    for _ in range(10):
        x = round(rng.uniform(-2, 2) * 64) / 64
        w = rng.uniform(-2, 2)
        assert tf_shift(f, x, w).norm() == pytest.approx(f.norm(), rel=1e-12)
        mw = SampledSignal(sgrid, np.exp(2j * np.pi * w * t) * f.values)
        lhs = tf_shift(mw, x, 0).values
        rhs = np.exp(-2j * np.pi * x * w) * tf_shift(f, x, w).values
        assert np.max(np.abs(lhs - rhs)) < 1e-12
    with pytest.raises(RangeError):
        tf_shift(f, 6.5, 0)


def test_fock_shift_examples(signal, sgrid, tgrid):
    F = bargmann(signal([0, 1.0]), tgrid)
    assert np.array_equal(fock_shift(F, 0).values, F.values)
    z = 0.5 + 0.25j
    lhs = fock_shift(F, z).values
    rhs = bargmann(tf_shift(signal([0, 1.0]), z.real, z.imag), tgrid).values
    assert relerr(lhs, rhs) < 1e-6
    z = -0.5 + 0.5j
    for k in (1, 2):
        lhs = fock_shift(poly_bargmann(signal([1.0]), k, tgrid), z).values
        rhs = poly_bargmann(tf_shift(signal([1.0]), z.real, z.imag), k, tgrid).values
        assert relerr(lhs, rhs) < 1e-5
    with pytest.raises(RangeError):
        fock_shift(F, 3.5)


@settings(max_examples=25, deadline=None)
@given(st.integers(-30, 30), st.integers(-30, 30))
def test_fock_shift_modulus_exact(tgrid, i, j):
    rng = np.random.default_rng(0)
    vals = rng.standard_normal((tgrid.n, tgrid.n)) + 1j * rng.standard_normal((tgrid.n, tgrid.n))
    from focklab.transforms import WeightedFockFunction
    F = WeightedFockFunction(tgrid, vals, 0)
    z = complex(i * tgrid.step, j * tgrid.step)
    G = np.abs(fock_shift(F, z).values)
    # |F~(w - zbar)|: x index moves by +i, omega index by -j
    n = tgrid.n
    ref = np.zeros((n, n))
    ref[max(i, 0):n + min(i, 0), max(-j, 0):n + min(-j, 0)] = \
        np.abs(vals)[max(-i, 0):n + min(-i, 0), max(j, 0):n + min(j, 0)]
    assert np.max(np.abs(G - ref)) <= 4e-16 * np.max(ref)


# ------------------------------------------------------------- convolution

def test_convolve_examples(signal, sgrid):
    f = signal([1.0])
    assert np.array_equal(convolve_symbol(Symbol.dirac(0), f).values, f.values)
    t = sgrid.points
    g = convolve_symbol(Symbol.gaussian(1.0), f).values
    assert np.max(np.abs(g - 2 ** 0.25 / math.sqrt(2) * np.exp(-np.pi * t * t / 2))) < 1e-8
    for u in (Symbol.gaussian(0.5), Symbol.chirp(1.0)):
        a = convolve_symbol(u, f, "direct").values
        b = convolve_symbol(u, f, "fft").values
        assert np.max(np.abs(a - b)) < 1e-10


def test_hilbert_convolution(signal, sgrid):
    t = sgrid.points
    H = convolve_symbol(Symbol.hilbert(), signal([1.0])).values
    daw = 2 ** 0.25 * 2 / math.sqrt(math.pi) * dawsn(math.sqrt(math.pi) * t)
    assert np.max(np.abs(H - daw)) < 1e-6
    # frozen quadrature value of H phi_0 at t = 1/2
    assert H[np.searchsorted(t, 0.5)] == pytest.approx(0.7249470046500823, abs=1e-12)


def test_hilbert_isometry_with_tail(signal, sgrid):
    # grid energy plus the analytic tail of the Dawson closed form
    H = convolve_symbol(Symbol.hilbert(), signal([1.0])).values
    T = sgrid.half_width
    y = np.linspace(T, T + 4000, 4_000_001)
    tail = 2 * np.trapezoid((2 ** 0.25 * 2 / math.sqrt(math.pi) * dawsn(math.sqrt(math.pi) * y)) ** 2, y)
    tail += 2 * math.sqrt(2) / math.pi ** 2 / (T + 4000)
    grid_part = np.trapezoid(np.abs(H) ** 2, dx=sgrid.step)
    assert abs(math.sqrt(grid_part + tail) - 1) < 1e-6


# ----------------------------------------------------------------- symbols

def test_symbol_phi_examples():
    z = np.array([0.3 + 1.1j, -2 + 0.5j, 1.5 - 2j])
    assert np.allclose(symbol_phi(Symbol.dirac(0))(z), 1, atol=1e-15)
    g = symbol_phi(Symbol.gaussian(0.5))
    assert np.max(np.abs(g(z) - np.exp(np.pi * z * z / 4))) < 1e-12
    c = symbol_phi(Symbol.chirp(1.0))
    c0, c1, d = c.closed_form
    assert c1 == pytest.approx(math.pi * (0.5 - 1j) / 5, rel=1e-14)
    assert d == 0
    assert c(1 + 0.5j) == pytest.approx(1.7006235826279634 - 1.4636696763814403j, rel=1e-12)


@pytest.mark.parametrize("u", [Symbol.gaussian(0.5), Symbol.gaussian(2.0), Symbol.chirp(1.0),
                               Symbol.chirp(-0.5)])
def test_closed_form_matches_quadrature(u):
    ph = symbol_phi(u)
    m = np.arange(-30, 31) * 0.1
    z = (m[:, None] + 1j * m[None, :]).ravel()
    z = z[np.abs(z) <= 3]
    assert np.max(np.abs(ph(z) - ph.quadrature(z))) <= 1e-10 * max(1, np.max(np.abs(ph(z))))


def test_symbol_phi_errors():
    with pytest.raises(UnsupportedPathError):
        symbol_phi(Symbol.hilbert())
    ph = symbol_phi(Symbol.sampled(SampledSignal.from_function(lambda y: np.exp(-np.pi * y * y))))
    with pytest.raises(ConditioningError):
        ph(5.0)


def test_wick_form():
    z = np.array([0.0, 1.0, 0.5 - 1.5j, -1.2 + 0.9j, 2j])
    one = symbol_phi_from_multiplier(lambda xi: np.ones_like(xi))
    assert np.max(np.abs(one(z) - 1)) < 1e-9
    gm = symbol_phi_from_multiplier(lambda xi: math.sqrt(2) * np.exp(-2 * np.pi * xi * xi))
    assert np.max(np.abs(gm(z) - symbol_phi(Symbol.gaussian(0.5))(z))) < 1e-7


def test_hilbert_phi():
    hp = hilbert_phi()
    assert hp(0.7 + 0.3j) == pytest.approx(-1.0432214787105447 - 0.8148378434662445j, rel=1e-10)
    z = np.array([0.4 - 3j, 3.5 + 1j, -2.2 + 0.1j])
    assert np.max(np.abs(hp.damped(z) - hp.damped_quad(z))) < 1e-10


def test_symbol_psi_examples():
    z, w = 0.4 - 0.2j, -0.3 + 0.8j
    ps = symbol_psi(Symbol.gaussian(0.5), 1, laguerre_index=0)
    assert ps(z, w) == pytest.approx(complex(symbol_phi(Symbol.gaussian(0.5))(w)), rel=1e-12)
    assert ps(2.0, w) == ps(z, w)
    for n in (1, 2):
        pd = symbol_psi(Symbol.dirac(0), n)
        assert pd(z, w) == pytest.approx(math.exp(-0) * _lag(n, math.pi * abs(z) ** 2), rel=1e-12)
    pg = symbol_psi(Symbol.gaussian(0.5), 2)
    # frozen high-precision quadrature value
    assert pg(0.5, 0.5 - 0.5j) == pytest.approx(-0.36325603040226806 - 1.214974570400279j, rel=1e-10)
    quad = pg.damped_quadrature(0.5, 0.5 - 0.5j) * np.exp(np.pi * 0.25 / 2)
    assert quad == pytest.approx(pg(0.5, 0.5 - 0.5j), rel=1e-8)


def _lag(n, x):
    return {1: 1 - x, 2: 1 - 2 * x + x * x / 2}[n]


def test_parse_symbol(tmp_path, sgrid):
    assert parse_symbol("dirac:0.5") == Symbol.dirac(0.5)
    assert parse_symbol("gaussian:2").param == 2.0
    assert parse_symbol("chirp:1").tag == "chirp"
    assert parse_symbol("hilbert").tag == "hilbert"
    from focklab.grids import write_signal_csv
    p = tmp_path / "u.csv"
    write_signal_csv(p, SampledSignal.from_function(lambda y: np.exp(-np.pi * y * y), sgrid))
    assert parse_symbol(f"file:{p}").tag == "sampled"
    with pytest.raises(ValueError):
        parse_symbol("laplace:1")


# --------------------------------------------------------------- operators

@pytest.mark.parametrize("k", [0, 1, 2])
def test_reproducing_identity(signal, ogrid, ops, k):
    F = poly_bargmann(signal([1.0, 0.5, 0.25j]), k, ogrid)
    assert relerr(apply_S(F, ops(Symbol.dirac(0), k)).values, F.values) < 1e-6
    if k:
        # the shifted Laguerre index does not reproduce
        assert relerr(ops(Symbol.dirac(0), k, k - 1).apply(F).values, F.values) > 0.1


def test_wrong_space(signal, ogrid, ops):
    F = poly_bargmann(signal([1.0]), 1, ogrid)
    with pytest.raises(WrongSpaceError):
        apply_S(F, ops(Symbol.gaussian(0.5), 0))


@pytest.mark.parametrize("u", [Symbol.gaussian(0.5), Symbol.chirp(1.0)])
@pytest.mark.parametrize("k", [0, 1, 2])
def test_three_forms(signal, sgrid, ogrid, ops, u, k):
    for n in (0, 1):
        F = probe(signal, k, n, ogrid)
        s1 = apply_S(F, ops(u, k)).values
        s2 = apply_S_translation_form(F, u).values
        s3 = poly_bargmann(convolve_symbol(u, poly_bargmann_adjoint(F, sgrid)), k, ogrid).values
        assert relerr(s1, s3) < 1e-4
        assert relerr(s2, s3) < 1e-4


def test_hilbert_operator_is_BHBstar(signal, sgrid, ogrid, ops):
    u = Symbol.hilbert()
    F = bargmann(signal([1.0, 0, 0, 0.5j]), ogrid)
    ref = bargmann(convolve_symbol(u, bargmann_adjoint(F, sgrid)), ogrid).values
    assert relerr(ops(u, 0).apply(F).values, ref) < 1e-6
    with pytest.raises(UnsupportedPathError):
        apply_S_translation_form(F, u)


def test_translation_form_dirac(signal, ogrid):
    F = probe(signal, 0, 1, ogrid)
    assert np.array_equal(apply_S_translation_form(F, Symbol.dirac(0)).values, F.values)
    G = apply_S_translation_form(F, Symbol.dirac(0.5)).values
    assert np.array_equal(np.abs(G), np.abs(fock_shift(F, 0.5).values))


def _shift_residual(apply, F, y):
    SF = apply(F)
    x, _ = F.grid.mesh()
    mask = np.abs(x - y) <= F.grid.radius + 1e-9
    d = (fock_shift(SF, y).values - apply(fock_shift(F, y)).values)[mask]
    return np.linalg.norm(d) / np.linalg.norm(SF.values)


@pytest.mark.parametrize("u,k,n", [(Symbol.gaussian(0.5), 0, 0), (Symbol.chirp(1.0), 0, 1),
                                   (Symbol.gaussian(0.5), 2, 0), (Symbol.hilbert(), 0, 0)])
def test_translation_invariance(signal, ogrid, ops, u, k, n):
    F = probe(signal, k, n, ogrid)
    for y in (-1.5, 0.4, 1.5):
        assert _shift_residual(ops(u, k).apply, F, y) < 1e-4


def test_non_invariant_contrast(signal, ogrid):
    F = probe(signal, 0, 0, ogrid)
    z = ogrid.z()
    assert _shift_residual(lambda G: G.with_values(z * G.values), F, 1.0) >= 0.1


def test_adjoint_pairing(signal, ogrid, ops):
    from focklab.transforms import fock_inner
    op = ops(Symbol.chirp(1.0), 1)
    F = probe(signal, 1, 0, ogrid)
    G = probe(signal, 1, 2, ogrid)
    assert abs(fock_inner(op.apply(F), G) - fock_inner(F, op.adjoint(G))) < 1e-13


def test_kernel_backends_agree():
    rng = np.random.default_rng(1)
    n = 9
    table = rng.standard_normal((2 * n - 1, n, n)) + 1j * rng.standard_normal((2 * n - 1, n, n))
    h = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    for adj, (a, b) in ((False, (_kernels._apply_table_nb, _kernels._apply_table_np)),
                        (True, (_kernels._apply_table_adj_nb, _kernels._apply_table_adj_np))):
        assert np.max(np.abs(a(table, h) - b(table, h))) < 1e-12


def test_truncation_radius(ogrid, ops):
    op = ops(Symbol.gaussian(0.5), 0)
    assert op.r_cut is not None and 3 < op.r_cut < 2 * ogrid.radius
    assert ops(Symbol.hilbert(), 0).r_cut is None
