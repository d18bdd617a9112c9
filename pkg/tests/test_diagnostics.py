import math

import numpy as np
import pytest

from focklab.diagnostics import (berezin_diagonal, boundedness_verdict, envelope_profile, fock_norm,
                                 gabor_matrix, gabor_prediction, modulation_norm,
                                 operator_norm_lower_bound, probe_family)
from focklab.errors import RangeError
from focklab.operators import FockOperator, tf_shift
from focklab.symbols import Symbol, phi_for, symbol_phi, symbol_psi
from focklab.transforms import poly_bargmann


@pytest.fixture(scope="module")
def probes0(ogrid):
    return probe_family(0, ogrid)


@pytest.mark.parametrize("p", [1, 1.5, 2, 4])
def test_modulation_norm_gaussian(signal, tgrid, p):
    assert modulation_norm(signal([1.0]), p, tgrid) == pytest.approx((2 / p) ** (1 / p), abs=1e-7)


def test_modulation_l2_and_shift(signal, tgrid):
    rng = np.random.default_rng(5)
    for _ in range(3):
        f = signal(rng.standard_normal(7) + 1j * rng.standard_normal(7))
        assert abs(modulation_norm(f, 2, tgrid) - f.norm()) < 1e-7
        g = tf_shift(f, 0.5, -0.25)
        for p in (1, 2, 4, math.inf):
            assert abs(modulation_norm(g, p, tgrid) - modulation_norm(f, p, tgrid)) < 1e-6


def test_p_range(signal, tgrid):
    with pytest.raises(ValueError):
        modulation_norm(signal([1.0]), 0.5, tgrid)
    assert modulation_norm(signal([1.0]), math.inf, tgrid) == pytest.approx(1.0, abs=1e-12)


def test_fock_norm_examples(signal, tgrid):
    F0 = poly_bargmann(signal([1.0]), 0, tgrid)
    for p in (1, 1.5, 2, 4):
        assert fock_norm(F0, p) == pytest.approx((2 / p) ** (1 / p), abs=1e-7)
    assert fock_norm(poly_bargmann(signal([1.0]), 1, tgrid), 2) == pytest.approx(1, abs=1e-6)
    assert fock_norm(F0.with_values(np.zeros_like(F0.values)), 3) == 0
    f = signal([0.3, 0.5j, 0, 0.4])
    for k in (1, 2):
        for p in (1, 1.5, 2, 4):
            assert abs(fock_norm(poly_bargmann(f, k, tgrid), p) - modulation_norm(f, p, tgrid, window=k)) < 1e-6


def test_gabor_identity_and_formula(ogrid):
    ident = FockOperator.from_symbol(Symbol.dirac(0), 0, ogrid)
    g = gabor_matrix(ident, 0, [(0.3 + 0.2j, 0.3 + 0.2j)])
    assert g.values[0] == pytest.approx(1, abs=1e-10)
    rng = np.random.default_rng(2)
    pairs = [(complex(*rng.uniform(-1.5, 1.5, 2)), complex(*rng.uniform(-1.5, 1.5, 2))) for _ in range(6)]
    for u, k in ((Symbol.gaussian(0.5), 0), (Symbol.chirp(1.0), 0), (Symbol.gaussian(0.5), 1),
                 (Symbol.chirp(1.0), 2)):
        op = FockOperator.from_symbol(u, k, ogrid)
        g = gabor_matrix(op, k, pairs)
        pred = np.array([gabor_prediction(op.symbol, z, w) for z, w in pairs])
        assert np.max(np.abs(g.values - pred)) < 1e-5
        if k == 0:
            mod = [math.exp(-math.pi * abs(z - w) ** 2 / 2) * abs(op.symbol(np.conj(z) - w)) for z, w in pairs]
            assert np.max(np.abs(np.abs(g.values) - mod)) < 1e-6
    with pytest.raises(RangeError):
        gabor_matrix(ident, 0, [(3.0, 0)])


def test_envelope_identity():
    env = envelope_profile(symbol_phi(Symbol.dirac(0)), 0)
    assert env.E.min() >= 0
    assert env.l1_partial_sums[-1] == pytest.approx(2, abs=1e-6)
    assert np.all(np.diff(env.l1_partial_sums) >= 0)
    with pytest.raises(ValueError):
        envelope_profile(symbol_phi(Symbol.dirac(0)), 0, sup_range=3)


def test_envelope_analytic_sup_gaussian():
    env = envelope_profile(symbol_phi(Symbol.gaussian(0.5)), 0)
    assert env.analytic_sup_gap < 1e-6


def test_envelope_trends():
    h = envelope_profile(phi_for(Symbol.hilbert()), 0)
    assert h.relative_change() > 0.01
    c = envelope_profile(symbol_phi(Symbol.chirp(1.0)), 0)
    # the chirp envelope is flat along Re(zeta): its sums grow linearly
    sums = np.array(c.l1_partial_sums)
    assert np.all(np.diff(sums) > 0)
    p = envelope_profile(symbol_psi(Symbol.gaussian(0.5), 1), 1)
    assert set(p.variants) == {"displayed", "proof"}


def test_berezin_examples():
    assert berezin_diagonal(symbol_phi(Symbol.dirac(0))) == pytest.approx(1)
    assert berezin_diagonal(symbol_phi(Symbol.gaussian(0.5))) == pytest.approx(1)
    ph = symbol_phi(Symbol.dirac(0.7))
    om = np.linspace(-3, 3, 31)
    assert np.allclose(np.abs(ph(-2j * om)), math.exp(-math.pi * 0.49 / 2), rtol=1e-12)


def test_lower_bound_identity_and_shift(ogrid, probes0):
    ident = FockOperator.from_symbol(Symbol.dirac(0), 0, ogrid)
    for p in (1, 2, 4):
        assert operator_norm_lower_bound(ident, p, probes=probes0, power_steps=0) == pytest.approx(1, abs=1e-6)
    shift = FockOperator.from_symbol(Symbol.dirac(0.5), 0, ogrid)
    assert operator_norm_lower_bound(shift, 2, probes=probes0, power_steps=3) == pytest.approx(1, abs=1e-4)


def test_lower_bound_nested_families(ogrid):
    op = FockOperator.from_symbol(Symbol.chirp(1.0), 0, ogrid)
    fams = [("hermite",), ("hermite", "stencil"), ("hermite", "stencil", "random")]
    vals = [operator_norm_lower_bound(op, 1.5, families=f, power_steps=0) for f in fams]
    assert vals[0] <= vals[1] <= vals[2]


def test_verdicts():
    env = envelope_profile(symbol_phi(Symbol.gaussian(0.5)), 0)
    v = boundedness_verdict("g", {2.0: 1.0}, env, (1.0, 1.0))
    assert v.verdict == "sufficient-condition-met"
    v = boundedness_verdict("g", {2.0: 1.0}, env, (1.0, 10.0))
    assert v.verdict == "necessary-condition-violated"
    env = envelope_profile(phi_for(Symbol.hilbert()), 0)
    assert boundedness_verdict("h", {}, env, (1.0, 1.0)).verdict == "inconclusive"
