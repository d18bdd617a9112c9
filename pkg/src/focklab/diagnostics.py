"""Modulation and Fock norms, Gabor matrices, envelopes, Berezin diagonals
and operator-norm lower bounds."""
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from .errors import RangeError
from .grids import ComplexGrid, RealGrid, integrate_complex_array
from .operators import FockOperator, fock_shift
from .special import laguerre_eval
from .symbols import PhiSymbol, PsiSymbol
from .transforms import WeightedFockFunction, WindowSpec, hermite_signal, poly_bargmann, stft

TRANSFORM_GRID = ComplexGrid(5.0, 0.05)
PAIR_MARGIN = 2.0
PLATEAU_THRESHOLD = 0.01
DIVERGENCE_GROWTH = 1.5
PROBE_SEED = 0x5EED
POWER_STEPS = 30


# ------------------------------------------------------------------ norms

def _check_p(p):
    p = float(p)
    if not (math.isinf(p) or 1.0 <= p <= 64.0):
        raise ValueError(f"p must lie in [1, 64] or be inf, got {p}")
    return p


def lp_norm(values, step, p):
    """(sum |v|^p h^2)^(1/p) with deterministic summation; sup for p = inf."""
    p = _check_p(p)
    a = np.abs(np.asarray(values))
    if math.isinf(p):
        return float(a.max()) if a.size else 0.0
    peak = float(a.max()) if a.size else 0.0
    if peak == 0.0:
        return 0.0
    s = integrate_complex_array((a / peak) ** p, step).real
    return peak * s ** (1.0 / p)


def modulation_norm(f, p, grid=None, window=0):
    """||V_{phi_window} f||_{L^p} over the phase grid."""
    grid = grid or TRANSFORM_GRID
    v = stft(f, WindowSpec(window), grid)
    return lp_norm(v.values, grid.step, p)


def fock_norm(F, p):
    """(int |F~|^p dz)^(1/p)."""
    return lp_norm(F.values, F.grid.step, p)


# ----------------------------------------------------------- gabor matrix

@dataclass(frozen=True)
class GaborMatrixSample:
    pairs: tuple
    values: np.ndarray
    order: int


def normalized_kernel(z, grid, order=0, laguerre_index=None):
    """Weighted normalized reproducing kernel of the order-k space at z."""
    n = order if laguerre_index is None else laguerre_index
    w = grid.z()
    z = complex(z)
    lag = laguerre_eval(n, np.pi * np.abs(w - z) ** 2)
    vals = lag * np.exp(np.pi * w * np.conj(z) - np.pi * abs(z) ** 2 / 2 - np.pi * np.abs(w) ** 2 / 2)
    return WeightedFockFunction(grid, vals, order)


def _laguerre_index(op):
    sym = op.symbol
    return sym.laguerre_index if isinstance(sym, PsiSymbol) else 0


def gabor_matrix(op, k, pairs):
    """<S k_z, k_w> for (z, w) in ``pairs`` (normalized order-k kernels)."""
    grid = op.grid
    lim = grid.radius - PAIR_MARGIN
    n = _laguerre_index(op)
    vals = []
    for z, w in pairs:
        for v in (z, w):
            if abs(complex(v).real) > lim or abs(complex(v).imag) > lim:
                raise RangeError(f"pair point {v} outside the grid margin {lim}")
        kz = normalized_kernel(z, grid, k, n)
        kw = normalized_kernel(w, grid, k, n)
        skz = op.apply(kz)
        vals.append(complex(integrate_complex_array(skz.values * np.conj(kw.values), grid.step)))
    return GaborMatrixSample(tuple((complex(z), complex(w)) for z, w in pairs), np.array(vals), k)


def gabor_prediction(symbol, z, w, form="derived"):
    """Closed-form <S k_z, k_w>.

    ``derived``: exp(-pi(|z|^2+|w|^2)/2 + pi w zbar) * psi(w - z, zbar - w),
    which reduces to phi(zbar - w) in the analytic case.  ``proof`` uses the
    alternative argument pair psi(z - w, z - wbar).
    """
    z, w = complex(z), complex(w)
    pref = np.exp(-np.pi * (abs(z) ** 2 + abs(w) ** 2) / 2 + np.pi * w * np.conj(z))
    if isinstance(symbol, PhiSymbol):
        arg = np.conj(z) - w if form == "derived" else z - np.conj(w)
        return complex(pref * symbol(arg))
    if form == "derived":
        return complex(pref * symbol(w - z, np.conj(z) - w))
    return complex(pref * symbol(z - w, z - np.conj(w)))


# --------------------------------------------------------------- envelope

@dataclass(frozen=True)
class EnvelopeProfile:
    offsets: np.ndarray
    E: np.ndarray
    radii: tuple
    l1_partial_sums: tuple
    step: float
    sup_range: float
    analytic_sup_gap: Optional[float] = None
    variants: dict = field(default_factory=dict)

    def relative_change(self):
        """Relative change of the partial sum between the two largest radii."""
        s = self.l1_partial_sums
        if len(s) < 2 or s[-2] == 0.0:
            return float("inf")
        return (s[-1] - s[-2]) / s[-2]

    def plateau(self, threshold=PLATEAU_THRESHOLD):
        return self.relative_change() < threshold


def _offset_lattice(step, rmax):
    m = int(round(rmax / step))
    ax = np.arange(-m, m + 1) * step
    p, q = np.meshgrid(ax, ax, indexing="ij")
    return p + 1j * q


def _sup_over_s(fn, zeta, s):
    out = np.zeros(zeta.shape)
    for sv in s:
        np.maximum(out, np.abs(fn(zeta, sv)), out=out)
    return out


def _analytic_sup(closed_form, zeta):
    """Exact log sup over s in R of |c exp(g x^2 + d x)|, x = zetabar - 2is, minus
    the envelope damping; inf where unbounded."""
    c, g, d = closed_form
    a = zeta.real
    # x = a - i v with v = q + 2s ranging over R
    rg, ig = g.real, g.imag
    rd, idd = d.real, d.imag
    # Re(g x^2 + d x) = rg (a^2 - v^2) + 2 a v ig + rd a + idd v
    if rg > 0:
        v = (2 * a * ig + idd) / (2 * rg)
        val = rg * (a * a - v * v) + 2 * a * v * ig + rd * a + idd * v
    elif rg == 0 and np.all(2 * a * ig + idd == 0):
        val = rd * a
    else:
        return np.full(zeta.shape, np.inf)
    return math.log(abs(c)) + val - np.pi * np.abs(zeta) ** 2 / 2


def envelope_profile(symbol, k=0, radii=(3, 4, 5, 6), sup_range=6.0, s_step=0.05,
                     offset_step=0.1, variants=True):
    """Envelope E(zeta) on a lattice of offsets and its l1 partial sums.

    Analytic: E = exp(-pi|zeta|^2/2) sup_s |phi(zetabar - 2is)|.
    Polyanalytic: E = exp(-pi|zeta|^2/2) sup_s |psi(-zeta, zetabar - 2is)|;
    the displayed and proof variants are sampled as ``variants``.
    """
    if sup_range < 4:
        raise ValueError("sup range must be at least 4")
    zeta = _offset_lattice(offset_step, max(radii))
    m = int(round(sup_range / s_step))
    s = np.arange(-m, m + 1) * s_step
    damp_q = np.exp(-np.pi * zeta.imag ** 2 / 2)
    var = {}
    gap = None
    if isinstance(symbol, PhiSymbol):
        E = _sup_over_s(lambda zt, sv: symbol.damped(np.conj(zt) - 2j * sv), zeta, s) * damp_q
        if symbol.closed_form is not None:
            exact = _analytic_sup(symbol.closed_form, zeta)
            finite = np.isfinite(exact) & (np.abs(zeta) <= max(radii) + 1e-9)
            if np.any(finite):
                gap = float(np.max(np.abs(np.exp(exact[finite]) - E[finite])))
            else:
                gap = float("inf")
    else:
        E = _sup_over_s(lambda zt, sv: symbol.damped(-zt, np.conj(zt) - 2j * sv), zeta, s) * damp_q
        if variants:
            disp = _sup_over_s(lambda zt, sv: symbol.damped(zt, np.conj(zt) - 2j * sv), zeta, s) * damp_q
            proof = _sup_over_s(lambda zt, sv: symbol.damped(zt, zt + 2j * sv), zeta, s) * damp_q
            var = {"displayed": _partial_sums(disp, zeta, radii, offset_step),
                   "proof": _partial_sums(proof, zeta, radii, offset_step)}
    sums = _partial_sums(E, zeta, radii, offset_step)
    return EnvelopeProfile(zeta, E, tuple(radii), sums, offset_step, sup_range, gap, var)


def _partial_sums(E, zeta, radii, step):
    r = np.abs(zeta)
    out = []
    for rad in radii:
        mask = r <= rad + 1e-9
        out.append(float(integrate_complex_array(np.where(mask, E, 0.0), step).real))
    return tuple(out)


# --------------------------------------------------------------- berezin

def berezin_diagonal(phi, omega_range=(-4.0, 4.0), step=0.01):
    """sup over sampled omega of |phi(-2 i omega)|."""
    lo, hi = omega_range
    m0, m1 = int(math.floor(lo / step + 1e-9)), int(math.ceil(hi / step - 1e-9))
    om = np.arange(m0, m1 + 1) * step
    return float(np.max(np.abs(phi(-2j * om))))


def berezin_profile(phi, omega_max=(2.0, 3.0, 4.0), step=0.01):
    return tuple(berezin_diagonal(phi, (-w, w), step) for w in omega_max)


# ---------------------------------------------------------- lower bounds

STENCIL = tuple(complex(x, w) for x in (-1, 0, 1) for w in (-1, 0, 1))


def probe_family(k, grid, families=("hermite", "stencil", "random"), seed=PROBE_SEED,
                 signal_grid=None):
    """Probe functions for the lower bound, in a fixed order."""
    signal_grid = signal_grid or RealGrid()
    probes = []
    if "hermite" in families:
        for n in range(5):
            c = np.zeros(n + 1)
            c[n] = 1.0
            probes.append(poly_bargmann(hermite_signal(c, signal_grid), k, grid))
    if "stencil" in families:
        base = poly_bargmann(hermite_signal([1.0], signal_grid), k, grid)
        for z in STENCIL:
            probes.append(fock_shift(base, z))
    if "random" in families:
        rng = np.random.default_rng(seed)
        for _ in range(8):
            c = rng.standard_normal(7) + 1j * rng.standard_normal(7)
            probes.append(poly_bargmann(hermite_signal(c, signal_grid), k, grid))
    return probes


def operator_norm_lower_bound(op, p, k=None, families=("hermite", "stencil", "random"),
                              power_steps=POWER_STEPS, seed=PROBE_SEED, probes=None):
    """max ||S F||_p / ||F||_p over the probe family (a lower bound)."""
    k = op.order if k is None else k
    probes = probes if probes is not None else probe_family(k, op.grid, families, seed)
    best, best_F = 0.0, None
    for F in probes:
        den = fock_norm(F, p)
        if den == 0.0:
            continue
        r = fock_norm(op.apply(F), p) / den
        if r > best:
            best, best_F = r, F
    if _check_p(p) == 2.0 and best_F is not None and power_steps > 0:
        F = best_F
        for _ in range(power_steps):
            G = op.adjoint(op.apply(F))
            nrm = fock_norm(G, 2)
            if nrm == 0.0:
                break
            F = G.with_values(G.values / nrm)
            r = fock_norm(op.apply(F), 2) / fock_norm(F, 2)
            best = max(best, r)
    return best


# ---------------------------------------------------------------- verdict

@dataclass(frozen=True)
class BoundednessVerdict:
    symbol: str
    lower_bounds: dict
    envelope_partial_sums: tuple
    envelope_relative_change: float
    berezin_diagonal_sup: tuple
    verdict: str


def boundedness_verdict(label, lower_bounds, envelope, berezin,
                        plateau=PLATEAU_THRESHOLD, growth=DIVERGENCE_GROWTH):
    """Classify the evidence.  ``berezin`` is the sup over growing ranges."""
    change = envelope.relative_change()
    b = [x for x in berezin]
    diverging = len(b) >= 2 and (not np.isfinite(b[-1]) or b[-1] > growth * b[-2])
    if diverging:
        verdict = "necessary-condition-violated"
    elif change < plateau:
        verdict = "sufficient-condition-met"
    else:
        verdict = "inconclusive"
    return BoundednessVerdict(label, dict(lower_bounds), envelope.l1_partial_sums,
                              change, tuple(b), verdict)
