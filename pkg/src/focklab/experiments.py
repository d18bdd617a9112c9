"""The Hilbert, chirp and identity experiments."""
import csv
import math
import os

import numpy as np

from .diagnostics import (berezin_profile, boundedness_verdict, envelope_profile,
                          operator_norm_lower_bound, probe_family)
from .grids import ComplexGrid, RealGrid
from .operators import FockOperator, convolve_symbol
from .special import antideriv_A
from .symbols import MultiplierPhi, Symbol, hilbert_multiplier, phi_for
from .transforms import bargmann, bargmann_adjoint, hermite_signal, poly_bargmann

IDENTITY_COEFFS = (1.0, 0.5, 0.25j)


def _disk_samples(radius=2.0, step=0.1, skip_origin=False):
    m = int(round(radius / step))
    ax = np.arange(-m, m + 1) * step
    z = (ax[:, None] + 1j * ax[None, :]).ravel()
    z = z[np.abs(z) <= radius + 1e-12]
    if skip_origin:
        z = z[np.abs(z) > 0]
    return z


def fit_constant(target, model):
    """Least-squares c with target ~ c * model, and the relative max residual."""
    c = np.vdot(model, target) / np.vdot(model, model)
    res = np.max(np.abs(target - c * model)) / np.max(np.abs(target))
    return complex(c), float(res)


def _write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow(["%.17g" % v for v in r])


def _operator_grid(cfg):
    return ComplexGrid(cfg.operator_radius, cfg.operator_step)


def _signal_grid(cfg):
    return RealGrid(cfg.signal_half_width, cfg.signal_step)


def experiment_identity(cfg):
    """u = dirac(0): the induced S against both Laguerre index candidates."""
    grid = _operator_grid(cfg)
    sg = _signal_grid(cfg)
    f = hermite_signal(IDENTITY_COEFFS, sg)
    out = {"orders": {}}
    for k in cfg.orders:
        F = poly_bargmann(f, k, grid)
        nrm = np.linalg.norm(F.values)
        cands = [0] if k == 0 else [k - 1, k]
        res = {}
        for idx in cands:
            op = FockOperator.from_symbol(Symbol.dirac(0.0), k, grid, laguerre_index=idx)
            res[idx] = float(np.linalg.norm(op.apply(F).values - F.values) / nrm)
        selected = min(cands, key=lambda i: (res[i], i))
        rejected = [i for i in cands if i != selected]
        zero = FockOperator.from_symbol(Symbol.dirac(0.0), k, grid).apply(F.with_values(np.zeros_like(F.values)))
        out["orders"][k] = {
            "residuals": res,
            "selected_index": selected,
            "selected_residual": res[selected],
            "rejected_index": rejected[0] if rejected else None,
            "rejected_residual": res[rejected[0]] if rejected else None,
            "zero_output_max": float(np.max(np.abs(zero.values))),
        }
    return out


def _lower_bounds(op, p_values, cfg):
    probes = probe_family(op.order, op.grid, seed=cfg.seed, signal_grid=_signal_grid(cfg))
    return {float(p): operator_norm_lower_bound(op, p, probes=probes, power_steps=cfg.power_steps)
            for p in p_values}


def _envelope(phi, cfg):
    return envelope_profile(phi, 0, radii=tuple(cfg.envelope_radii),
                            sup_range=cfg.envelope_sup_range, s_step=cfg.envelope_s_step,
                            offset_step=cfg.operator_step)


def experiment_hilbert(cfg, out_dir=None):
    grid = _operator_grid(cfg)
    sg = _signal_grid(cfg)
    u = Symbol.hilbert()
    phi = phi_for(u)
    # (i) kernel constant: phi against A evaluated at two scalings
    z = _disk_samples()
    quad = MultiplierPhi(hilbert_multiplier)
    target = quad.damped(z) * np.exp(np.pi * z.real ** 2 / 2)
    a_scaled = np.array([antideriv_A(math.sqrt(math.pi / 2) * v) for v in z])
    a_alt = np.array([antideriv_A(v / math.sqrt(2)) for v in z])
    const, res = fit_constant(target, a_scaled)
    const_p, res_p = fit_constant(target, a_alt)
    op = FockOperator.from_symbol(u, 0, grid)
    worst = 0.0
    for c in ((1.0,), (0.0, 1.0), (1.0, 0.0, 0.0, 0.5j)):
        F = bargmann(hermite_signal(c, sg), grid)
        ref = bargmann(convolve_symbol(u, bargmann_adjoint(F, sg)), grid).values
        worst = max(worst, float(np.linalg.norm(op.apply(F).values - ref) / np.linalg.norm(ref)))
    # (ii) lower bounds, (iii) envelope
    lbs = _lower_bounds(op, cfg.hilbert_p_values, cfg)
    env = _envelope(phi, cfg)
    ber = berezin_profile(phi)
    verdict = boundedness_verdict("hilbert", lbs, env, ber, cfg.plateau_threshold, cfg.divergence_growth)
    if out_dir is not None:
        _write_csv(os.path.join(out_dir, "hilbert.csv"), ["p", "lower_bound"], sorted(lbs.items()))
        _write_csv(os.path.join(out_dir, "hilbert_envelope.csv"), ["radius", "partial_sum"],
                   zip(env.radii, env.l1_partial_sums))
    return {
        "kernel_constant": const,
        "kernel_constant_residual": res,
        "alt_scaling_constant": const_p,
        "alt_scaling_residual": res_p,
        "operator_vs_BHBstar": worst,
        "lower_bounds": lbs,
        "envelope_radii": env.radii,
        "envelope_partial_sums": env.l1_partial_sums,
        "envelope_relative_change": env.relative_change(),
        "berezin_profile": ber,
        "verdict": verdict.verdict,
    }


def experiment_chirp(cfg, out_dir=None):
    grid = _operator_grid(cfg)
    u = Symbol.chirp(1.0)
    phi = phi_for(u)
    z = _disk_samples()
    closed = phi(z)
    quad = phi.quadrature(z)
    closed_res = float(np.max(np.abs(closed - quad)) / np.max(np.abs(closed)))
    op = FockOperator.from_symbol(u, 0, grid)
    lbs = _lower_bounds(op, list(cfg.chirp_p_values) + [math.inf], cfg)
    finite = [v for v in lbs.values()]
    spread = max(finite) / min(finite) - 1.0
    env = _envelope(phi, cfg)
    ber = berezin_profile(phi)
    verdict = boundedness_verdict(u.label, lbs, env, ber, cfg.plateau_threshold, cfg.divergence_growth)
    if out_dir is not None:
        _write_csv(os.path.join(out_dir, "chirp.csv"), ["p", "lower_bound"], sorted(lbs.items()))
        _write_csv(os.path.join(out_dir, "chirp_envelope.csv"), ["radius", "partial_sum"],
                   zip(env.radii, env.l1_partial_sums))
    return {
        "closed_form_vs_quadrature": closed_res,
        "lower_bounds": lbs,
        "lower_bound_spread": spread,
        "envelope_radii": env.radii,
        "envelope_partial_sums": env.l1_partial_sums,
        "envelope_relative_change": env.relative_change(),
        "envelope_analytic_sup_gap": env.analytic_sup_gap,
        "berezin_profile": ber,
        "verdict": verdict.verdict,
    }
