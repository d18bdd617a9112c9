"""Command-line entry point ``focklab``."""
import argparse
import json
import math
import os
import sys
import time

import numpy as np

from . import __version__
from .diagnostics import (PLATEAU_THRESHOLD, berezin_profile, envelope_profile, gabor_matrix,
                          gabor_prediction, operator_norm_lower_bound)
from .errors import FocklabError
from .grids import (ComplexGrid, PhaseSpaceFunction, RealGrid, read_phase_csv, read_signal_csv,
                    write_phase_csv, write_signal_csv)
from .operators import FockOperator
from .suite import SUITES, SuiteConfig, SuiteInfrastructureError, _clean, run_verification_suite
from .symbols import parse_symbol, phi_for, symbol_psi
from .transforms import (WeightedFockFunction, WindowSpec, poly_bargmann, poly_bargmann_adjoint,
                         stft)


def _floats(text):
    return [math.inf if v.strip() in ("inf", "Inf") else float(v) for v in text.split(",") if v.strip()]


def _load_config(path):
    return SuiteConfig.from_json(path) if path else SuiteConfig()


# ---------------------------------------------------------------- commands

def cmd_transform(args):
    grid = ComplexGrid(args.radius, args.step)
    if args.kind == "inverse":
        p = read_phase_csv(args.input)
        F = WeightedFockFunction(p.grid, p.values, args.order)
        out = poly_bargmann_adjoint(F, RealGrid(args.half_width, args.time_step))
        write_signal_csv(args.out, out)
        return 0
    f = read_signal_csv(args.input)
    if args.kind == "stft":
        res = stft(f, WindowSpec(args.order), grid, method=args.method)
    else:
        order = 0 if args.kind == "bargmann" else args.order
        res = poly_bargmann(f, order, grid)
    write_phase_csv(args.out, res)
    return 0


def cmd_operator(args):
    u = parse_symbol(args.symbol)
    p = read_phase_csv(args.input)
    F = WeightedFockFunction(p.grid, p.values, args.order)
    op = FockOperator.from_symbol(u, args.order, p.grid, laguerre_index=args.laguerre_index)
    write_phase_csv(args.out, op.apply(F))
    return 0


def cmd_symbol(args):
    u = parse_symbol(args.symbol)
    grid = ComplexGrid(args.radius, args.step)
    z = grid.z()
    if args.kind == "phi":
        vals = phi_for(u)(z)
    else:
        vals = symbol_psi(u, args.order, args.laguerre_index)(complex(args.first), z)
    write_phase_csv(args.out, PhaseSpaceFunction(grid, vals))
    return 0


def _pairs(seed, count=20, radius=1.5):
    rng = np.random.default_rng(seed)
    return [(complex(*rng.uniform(-radius, radius, 2)), complex(*rng.uniform(-radius, radius, 2)))
            for _ in range(count)]


def cmd_diagnose(args):
    cfg = _load_config(args.config)
    u = parse_symbol(args.symbol)
    grid = ComplexGrid(cfg.operator_radius, cfg.operator_step)
    radii = tuple(_floats(args.radii))
    k = args.order
    results, verdict = {}, "inconclusive"
    if args.kind == "envelope":
        sym = phi_for(u) if k == 0 else symbol_psi(u, k)
        env = envelope_profile(sym, k, radii=radii, sup_range=cfg.envelope_sup_range,
                               s_step=cfg.envelope_s_step, offset_step=cfg.operator_step)
        change = env.relative_change()
        results["l1_partial_sums"] = {"values": dict(zip(map(str, radii), env.l1_partial_sums))}
        results["plateau"] = {"value": change, "tolerance": cfg.plateau_threshold,
                              "pass": bool(change < cfg.plateau_threshold)}
        if env.analytic_sup_gap is not None:
            results["analytic_sup_gap"] = {"value": env.analytic_sup_gap}
        for name, sums in env.variants.items():
            results[f"l1_partial_sums_{name}_form"] = {"values": dict(zip(map(str, radii), sums))}
        if change < cfg.plateau_threshold:
            verdict = "sufficient-condition-met"
    elif args.kind == "berezin":
        ranges = (2.0, 3.0, 4.0)
        prof = berezin_profile(phi_for(u), ranges)
        results["berezin_diagonal_sup"] = {"values": dict(zip(map(str, ranges), prof))}
        if not np.isfinite(prof[-1]) or prof[-1] > cfg.divergence_growth * prof[-2]:
            verdict = "necessary-condition-violated"
    elif args.kind == "gabor":
        op = FockOperator.from_symbol(u, k, grid)
        pairs = _pairs(cfg.seed)
        g = gabor_matrix(op, k, pairs)
        pred = np.array([gabor_prediction(op.symbol, z, w) for z, w in pairs])
        res = float(np.max(np.abs(g.values - pred)))
        tol = cfg.tolerances["gabor_analytic" if k == 0 else "gabor_polyanalytic"]
        results["gabor_identity"] = {"value": res, "tolerance": tol, "pass": bool(res < tol)}
    else:
        op = FockOperator.from_symbol(u, k, grid)
        lbs = {str(p): operator_norm_lower_bound(op, p, power_steps=cfg.power_steps, seed=cfg.seed)
               for p in _floats(args.p_values)}
        results["operator_norm_lower_bounds"] = {"values": lbs}
    doc = {
        "symbol": u.label,
        "order": k,
        "grid": {"R": grid.radius, "h": grid.step},
        "results": results,
        "verdict": verdict,
        "suite_parameters": {"plateau_threshold": cfg.plateau_threshold,
                             "divergence_growth": cfg.divergence_growth,
                             "envelope_sup_range": cfg.envelope_sup_range,
                             "envelope_s_step": cfg.envelope_s_step,
                             "seed": cfg.seed},
        "version": __version__,
    }
    with open(args.out, "w") as fh:
        fh.write(json.dumps(_clean(doc), indent=2) + "\n")
    return 0


def cmd_verify(args):
    try:
        cfg = _load_config(args.config)
        t0 = time.perf_counter()
        report = run_verification_suite(cfg, args.suite, workers=args.workers)
    except SuiteInfrastructureError as exc:
        print(f"infrastructure error in check {exc.check}: {exc}", file=sys.stderr)
        return 2
    out = args.out or cfg.report_path
    with open(out, "w") as fh:
        fh.write(report.to_json())
    for r in report.records:
        status = "PASS" if r.passed else "FAIL"
        print(f"{status} {r.name} measured={r.measured} tol={r.tolerance}"
              + (f" error={r.error}" if r.error else ""))
    print(f"{len(report.records)} records, {len(report.failed())} failed, "
          f"{time.perf_counter() - t0:.1f}s", file=sys.stderr)
    return 0 if report.overall_pass else 1


def cmd_experiment(args):
    from .experiments import experiment_chirp, experiment_hilbert, experiment_identity

    cfg = _load_config(args.config)
    os.makedirs(args.out_dir, exist_ok=True)
    if args.name == "hilbert":
        res = experiment_hilbert(cfg, args.out_dir)
    elif args.name == "chirp":
        res = experiment_chirp(cfg, args.out_dir)
    else:
        res = experiment_identity(cfg)
    path = os.path.join(args.out_dir, f"{args.name}_report.json")
    with open(path, "w") as fh:
        fh.write(json.dumps(_clean(res), indent=2) + "\n")
    print(json.dumps(_clean(res), indent=2))
    return 0


# ------------------------------------------------------------------ parser

def build_parser():
    ap = argparse.ArgumentParser(prog="focklab", description=__doc__)
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    t = sub.add_parser("transform", help="STFT, Bargmann transforms and inversion")
    t.add_argument("kind", choices=["stft", "bargmann", "poly-bargmann", "inverse"])
    t.add_argument("--input", required=True)
    t.add_argument("--order", type=int, default=0)
    t.add_argument("--radius", type=float, default=5.0)
    t.add_argument("--step", type=float, default=0.05)
    t.add_argument("--half-width", type=float, default=8.0)
    t.add_argument("--time-step", type=float, default=1.0 / 64)
    t.add_argument("--method", choices=["direct", "fft"], default="direct")
    t.add_argument("--out", required=True)
    t.set_defaults(func=cmd_transform)

    o = sub.add_parser("operator", help="apply a translation-invariant Fock operator")
    osub = o.add_subparsers(dest="action", required=True)
    oa = osub.add_parser("apply")
    oa.add_argument("--symbol", required=True)
    oa.add_argument("--order", type=int, default=0)
    oa.add_argument("--laguerre-index", type=int, default=None)
    oa.add_argument("--input", required=True)
    oa.add_argument("--out", required=True)
    oa.set_defaults(func=cmd_operator)

    s = sub.add_parser("symbol", help="tabulate phi or psi on a grid")
    s.add_argument("kind", choices=["phi", "psi"])
    s.add_argument("--symbol", required=True)
    s.add_argument("--order", type=int, default=1)
    s.add_argument("--laguerre-index", type=int, default=None)
    s.add_argument("--first", type=complex, default=0j, help="first argument of psi")
    s.add_argument("--radius", type=float, default=3.0)
    s.add_argument("--step", type=float, default=0.1)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_symbol)

    d = sub.add_parser("diagnose", help="envelope, Berezin, Gabor and norm diagnostics")
    d.add_argument("kind", choices=["envelope", "berezin", "gabor", "norms"])
    d.add_argument("--symbol", required=True)
    d.add_argument("--order", type=int, default=0)
    d.add_argument("--p-values", default="1,1.5,2,4")
    d.add_argument("--radii", default="3,4,5,6")
    d.add_argument("--config", default=None)
    d.add_argument("--out", required=True)
    d.set_defaults(func=cmd_diagnose)

    v = sub.add_parser("verify", help="run the verification suite")
    v.add_argument("--suite", choices=SUITES, default="all")
    v.add_argument("--config", default=None)
    v.add_argument("--workers", type=int, default=1)
    v.add_argument("--out", default=None)
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("experiment", help="Hilbert, chirp and identity experiments")
    e.add_argument("name", choices=["hilbert", "chirp", "identity"])
    e.add_argument("--config", default=None)
    e.add_argument("--out-dir", required=True)
    e.set_defaults(func=cmd_experiment)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (FocklabError, ValueError, OSError) as exc:
        print(f"focklab: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
