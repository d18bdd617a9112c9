"""Time the numba kernels against the numpy fallbacks.

The backend is fixed at import time, so each backend runs in its own
subprocess with FOCKLAB_BACKEND set.

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""
import argparse
import json
import os
import subprocess
import sys

WORKER = r"""
import json, sys, time
import numpy as np
from focklab import _kernels
from focklab._backend import BACKEND

repeat = int(sys.argv[1])
rng = np.random.default_rng(0)
out = {"backend": BACKEND}

def best(fn):
    fn()  # warm-up, includes jit compile
    ts = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        ts.append(time.perf_counter() - t0)
    return min(ts)

for n in (41, 81):
    table = rng.standard_normal((2 * n - 1, n, n)) + 1j * rng.standard_normal((2 * n - 1, n, n))
    h = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    out[f"apply_table n={n}"] = best(lambda: _kernels.apply_table(table, h))
    out[f"apply_table_adj n={n}"] = best(lambda: _kernels.apply_table(table, h, adjoint=True))
for m in (201 ** 2, 1025 * 64):
    x = rng.standard_normal(m)
    out[f"tiled_sum m={m}"] = best(lambda: _kernels.tiled_sum(x))
x = np.linspace(0, 20, 200_000)
out["laguerre k=2 m=200000"] = best(lambda: _kernels.laguerre_array(2, x))
print(json.dumps(out))
"""


def run(backend, repeat):
    env = dict(os.environ, FOCKLAB_BACKEND=backend)
    res = subprocess.run([sys.executable, "-c", WORKER, str(repeat)], env=env,
                         capture_output=True, text=True, check=True)
    return json.loads(res.stdout)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    nb = run("numba", args.repeat)
    npy = run("numpy", args.repeat)
    if nb.pop("backend") != "numba":
        print("numba unavailable, both columns use numpy", file=sys.stderr)
    npy.pop("backend")
    print(f"{'kernel':<26}{'numba [ms]':>12}{'numpy [ms]':>12}{'speedup':>10}")
    for key in nb:
        a, b = nb[key] * 1e3, npy[key] * 1e3
        print(f"{key:<26}{a:>12.3f}{b:>12.3f}{b / a:>9.1f}x")


if __name__ == "__main__":
    main()
