"""Time the exponent-lattice kernels: numba against the numpy fallback.

    python benchmarks/bench_kernels.py [--rows N] [--width W] [--repeat R]

Each backend runs in its own interpreter (THOMPOLY_KERNELS selects it), so a
backend's import and compile cost is reported separately from steady-state time.
"""

import argparse
import json
import os
import subprocess
import sys

WORKER = r"""
import json, sys, time
import numpy as np
from thompoly import kernels
rows, width, repeat = map(int, sys.argv[1:4])
rng = np.random.default_rng(0)
exps = rng.integers(0, 4, size=(rows, width)).astype(np.int64)
gens = rng.integers(0, 3, size=(max(rows // 8, 1), width)).astype(np.int64)
cluster = list(range(width // 2))
mono = np.ones(width, dtype=np.int64)
cases = {
    "divisible_by_any": lambda: kernels.divisible_by_any(gens, exps),
    "minimal_mask": lambda: kernels.minimal_mask(exps),
    "chart_map": lambda: kernels.chart_map(exps, 0, cluster),
    "monomial_chart_map": lambda: kernels.monomial_chart_map(exps, mono, cluster),
}
out = {"backend": kernels.BACKEND}
for name, fn in cases.items():
    t0 = time.perf_counter(); fn(); first = time.perf_counter() - t0
    t0 = time.perf_counter()
    for _ in range(repeat):
        fn()
    out[name] = {"first_s": first, "mean_s": (time.perf_counter() - t0) / repeat}
print(json.dumps(out))
"""


def run(backend, rows, width, repeat):
    env = dict(os.environ, THOMPOLY_KERNELS=backend)
    res = subprocess.run([sys.executable, "-c", WORKER, str(rows), str(width), str(repeat)],
                         env=env, capture_output=True, text=True, check=True)
    return json.loads(res.stdout)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--rows", type=int, default=2000)
    ap.add_argument("--width", type=int, default=15)
    ap.add_argument("--repeat", type=int, default=20)
    a = ap.parse_args()
    fast = run("numba", a.rows, a.width, a.repeat)
    ref = run("numpy", a.rows, a.width, a.repeat)
    print(f"rows={a.rows} width={a.width} repeat={a.repeat}  backends: {fast['backend']} vs {ref['backend']}")
    print(f"{'kernel':<20}{'numba first':>14}{'numba mean':>14}{'numpy mean':>14}{'speed-up':>10}")
    for name in ("divisible_by_any", "minimal_mask", "chart_map", "monomial_chart_map"):
        f, r = fast[name], ref[name]
        print(f"{name:<20}{f['first_s']:>14.4f}{f['mean_s']:>14.6f}{r['mean_s']:>14.6f}"
              f"{r['mean_s'] / f['mean_s']:>9.1f}x")


if __name__ == "__main__":
    main()
