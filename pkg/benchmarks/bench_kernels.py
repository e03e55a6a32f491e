"""Time the compiled refinement kernel against its pure-Python mirror.

Both backends receive bit-identical decomposition starts and a fixed sweep
budget, so the comparison isolates kernel throughput. Run from the repo
root after an editable install:

    python benchmarks/bench_kernels.py [--sweeps N] [--repeats R]
"""

import argparse
import math
import time

import numpy as np

from cohroof import spectral_ensemble, validate_density
from cohroof._kernels import _pyref
from cohroof.convexroof import random_isometry

try:
    from cohroof._kernels import _core
except ImportError:
    _core = None


def wishart(n, rng):
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    m = g @ g.conj().T
    m = (m + m.conj().T) / 2.0
    return validate_density(m / m.trace().real)


def start_rows(rho, rng):
    base = spectral_ensemble(rho)
    b = np.array([math.sqrt(p) * psi.amplitudes for p, psi in base.members])
    rank = len(base.members)
    u = random_isometry(rank, rank * rank, rng)
    return np.ascontiguousarray(u.entries.T @ b)


def run(backend, rows, kind, d_a, d_b, sweeps, repeats):
    trace = np.empty(sweeps)
    best = math.inf
    total = None
    for _ in range(repeats):
        w = rows.copy()
        t0 = time.perf_counter()
        total, used, _, _, _ = backend.refine(
            w, kind, d_a, d_b, sweeps, 0.0, -math.inf, 1.0, trace)
        best = min(best, time.perf_counter() - t0)
    return best, total, used


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sweeps", type=int, default=40)
    ap.add_argument("--repeats", type=int, default=3)
    args = ap.parse_args()

    if _core is None:
        print("compiled kernel not built; timing the pure backend only")

    rng = np.random.default_rng(2024)
    jobs = []
    for n in (3, 4, 5, 6):
        jobs.append(("l1 descent, dim %d, m=%d" % (n, n * n),
                     start_rows(wishart(n, rng), rng), 0, 0, 0))
    for da in (2, 3):
        lifted = np.zeros((da * da, da * da), dtype=complex)
        small = wishart(da, rng)
        for i in range(da):
            for j in range(da):
                lifted[i * da + i, j * da + j] = small.entries[i, j]
        jobs.append(("negativity descent, %dx%d lift, m=%d" % (da, da, (da * da)),
                     start_rows(validate_density(lifted), rng), 1, da, da))

    header = "%-36s %12s %12s %8s" % ("workload", "compiled", "python", "speedup")
    print(header)
    print("-" * len(header))
    for name, rows, kind, d_a, d_b in jobs:
        py_t, py_total, _ = run(_pyref, rows, kind, d_a, d_b,
                                args.sweeps, args.repeats)
        if _core is None:
            print("%-36s %12s %11.4fs %8s" % (name, "-", py_t, "-"))
            continue
        c_t, c_total, _ = run(_core, rows, kind, d_a, d_b,
                              args.sweeps, args.repeats)
        drift = abs(c_total - py_total)
        print("%-36s %11.4fs %11.4fs %7.1fx   (objective drift %.1e)"
              % (name, c_t, py_t, py_t / c_t, drift))


if __name__ == "__main__":
    main()
