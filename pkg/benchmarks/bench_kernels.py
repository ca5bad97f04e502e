"""Timing comparison of the compiled and pure-NumPy kernel backends.

Imports both implementations directly (no environment games) and runs them
on identical inputs, reporting wall time, speedup and the largest
numerical difference.  The compiled section is skipped with a note when
the extension is not built.

    python benchmarks/bench_kernels.py --nodes 513 --batch 64 --repeat 5
"""

import argparse
import math
import time

import numpy as np

from halfinv import _kernels_py as kpy

try:
    from halfinv import _kernels as kc
except ImportError:
    kc = None


def _time(fn, *args, repeat):
    best = math.inf
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def _report(name, tpy, tc, diff):
    if tc is None:
        print("%-16s python %8.3f ms   (compiled: not built)" % (name, 1e3 * tpy))
    else:
        print("%-16s python %8.3f ms   compiled %8.3f ms   speedup %5.1fx"
              "   max|diff| %.2e" % (name, 1e3 * tpy, 1e3 * tc, tpy / tc, diff))


def bench_shoot(n, batch, repeat):
    rng = np.random.RandomState(0)
    m = 2 * n - 1
    xh = np.linspace(0.0, 1.0, m)
    sig = 0.4 * np.cos(2 * np.pi * xh) + rng.uniform(-0.2, 0.2, m)
    z = np.linspace(-2.0, (math.pi * batch) ** 2, batch)
    h = 1.0 / (n - 1)
    for name in ("shoot_classical", "shoot_rotating"):
        tpy, (up, vp) = _time(getattr(kpy, name), sig, z, h, repeat=repeat)
        if kc is None:
            _report(name, tpy, None, 0.0)
            continue
        tc, (uc, vc) = _time(getattr(kc, name), sig, z, h, repeat=repeat)
        diff = max(np.max(np.abs(up - uc)), np.max(np.abs(vp - vc)))
        _report(name, tpy, tc, diff)


def bench_goursat(n, repeat):
    rng = np.random.RandomState(1)
    m = 2 * n - 1
    h = 0.5 / (n - 1)
    qhalf = rng.uniform(-2.0, 2.0, m)
    sig = np.concatenate(([0.0], np.cumsum(0.25 * h * (qhalf[1:] + qhalf[:-1]))))
    forcing = np.tril(-0.5 * (sig[:, None] + sig[None, :]))
    idx = np.subtract.outer(np.arange(m), np.arange(m))
    qmat = np.where(idx >= 0, qhalf[np.clip(idx, 0, m - 1)], 0.0)

    tpy, ap = _time(kpy.goursat_sweep, forcing, qmat, forcing, h, repeat=repeat)
    if kc is None:
        _report("goursat_sweep", tpy, None, 0.0)
        return
    tc, ac = _time(kc.goursat_sweep, forcing, qmat, forcing, h, repeat=repeat)
    _report("goursat_sweep", tpy, tc, float(np.max(np.abs(ap - ac))))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--nodes", type=int, default=513,
                    help="grid nodes for the shooters (default 513)")
    ap.add_argument("--batch", type=int, default=64,
                    help="number of z values per shoot call (default 64)")
    ap.add_argument("--goursat-nodes", type=int, default=257,
                    help="half-interval nodes for the sweep (default 257)")
    ap.add_argument("--repeat", type=int, default=5,
                    help="timing repetitions, best is reported (default 5)")
    args = ap.parse_args()

    print("nodes=%d batch=%d goursat_nodes=%d repeat=%d"
          % (args.nodes, args.batch, args.goursat_nodes, args.repeat))
    bench_shoot(args.nodes, args.batch, args.repeat)
    bench_goursat(args.goursat_nodes, args.repeat)


if __name__ == "__main__":
    main()
