"""Time the compiled kernels against the pure-Python fallback.

Usage::

    python benchmarks/bench_kernels.py [--repeat 5] [--scale 1.0]

Every kernel is run on identical inputs under both backends; the table lists
the best-of-``repeat`` wall time per call and the speed-up. Outputs are also
cross-checked so a benchmark run doubles as a smoke test of bit-identity.
"""
import argparse
import timeit

import numpy as np

from wdstab import _backend, _pykernels
from wdstab.rng import Xoshiro256


def cases(scale):
    n_draws = int(200_000 * scale)
    n_comb = int(20_000 * scale)
    x = np.random.default_rng(0).lognormal(size=int(2_000 * scale))
    lambdas = np.linspace(-3, 3, 601)
    resid = np.random.default_rng(1).standard_normal(int(500_000 * scale))

    def u64(k):
        return lambda: Xoshiro256(1, k).u64(n_draws)

    def normal(k):
        return lambda: Xoshiro256(1, k).normal(n_draws)

    def combination(k):
        def run():
            rng = Xoshiro256(2, k)
            return [rng.combination(20, 6) for _ in range(n_comb)]
        return run

    def boxcox_grid(k):
        def run():
            out = np.empty(lambdas.size)
            k.boxcox_loglik_grid(x, lambdas, out)
            return out
        return run

    def moments(k):
        return lambda: k.central_moments(resid)

    def dw(k):
        return lambda: k.durbin_watson_sums(resid)

    return [
        (f"u64 x{n_draws}", u64),
        (f"normal x{n_draws}", normal),
        (f"combination(20,6) x{n_comb}", combination),
        (f"boxcox grid 601 x n={x.size}", boxcox_grid),
        (f"central moments n={resid.size}", moments),
        (f"durbin-watson n={resid.size}", dw),
    ]


def same(a, b):
    if isinstance(a, np.ndarray):
        return np.allclose(a, b, rtol=1e-9, atol=1e-12, equal_nan=True)
    if isinstance(a, tuple) and a and isinstance(a[0], float):
        return np.allclose(a, b, rtol=1e-9, atol=1e-12)
    return a == b


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=5)
    p.add_argument("--scale", type=float, default=1.0, help="multiply problem sizes")
    args = p.parse_args(argv)

    compiled = [k for k in _backend.available() if k is not _pykernels]
    if not compiled:
        print("compiled kernels are not built; only the Python backend is available")
        return 1
    fast = compiled[0]

    print(f"{'kernel':<34}{fast.NAME + ' (ms)':>14}{'python (ms)':>14}{'speed-up':>10}")
    for label, make in cases(args.scale):
        f_fast, f_py = make(fast), make(_pykernels)
        if not same(f_fast(), f_py()):
            print(f"{label:<34}  OUTPUT MISMATCH")
            continue
        t_fast = min(timeit.repeat(f_fast, number=1, repeat=args.repeat))
        t_py = min(timeit.repeat(f_py, number=1, repeat=args.repeat))
        print(f"{label:<34}{t_fast * 1e3:>14.2f}{t_py * 1e3:>14.2f}{t_py / t_fast:>9.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
