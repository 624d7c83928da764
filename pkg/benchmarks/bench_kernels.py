"""Compiled kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat 5]

Each kernel runs on the same inputs in both backends; outputs are compared
before timings are printed.
"""
import argparse
import time

import numpy as np

from coxtorus import _fallback

try:
    from coxtorus import _kernels
except ImportError:
    _kernels = None

P = 2147483629


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def case_divide(mod):
    n = m = 120
    I, J = np.meshgrid(np.arange(n), np.arange(m), indexing="ij")
    ell = np.ascontiguousarray(3 * I + 2 * J, dtype=np.int64)

    def run():
        a = np.zeros((n, m), dtype=np.int64)
        a[0, 0] = 1
        for v in ((1, 0), (0, 1), (2, -1), (1, 1), (3, -2), (0, 2)):
            mod.geometric_divide(a, v[0], v[1], ell, 300)
        return a
    return run


def case_poly_mul(mod):
    rng = np.random.default_rng(1)
    A = np.ascontiguousarray(rng.integers(0, P, (30, 30)), dtype=np.int64)
    B = np.ascontiguousarray(rng.integers(0, P, (12, 12)), dtype=np.int64)
    return lambda: mod.poly_mul_mod(A, B, P)


def case_rank(mod):
    rng = np.random.default_rng(2)
    low = rng.integers(0, 50, (150, 40))
    rows = np.ascontiguousarray(low @ rng.integers(0, 50, (40, 400)), dtype=np.int64)
    return lambda: mod.rank_mod_p(rows, P)


def case_echelon(mod):
    rng = np.random.default_rng(3)
    rows = [np.ascontiguousarray(r, dtype=np.int64) for r in rng.integers(0, P, (120, 300))]

    def run():
        basis, piv = [], []
        for r in rows:
            mod.echelon_insert(basis, piv, r, P)
        return len(basis)
    return run


CASES = {"geometric_divide": case_divide, "poly_mul_mod": case_poly_mul,
         "rank_mod_p": case_rank, "echelon_insert": case_echelon}


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if _kernels is None:
        print("compiled kernels not built; only the fallback is timed")
    print(f"{'kernel':<18}{'fallback':>12}{'compiled':>12}{'speedup':>10}")
    for name, make in CASES.items():
        tf, out_f = best_of(make(_fallback), args.repeat)
        if _kernels is None:
            print(f"{name:<18}{tf * 1e3:>10.2f}ms{'-':>12}{'-':>10}")
            continue
        tc, out_c = best_of(make(_kernels), args.repeat)
        if not np.array_equal(np.asarray(out_f), np.asarray(out_c)):
            raise SystemExit(f"{name}: backends disagree")
        print(f"{name:<18}{tf * 1e3:>10.2f}ms{tc * 1e3:>10.2f}ms{tf / tc:>9.1f}x")


if __name__ == "__main__":
    main()
