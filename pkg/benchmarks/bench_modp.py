#!/usr/bin/env python3
"""Benchmark the F_p kernels: numba @njit versus the pure-numpy fallback.

The measured workload is the Frobenius cycle-type sweep (reduce f^n - beta
mod p, squarefree check, distinct-degree factorization) over a prime range,
which is the package's hot numeric loop.  Run:

    python benchmarks/bench_modp.py [--prime-hi 50000] [--levels 1 2 3]

Select the backend used by the library itself with ARBOREAL_BACKEND.
"""

import argparse
import time

from arboreal import modp
from arboreal.intfactor import primes_in_range
from arboreal.maps import CubicMap


def sweep(backend, coeffs, n, primes):
    tally = {}
    for p in primes:
        arr = modp.compose_power(coeffs, n, p, backend=backend)
        target = arr.copy()
        target[0] = (int(target[0]) - 1) % p
        if not backend.is_squarefree(target, p):
            continue
        seq = modp.ddf_degree_sequence(target, p, backend=backend)
        tally[seq] = tally.get(seq, 0) + 1
    return tally


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--prime-lo", type=int, default=1000)
    ap.add_argument("--prime-hi", type=int, default=50_000)
    ap.add_argument("--levels", type=int, nargs="+", default=[1, 2, 3])
    args = ap.parse_args()

    f = CubicMap(2, 2)  # x^3 - 12x + 2; beta = 1
    coeffs = [int(c) for c in f.poly().coeffs]
    primes = primes_in_range(args.prime_lo, args.prime_hi)
    print(f"map {f.poly()}, beta = 1, {len(primes)} primes in "
          f"[{args.prime_lo}, {args.prime_hi}]")

    backends = {}
    for name in ("numba", "numpy"):
        try:
            backends[name] = modp.get_backend(name)
        except ImportError:
            print(f"{name}: unavailable, skipped")

    if "numba" in backends:
        # warm the JIT outside the timed region
        sweep(backends["numba"], coeffs, 1, primes[:5])

    print(f"{'n':>3} {'deg':>5} " + " ".join(f"{n:>12}" for n in backends)
          + "   speedup")
    for n in args.levels:
        row = {}
        tallies = {}
        for name, impl in backends.items():
            t0 = time.perf_counter()
            tallies[name] = sweep(impl, coeffs, n, primes)
            row[name] = time.perf_counter() - t0
        vals = list(tallies.values())
        assert all(v == vals[0] for v in vals), "backends disagree"
        speed = (f"{row['numpy'] / row['numba']:.1f}x"
                 if {"numba", "numpy"} <= set(row) else "-")
        print(f"{n:>3} {3 ** n:>5} "
              + " ".join(f"{row[name]:>11.3f}s" for name in backends)
              + f"   {speed}")


if __name__ == "__main__":
    main()
