"""Backend dispatch for the F_p kernels.

Two interchangeable implementations exist: numba @njit kernels and a
pure-numpy fallback.  ARBOREAL_BACKEND=numba|numpy forces one; the default is
numba when it imports, else numpy.  benchmarks/bench_modp.py compares them.

These kernels are int64-only; the dispatcher enforces the no-overflow bound
and refuses primes that are too large for the requested degree (callers fall
back to the pure big-int code in gfpoly for those).
"""

import os

import numpy as np

from . import gfpoly

_FORCED = os.environ.get("ARBOREAL_BACKEND", "").strip().lower()
_BACKEND = None
_BACKEND_NAME = None


def _load_backend():
    global _BACKEND, _BACKEND_NAME
    if _BACKEND is not None:
        return _BACKEND
    choice = _FORCED or "numba"
    if choice == "numba":
        try:
            from . import _modp_numba as impl
            _BACKEND, _BACKEND_NAME = impl, "numba"
            return impl
        except ImportError:
            if _FORCED == "numba":
                raise
    from . import _modp_numpy as impl
    _BACKEND, _BACKEND_NAME = impl, "numpy"
    return impl


def backend_name():
    _load_backend()
    return _BACKEND_NAME


def get_backend(name=None):
    """Fetch a specific backend module (for benchmarks/tests)."""
    if name == "numba":
        from . import _modp_numba as impl
        return impl
    if name == "numpy":
        from . import _modp_numpy as impl
        return impl
    return _load_backend()


def max_kernel_prime(max_len):
    """Largest p such that (p-1)^2 * max_len stays below 2^63."""
    return int(((2 ** 62) // max(max_len, 1)) ** 0.5)


def kernel_ok(p, max_len):
    return 2 < p <= max_kernel_prime(max_len)


def as_array(int_coeffs, p):
    return np.array([c % p for c in int_coeffs], dtype=np.int64)


def compose_power(f_ints, n, p, backend=None):
    """Coefficients of f^n (n-fold composition) mod p, as an int64 array."""
    impl = backend or _load_backend()
    f = as_array(f_ints, p)
    g = f.copy()
    for _ in range(n - 1):
        g = impl.compose_step(f, g, p)
    return g


def ddf_degree_sequence(arr, p, backend=None):
    """Sorted degree multiset of the irreducible factors of a squarefree
    monic-normalizable polynomial mod p."""
    impl = backend or _load_backend()
    counts = impl.ddf_counts(arr, p)
    seq = []
    for d in range(1, len(counts)):
        seq.extend([d] * int(counts[d]))
    return tuple(sorted(seq))


def is_squarefree(arr, p, backend=None):
    impl = backend or _load_backend()
    return bool(impl.is_squarefree(arr, p))


def ddf_degree_sequence_anyp(int_coeffs, p):
    """Degree sequence for any odd prime: kernels when the int64 bound allows,
    else the pure big-int route."""
    if kernel_ok(p, 2 * len(int_coeffs) + 2):
        return ddf_degree_sequence(as_array(int_coeffs, p), p)
    return gfpoly.degree_sequence(gfpoly.from_int_coeffs(int_coeffs, p), p)


def is_irreducible_mod_p(int_coeffs, p):
    """Certified irreducibility mod p of a polynomial with p-unit leading
    coefficient, via the distinct-degree sequence."""
    n = len(int_coeffs) - 1
    if n <= 0 or int_coeffs[-1] % p == 0:
        return False
    if p > 2 and kernel_ok(p, 2 * len(int_coeffs) + 2):
        arr = as_array(int_coeffs, p)
        if not is_squarefree(arr, p):
            return False
        return ddf_degree_sequence(arr, p) == (n,)
    fp = gfpoly.from_int_coeffs(int_coeffs, p)
    return gfpoly.is_irreducible(fp, p)
