"""Time the numba kernels against their numpy fallbacks.

    python3 benchmarks/bench_kernels.py [--size 20000] [--repeat 5]

Both backends are imported explicitly, so OKALAB_DISABLE_NUMBA does not
matter here.  The first numba call (compilation or cache load) is excluded.
"""

import argparse
import timeit

import numpy as np

from okalab import kernels
from okalab._accel import HAS_NUMBA
from okalab.steinfn import truncation_orders


def cases(size, rng):
    ell = rng.uniform(-2, 2, size) + 1j * rng.uniform(-10, 10, size)
    w = np.exp(rng.uniform(-2, 2, size) + 1j * rng.uniform(-np.pi, np.pi, size))
    n, m, _ = truncation_orders(ell.imag, np.abs(w))
    values = np.exp(1j * np.cumsum(rng.uniform(-1, 1, size)))
    zeta = rng.normal(size=size) + 1j * rng.normal(size=size)
    freqs = np.array([0, 1, 1j, 2 - 1j], dtype=complex)
    coeffs = np.array([-2, 1, 1, 0.25], dtype=complex)
    return {
        "stein_product": ((ell, w, n, m), {}),
        "unwrap_sum": ((values, True), {}),
        "step_angles": ((values, True), {}),
        "expsum": ((zeta, freqs, coeffs), {}),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--size", type=int, default=20000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    rng = np.random.default_rng(0)
    print(f"{'kernel':<15}{'numpy ms':>12}{'numba ms':>12}{'speedup':>10}")
    for name, (a, kw) in cases(args.size, rng).items():
        f_np = getattr(kernels, f"{name}_numpy")
        t_np = min(timeit.repeat(lambda: f_np(*a, **kw), number=1, repeat=args.repeat)) * 1e3
        if HAS_NUMBA:
            f_nb = getattr(kernels, f"{name}_numba")
            f_nb(*a, **kw)
            t_nb = min(timeit.repeat(lambda: f_nb(*a, **kw), number=1, repeat=args.repeat)) * 1e3
            print(f"{name:<15}{t_np:>12.2f}{t_nb:>12.2f}{t_np / t_nb:>9.1f}x")
        else:
            print(f"{name:<15}{t_np:>12.2f}{'n/a':>12}{'':>10}")


if __name__ == "__main__":
    main()
