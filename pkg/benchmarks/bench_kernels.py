#!/usr/bin/env python3
"""Benchmark the numba kernels against their numpy fallbacks.

Runs each hot kernel in both flavours on representative workloads and
prints a throughput table. The numpy path is what INNERLAB_BACKEND=numpy
selects; agreement is asserted to float tolerance while timing.
"""

import time

import numpy as np

from innerlab import kernels
from innerlab.backend import USING_NUMBA, backend_name

TAU = 2.0 * np.pi


def timeit(fn, *args, repeat=5):
    fn(*args)  # warmup / jit compile
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def bench(name, fn_nb, fn_np, args, close=1e-10):
    t_nb, out_nb = timeit(fn_nb, *args)
    t_np, out_np = timeit(fn_np, *args)
    if isinstance(out_nb, tuple):
        agree = all(np.allclose(a, b, atol=close) for a, b in zip(out_nb, out_np))
    else:
        agree = np.allclose(out_nb, out_np, atol=close)
    print(
        f"{name:28s} numba {t_nb * 1e3:9.3f} ms   numpy {t_np * 1e3:9.3f} ms   "
        f"speedup {t_np / t_nb:6.2f}x   agree={agree}"
    )


def main():
    print(f"active backend: {backend_name()} (numba importable: {USING_NUMBA})")
    rng = np.random.default_rng(0)

    n_probe, n_atom = 40_000, 64
    z = (rng.uniform(0.05, 0.95, n_probe) * np.exp(1j * rng.uniform(0, TAU, n_probe))).astype(
        np.complex128
    )
    atoms = (rng.uniform(0, 0.9, n_atom) * np.exp(1j * rng.uniform(0, TAU, n_atom))).astype(
        np.complex128
    )
    masses = rng.uniform(0.1, 1.0, n_atom)
    bench("green potential sum", kernels.green_sum_nb, kernels.green_sum_np, (z, atoms, masses))

    angles = rng.uniform(0, TAU, n_atom)
    bench("poisson kernel sum", kernels.poisson_sum_nb, kernels.poisson_sum_np, (z, angles, masses))

    n_int = 400
    anchors = ((1.0 + rng.uniform(0.01, 0.4, n_int)) * np.exp(1j * rng.uniform(0, TAU, n_int))).astype(
        np.complex128
    )
    dirs = np.exp(1j * rng.uniform(0, TAU, n_int))
    m2 = rng.uniform(1e-4, 1e-2, n_int)
    bench(
        "outer exponent sum",
        kernels.outer_exponent_nb,
        kernels.outer_exponent_np,
        (z, anchors, dirs, m2),
    )

    n_sub = 16
    ang = np.sort(rng.uniform(0, TAU, n_sub))
    mas = rng.uniform(0.1, 1.0, n_sub)
    bench(
        "subset entropy scan (2^16)",
        kernels.subset_entropy_scan_nb,
        kernels.subset_entropy_scan_np,
        (ang, mas, 1.5),
        close=1e-12,
    )


if __name__ == "__main__":
    main()
