"""Benchmark the packed F2 kernels: numba JIT path vs pure-numpy fallback.

Run as a script; prints a small table of timings per kernel and size.  The
same comparison can be forced package-wide by setting TORIC3D_PURE_NUMPY=1.
"""

from __future__ import annotations

import time

import numpy as np

from toric3d import _kernels as K


def _time(fn, *args, repeat=5):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def bench_rank(rows, bits, rng):
    mat = K.pack_bits(rng.integers(0, 2, (rows, bits)))
    results = {"numpy": _time(K.np_f2_rank, mat)}
    if K.HAVE_NUMBA:
        K.nb_f2_rank(mat)  # jit warm-up
        results["numba"] = _time(K.nb_f2_rank, mat)
    return results


def bench_batch(rows, bits, rng):
    xs = K.pack_bits(rng.integers(0, 2, (rows, bits)))
    zs = K.pack_bits(rng.integers(0, 2, (rows, bits)))
    x = K.pack_bits(rng.integers(0, 2, bits))
    z = K.pack_bits(rng.integers(0, 2, bits))
    results = {"numpy": _time(K.np_anticommute_batch, xs, zs, x, z)}
    if K.HAVE_NUMBA:
        K.nb_anticommute_batch(xs, zs, x, z)
        results["numba"] = _time(K.nb_anticommute_batch, xs, zs, x, z)
    return results


def bench_parity(bits, reps, rng):
    vecs = [K.pack_bits(rng.integers(0, 2, bits)) for _ in range(4)]

    def run_np():
        for _ in range(reps):
            K.np_symplectic_parity(*vecs)

    results = {"numpy": _time(run_np)}
    if K.HAVE_NUMBA:
        K.nb_symplectic_parity(*vecs)

        def run_nb():
            for _ in range(reps):
                K.nb_symplectic_parity(*vecs)

        results["numba"] = _time(run_nb)
    return results


def main():
    rng = np.random.default_rng(0)
    print(f"numba available: {K.HAVE_NUMBA}; selected backend: {K.BACKEND}")
    rows = [
        ("f2_rank 256x2048", bench_rank(256, 2048, rng)),
        ("f2_rank 1024x8192", bench_rank(1024, 8192, rng)),
        ("anticommute_batch 4096x4096", bench_batch(4096, 4096, rng)),
        ("symplectic_parity 512b x20k", bench_parity(512, 20000, rng)),
    ]
    width = max(len(name) for name, _ in rows)
    print(f"{'kernel':<{width}}  {'numpy':>10}  {'numba':>10}  {'speedup':>8}")
    for name, res in rows:
        np_t = res["numpy"]
        nb_t = res.get("numba")
        if nb_t is None:
            print(f"{name:<{width}}  {np_t * 1e3:>8.2f}ms  {'-':>10}  {'-':>8}")
        else:
            print(
                f"{name:<{width}}  {np_t * 1e3:>8.2f}ms  {nb_t * 1e3:>8.2f}ms"
                f"  {np_t / nb_t:>7.1f}x"
            )


if __name__ == "__main__":
    main()
