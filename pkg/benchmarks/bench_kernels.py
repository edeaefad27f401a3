"""Timing comparison of the numba kernels against the numpy fallbacks.

Run directly:  python benchmarks/bench_kernels.py
The numba path must be importable for the comparison; otherwise only
the numpy column is reported. Workload sizes mirror the joint pipeline
(coherence smoothing, CART split scans, one-vs-all SVM solves).
"""

import time

import numpy as np

from wavescat import _kernels


def timeit(fn, repeats=5):
    fn()  # warm-up / JIT compile
    best = np.inf
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def bench_boxcar():
    rng = np.random.default_rng(0)
    mat = rng.standard_normal((67, 60_000)) + 1j * rng.standard_normal((67, 60_000))
    widths = np.maximum(1, (2000 / 2.0 ** (np.arange(67) / 10.0))).astype(np.int64)
    out = np.empty_like(mat)
    rows = {"numpy": timeit(lambda: _kernels._boxcar_time_py(mat, widths))}
    if _kernels.NUMBA_ENABLED:
        rows["numba"] = timeit(
            lambda: _kernels._boxcar_time_nb(mat, widths, out))
    return "boxcar_time (67x60k complex)", rows


def bench_scale_boxcar():
    rng = np.random.default_rng(1)
    mat = rng.standard_normal((67, 60_000))
    out = np.empty_like(mat)
    rows = {"numpy": timeit(lambda: _kernels._boxcar_scale_py(mat, 6))}
    if _kernels.NUMBA_ENABLED:
        rows["numba"] = timeit(lambda: _kernels._boxcar_scale_nb(mat, 6, out))
    return "boxcar_scale (67x60k, width 6)", rows


def bench_split():
    rng = np.random.default_rng(2)
    values = np.sort(rng.standard_normal(5000))
    classes = rng.integers(0, 3, 5000)

    def run_py():
        for _ in range(20):
            _kernels._best_split_column_py(values, classes, 3, 1)

    rows = {"numpy": timeit(run_py)}
    if _kernels.NUMBA_ENABLED:
        left = np.zeros(3, dtype=np.int64)
        tot = np.zeros(3, dtype=np.int64)

        def run_nb():
            for _ in range(20):
                _kernels._best_split_column_nb(values, classes, 3, 1,
                                               left, tot)

        rows["numba"] = timeit(run_nb)
    return "best_split_column (5000 x 20 features)", rows


def bench_svm():
    rng = np.random.default_rng(3)
    x = rng.standard_normal((4000, 160))
    y = np.where(x[:, 0] > 0, 1.0, -1.0)
    aug = np.hstack([x, np.ones((4000, 1))])
    c_i = np.full(4000, 1.0)

    def run_pg():
        alpha = np.zeros(4000)
        w = np.zeros(161)
        _kernels._svm_dual_pg_py(aug, y, c_i, 1e-3, 100, alpha, w)

    rows = {"numpy": timeit(run_pg, repeats=3)}
    if _kernels.NUMBA_ENABLED:
        def run_cd():
            alpha = np.zeros(4000)
            w = np.zeros(161)
            _kernels._svm_dual_cd_nb(aug, y, c_i, 1e-3, 100, alpha, w)

        rows["numba"] = timeit(run_cd, repeats=3)
    return "svm dual solve (4000x160, 100 epochs)", rows


def run():
    print(f"numba available: {_kernels.NUMBA_ENABLED} "
          f"(WAVESCAT_DISABLE_NUMBA forces the numpy path)")
    print(f"{'kernel':45s} {'numpy':>10s} {'numba':>10s} {'speedup':>8s}")
    for bench in (bench_boxcar, bench_scale_boxcar, bench_split, bench_svm):
        name, rows = bench()
        np_t = rows["numpy"]
        nb_t = rows.get("numba")
        speedup = f"{np_t / nb_t:6.1f}x" if nb_t else "    -"
        nb_txt = f"{nb_t * 1e3:8.1f}ms" if nb_t else "       -"
        print(f"{name:45s} {np_t * 1e3:8.1f}ms {nb_txt} {speedup}")


if __name__ == "__main__":
    run()
