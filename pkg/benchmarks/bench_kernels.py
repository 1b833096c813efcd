"""Compare the compiled kernels against the pure-NumPy fallback.

Run with:  python benchmarks/bench_kernels.py
"""
import math
import time

import numpy as np

from forestdetect.kernels import _fallback

try:
    from forestdetect.kernels import _core
except ImportError:
    _core = None


def timeit(fn, repeats=5):
    best = math.inf
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def bench(name, make_args, pure_fn, compiled_fn, inner=1):
    args = make_args()

    def run(fn):
        for _ in range(inner):
            fn(*args)

    pure = timeit(lambda: run(pure_fn))
    if compiled_fn is None:
        print(f"{name:<18} pure {pure * 1e3:8.2f} ms   compiled: not built")
        return
    compiled = timeit(lambda: run(compiled_fn))
    print(
        f"{name:<18} pure {pure * 1e3:8.2f} ms   compiled {compiled * 1e3:8.2f} ms"
        f"   speedup x{pure / compiled:5.1f}"
    )


def main():
    rng = np.random.default_rng(0)

    # 100-element samples dominate real workloads (10x10 tiles)
    small = rng.normal(size=100)
    bench(
        "ecf_terms n=100",
        lambda: (small, 1.7),
        _fallback.ecf_terms,
        _core.ecf_terms if _core else None,
        inner=20000,
    )

    x = rng.normal(size=2000)
    bench(
        "ecf_terms n=2000",
        lambda: (x, 1.7),
        _fallback.ecf_terms,
        _core.ecf_terms if _core else None,
        inner=2000,
    )

    theta = (rng.random(100) - 0.5) * math.pi
    w = rng.exponential(1.0, 100)
    bench(
        "cms_standard",
        lambda: (theta, w, 1.7, 0.3),
        _fallback.cms_standard,
        _core.cms_standard if _core else None,
        inner=5000,
    )

    stats = rng.exponential(5.0, 400)
    is_forest = rng.random(400) < 0.5
    grid = np.linspace(0.0, 50.0, 1001)
    bench(
        "accuracy_curve",
        lambda: (stats, is_forest, grid),
        _fallback.accuracy_curve,
        _core.accuracy_curve if _core else None,
        inner=50,
    )


if __name__ == "__main__":
    main()
