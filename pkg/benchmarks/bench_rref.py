"""Compare the compiled and pure-Python GF(p) row-reduction kernels.

    python benchmarks/bench_rref.py [--reps 20]
"""

import argparse
import timeit

import numpy as np

from reldim import _kernels_py

try:
    from reldim import _kernels
except ImportError:
    _kernels = None


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--reps", type=int, default=20)
    ap.add_argument("--p", type=int, default=7)
    args = ap.parse_args()
    rng = np.random.default_rng(0)
    backends = {"python": _kernels_py.rref_mod_p}
    if _kernels is not None:
        backends["cython"] = _kernels.rref_mod_p
    else:
        print("compiled kernel not built; timing the fallback only")
    print(f"{'shape':>10} " + " ".join(f"{k:>12}" for k in backends) + "   speedup")
    for n in (4, 8, 16, 32, 64, 128):
        a = rng.integers(0, args.p, size=(n, n + n // 2), dtype=np.int64)
        ref = _kernels_py.rref_mod_p(a, args.p)
        times = {}
        for name, fn in backends.items():
            r, piv = fn(a, args.p)
            assert np.array_equal(np.asarray(r), ref[0]) and list(piv) == list(ref[1]), name
            times[name] = min(timeit.repeat(lambda: fn(a, args.p), number=args.reps, repeat=3)) / args.reps
        speed = f"{times['python'] / times['cython']:8.1f}x" if "cython" in times else ""
        print(f"{str(a.shape):>10} " + " ".join(f"{t * 1e6:10.1f}us" for t in times.values()) + "   " + speed)


if __name__ == "__main__":
    main()
