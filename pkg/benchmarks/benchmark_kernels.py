"""Times the compiled scoring kernels against the pure-numpy fallback.

Run after an in-place build:

    python3 benchmarks/benchmark_kernels.py [N] [L] [M]
"""

import sys
import timeit

import numpy as np

from uapr import _kernels_ref

try:
    from uapr import _kernels_fast
except ImportError:
    _kernels_fast = None


def bench(label, fn, *args, repeat=5, number=20):
    best = min(timeit.repeat(lambda: fn(*args), repeat=repeat, number=number)) / number
    print(f"  {label:10s} {best * 1e3:9.3f} ms")
    return best


def main():
    n = int(sys.argv[1]) if len(sys.argv) > 1 else 10_000
    dim = int(sys.argv[2]) if len(sys.argv) > 2 else 256
    m = int(sys.argv[3]) if len(sys.argv) > 3 else 5
    rng = np.random.default_rng(0)
    q = rng.standard_normal(dim)
    db = rng.standard_normal((n, dim))
    qv = rng.random(dim) + 0.1
    dbv = rng.random((n, dim)) + 0.1
    qm = rng.standard_normal((m, dim))
    dbm = rng.standard_normal((m, n, dim))

    backends = [("python", _kernels_ref)]
    if _kernels_fast is not None:
        backends.append(("cython", _kernels_fast))
    else:
        print("compiled extension not available; benchmarking fallback only")

    print(f"N={n} L={dim} M={m}")
    for name, mod in backends:
        print(f"{name}:")
        bench("cosine", mod.cosine_scores, q, db)
        bench("mls", mod.mls_scores, q, qv, db, dbv)
        bench("members", mod.member_score_stats, qm, dbm)

    if _kernels_fast is not None:
        for fn in ("cosine_scores", "mls_scores"):
            a = getattr(_kernels_ref, fn)
            b = getattr(_kernels_fast, fn)
            args = (q, db) if fn == "cosine_scores" else (q, qv, db, dbv)
            assert np.allclose(a(*args), b(*args), atol=1e-12), fn
        ra = _kernels_ref.member_score_stats(qm, dbm)
        rb = _kernels_fast.member_score_stats(qm, dbm)
        assert all(np.allclose(x, y, atol=1e-12) for x, y in zip(ra, rb))
        print("backend agreement: ok")


if __name__ == "__main__":
    main()
