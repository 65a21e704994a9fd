"""Compare the numba and numpy kernel backends on rank, rref and matmul.

    python3 benchmarks/bench_kernels.py [--sizes 8 32 96] [--repeat 5]

Each timing is the best of ``--repeat`` runs after one warm-up call, so numba
compilation is excluded. Results from both backends are checked for equality.
"""
import argparse
import timeit

import numpy as np

from wiretapnet.gf import field_for_order
from wiretapnet.kernels import numba_backend, numpy_backend

FIELDS = (2, 7, 16, 251)


def bench(fn, args, repeat):
    fn(*args)
    return min(timeit.repeat(lambda: fn(*args), number=1, repeat=repeat))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[8, 32, 96])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    if numba_backend is None:
        print("numba is not installed; only the numpy backend is available")
        return 1
    rng = np.random.default_rng(args.seed)
    print(f"{'op':<7}{'field':<9}{'size':>5}{'numpy ms':>12}{'numba ms':>12}{'speedup':>9}")
    for q in FIELDS:
        f = field_for_order(q)
        label = f"GF({q})"
        for n in args.sizes:
            a = rng.integers(0, q, size=(n, n)).astype(np.int64)
            b = rng.integers(0, q, size=(n, n)).astype(np.int64)
            cases = {"matmul": (a, b, *f.ctx), "rref": (a, *f.ctx), "rank": (a, *f.ctx)}
            for op, call in cases.items():
                slow, fast = getattr(numpy_backend, op), getattr(numba_backend, op)
                r_np, r_nb = slow(*call), fast(*call)
                if op == "rref":
                    assert all(np.array_equal(x, y) for x, y in zip(r_np, r_nb))
                else:
                    assert np.array_equal(np.asarray(r_np), np.asarray(r_nb))
                t_np, t_nb = bench(slow, call, args.repeat), bench(fast, call, args.repeat)
                print(f"{op:<7}{label:<9}{n:>5}{t_np * 1e3:>12.3f}{t_nb * 1e3:>12.3f}{t_np / t_nb:>8.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
