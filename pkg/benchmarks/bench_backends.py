"""Compare the compiled and pure-Python kernels on the hot paths.

    python3 benchmarks/bench_backends.py [--repeat 3]
"""

import argparse
import time

import numpy as np

from zeroprod import _backend
from zeroprod.ffield import make_field
from zeroprod.fibctor import construct_counterexample
from zeroprod.matspace import code_space


def _generic(k):
    b = construct_counterexample(11)  # p = 149, about 2 * 10^5 products
    f = b.field
    g = np.array([m.entries for m in b.generators], dtype=np.uint64)
    e, l, z = f.kernel_tables()
    return lambda: k.bfs_generic(g, 2, f.p, f.q, e, l, z, 10**9, 10**8, True, False, False)


def _extension(k):
    f = make_field(2, 6)
    g = np.array([[1, 0, 0, 0], [2, 1, 1, 0]], dtype=np.uint64)  # code 2 is x
    e, l, z = f.kernel_tables()
    return lambda: k.bfs_generic(g, 2, f.p, f.q, e, l, z, 10**9, 10**8, False, False, False)


def _masks(k):
    sp = code_space(2, make_field(2))
    return lambda: k.score_masks(sp.table, sp.singular, 1, 1 << 16)


def _lemma(k):
    sp = code_space(2, make_field(3))
    cm = np.ones(sp.size, dtype=np.uint8)
    return lambda: k.lemma_scan(sp.table, sp.singular.copy(), cm, 0, 100)


def _sets(k):
    sp = code_space(2, make_field(3))
    rows = np.sort(np.random.default_rng(1).choice(81, size=(20000, 3)), axis=1).astype(np.int32)
    return lambda: k.score_sets(sp.table, sp.singular, rows)


CASES = [
    ("bfs_generic GF(149) Fibonacci pair", _generic),
    ("bfs_generic GF(64) pair with x entry", _extension),
    ("score_masks all 65535 subsets, n=2 q=2", _masks),
    ("score_sets 20000 triples, n=2 q=3", _sets),
    ("lemma_scan q=3", _lemma),
]


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if _backend.compiled is None:
        raise SystemExit("compiled kernels are not built; run: python3 setup.py build_ext --inplace")
    print(f"{'kernel':<42} {'cython s':>10} {'python s':>10} {'speedup':>8}")
    for name, make in CASES:
        tc, oc = best_of(make(_backend.compiled), args.repeat)
        tp, op = best_of(make(_backend.python), 1)
        same = all(np.array_equal(a, b) if isinstance(a, np.ndarray) else a == b for a, b in zip(oc, op)) \
            if isinstance(oc, tuple) else np.array_equal(oc, op)
        flag = "" if same else "  MISMATCH"
        print(f"{name:<42} {tc:>10.4f} {tp:>10.4f} {tp / tc:>7.1f}x{flag}")


if __name__ == "__main__":
    main()
