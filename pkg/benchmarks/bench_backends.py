"""Compare the numba kernels against the pure-numpy fallbacks.

Run:  python3 benchmarks/bench_backends.py [--sizes small|large]

The same workloads run through both backends and the outputs are checked for
exact agreement before timing.  Timings exclude JIT compilation (a warm-up
call per kernel).
"""

import argparse
import time

import numpy as np

from modpsym import _kernels_numpy as KP
from modpsym.gfq import build_field
from modpsym.cong import gamma0
from modpsym.msym import ManinSpace

try:
    from modpsym import _kernels_numba as KN
except ImportError:
    KN = None


def _time(fn, repeat=3):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def bench_kernels(n, p, d, rng):
    F = build_field(p, d)
    A = rng.integers(0, F.q, size=(n, n)).astype(np.int64)
    B = rng.integers(0, F.q, size=(n, n)).astype(np.int64)
    margs = (F.p, F.d, F.exp2, F.log)
    rargs = margs + (F.inv_table,)
    rows = []
    for label, kp, kn, args, needs_copy in (
        (f"matmul {n}x{n} GF({p}^{d})", KP.matmul, KN and KN.matmul, (A, B) + margs, False),
        (f"rref   {n}x{n} GF({p}^{d})", KP.rref, KN and KN.rref, (A,) + rargs, True),
        (f"charpoly {n}x{n} GF({p}^{d})", KP.charpoly, KN and KN.charpoly, (A,) + rargs, True),
    ):
        def run_with(kern):
            if needs_copy:
                return lambda: kern(args[0].copy(), *args[1:])
            return lambda: kern(*args)

        tp, outp = _time(run_with(kp))
        if KN is None:
            rows.append((label, tp, None))
            continue
        run_with(kn)()      # warm-up / JIT
        tn, outn = _time(run_with(kn))
        same = (np.array_equal(outp, outn) if not isinstance(outp, tuple)
                else outp[0] == outn[0] and np.array_equal(outp[1], outn[1]))
        assert same, f"backend disagreement in {label}"
        rows.append((label, tp, tn))
    return rows


def bench_conjugacy(q):
    from modpsym import backend
    from modpsym.rep import group_table
    rows = []
    for name in ("numpy", "numba") if KN is not None else ("numpy",):
        backend.set_backend(name)
        try:
            t0 = time.perf_counter()
            group_table(q)
            rows.append((name, time.perf_counter() - t0))
        finally:
            backend.set_backend(None)
    return rows


def bench_space(p):
    from modpsym import backend
    rows = []
    for name in ("numpy", "numba") if KN is not None else ("numpy",):
        backend.set_backend(name)
        try:
            t0 = time.perf_counter()
            S = ManinSpace(gamma0(11), p + 1, None, build_field(p))
            S.hecke_operator(2)
            S.cuspidal_basis()
            rows.append((name, time.perf_counter() - t0))
        finally:
            backend.set_backend(None)
    return rows


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", choices=("small", "large"), default="small")
    args = ap.parse_args()
    n = 200 if args.sizes == "small" else 500
    rng = np.random.default_rng(0)

    print(f"{'workload':38} {'numpy':>10} {'numba':>10} {'speedup':>9}")
    for (p, d) in ((5, 1), (7, 2)):
        for label, tp, tn in bench_kernels(n, p, d, rng):
            if tn is None:
                print(f"{label:38} {tp*1e3:9.1f}ms {'n/a':>10}")
            else:
                print(f"{label:38} {tp*1e3:9.1f}ms {tn*1e3:9.1f}ms {tp/tn:8.1f}x")

    q = 25 if args.sizes == "small" else 49
    print(f"\nconjugacy classes of SL2(F_{q}):")
    for name, t in bench_conjugacy(q):
        print(f"  {name:8} {t:6.2f}s")

    print("\nweight-(p+1) space + T_2 + cuspidal basis, level 11, p = 7:")
    for name, t in bench_space(7):
        print(f"  {name:8} {t:6.2f}s")


if __name__ == "__main__":
    main()
