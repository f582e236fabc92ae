"""Compare the compiled row-reduction kernel with the pure-Python fallback.

    python benchmarks/bench_kernel.py [--repeat 3] [--arity 6]

Workloads: boundary matrices of the invariant tensor-square complexes (the
matrices the diagonal builder actually reduces) and random sparse integer
matrices.  Both backends must return identical reduced forms; the script
exits non-zero if they do not.

Random matrices grow entries past 64 bits during elimination, so the
compiled kernel raises OverflowError and ``linalg`` reruns them in Python:
expect no speedup there.  The boundary matrices stay small and are where
the kernel pays off.
"""

import argparse
import random
import sys
import time

from ainfdiag import linalg
from ainfdiag.chains import EquivariantComplex, boundary_rows


def complex_workload(n):
    comp = EquivariantComplex(n, flip=True)
    return [(f"invariant n={n} d={d}", boundary_rows(comp, d)) for d in range(n - 3, comp.top + 1)
            if comp.basis(d)]


def random_workload(seed, size, density):
    rng = random.Random(seed)
    rows = []
    for _ in range(size):
        rows.append({c: rng.randint(-9, 9) or 1 for c in range(size) if rng.random() < density})
    return f"random {size}x{size} p={density}", rows


def timed(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--arity", type=int, default=6)
    args = ap.parse_args(argv)

    if linalg.BACKEND == "python":
        print("compiled kernel not available; build it with `pip install -e . --no-build-isolation`")
        return 1
    work = []
    for n in range(4, args.arity + 1):
        work.extend(complex_workload(n))
    work.append(random_workload(1, 150, 0.05))
    work.append(random_workload(2, 300, 0.02))

    print(f"{'workload':32} {'rows':>6} {'cython s':>10} {'python s':>10} {'speedup':>8}")
    tot_c = tot_p = 0.0
    for name, rows in work:
        tc, rc = timed(lambda: linalg.rref(rows), args.repeat)
        tp, rp = timed(lambda: linalg.rref(rows, backend="python"), args.repeat)
        if rc != rp:
            print(f"{name}: backends disagree", file=sys.stderr)
            return 2
        tot_c += tc
        tot_p += tp
        print(f"{name:32} {len(rows):>6} {tc:>10.4f} {tp:>10.4f} {tp / tc if tc else float('inf'):>7.1f}x")
    print(f"{'total':32} {'':>6} {tot_c:>10.4f} {tot_p:>10.4f} {tot_p / tot_c:>7.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
