import os
import random
import subprocess
import sys
from fractions import Fraction

import pytest
import sympy

from ainfdiag import _kernel_py, linalg

BACKENDS = ["python"] + ([None] if linalg.BACKEND != "python" else [])


def random_rows(rng, nrows, ncols, density=0.3, span=5):
    rows = []
    for _ in range(nrows):
        r = {c: rng.randint(-span, span) for c in range(ncols) if rng.random() < density}
        rows.append({k: v for k, v in r.items() if v})
    return rows


def dense(rows, ncols):
    return sympy.Matrix([[r.get(c, 0) for c in range(ncols)] for r in rows])


@pytest.mark.parametrize("backend", BACKENDS)
def test_rank_matches_sympy(backend):
    rng = random.Random(11)
    for _ in range(40):
        nr, nc = rng.randint(1, 9), rng.randint(1, 9)
        rows = random_rows(rng, nr, nc)
        assert linalg.rank(rows, backend) == dense(rows, nc).rank()


@pytest.mark.parametrize("backend", BACKENDS)
def test_rref_matches_sympy(backend):
    rng = random.Random(12)
    for _ in range(40):
        nr, nc = rng.randint(1, 7), rng.randint(1, 7)
        rows = random_rows(rng, nr, nc, density=0.5)
        ours = [[Fraction(r.get(c, 0), r[min(r)]) for c in range(nc)] for r in linalg.rref(rows, backend)]
        ref, _ = dense(rows, nc).rref()
        theirs = [[Fraction(int(x.p), int(x.q)) for x in ref.row(i)] for i in range(ref.rows)
                  if any(ref.row(i))]
        assert ours == theirs


@pytest.mark.parametrize("backend", BACKENDS)
def test_solve_and_kernel(backend):
    rng = random.Random(13)
    for _ in range(30):
        nc = rng.randint(2, 7)
        rows = random_rows(rng, rng.randint(1, 6), nc, density=0.6)
        x0 = {c: Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for c in range(nc)}
        rhs = {i: sum(v * x0.get(c, 0) for c, v in r.items()) for i, r in enumerate(rows)}
        x = linalg.solve(rows, rhs, nc, backend)
        assert x is not None
        for i, r in enumerate(rows):
            assert sum(v * x.get(c, 0) for c, v in r.items()) == rhs[i]
        ker = linalg.kernel_basis(rows, nc, backend)
        assert len(ker) == nc - linalg.rank(rows, backend)
        for vec in ker:
            for r in rows:
                assert sum(v * vec.get(c, 0) for c, v in r.items()) == 0


def test_inconsistent_system():
    assert linalg.solve([{0: 1}, {0: 2}], {0: 1, 1: 1}, 1) is None


def test_fraction_rows_are_scaled():
    assert linalg.rank([{0: Fraction(1, 2), 1: Fraction(1, 3)}, {0: 3, 1: 2}]) == 1


@pytest.mark.skipif(linalg.BACKEND == "python", reason="compiled kernel not built")
def test_backends_agree_exactly():
    rng = random.Random(14)
    for _ in range(50):
        rows = random_rows(rng, 12, 12, density=0.4, span=10**30)
        assert linalg.rref(rows) == linalg.rref(rows, "python")


def test_huge_entries_fall_back():
    rows = [{0: 10**40, 1: 3}, {0: 7, 1: 10**50}]
    assert linalg.rank(rows) == 2


def test_pure_python_switch():
    env = dict(os.environ, AINFDIAG_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "from ainfdiag import linalg; print(linalg.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == _kernel_py.BACKEND


def test_fallback_builds_the_same_diagonal():
    code = ("from ainfdiag.diagonal import build_diagonal; from ainfdiag import serialize, linalg;"
            "print(linalg.BACKEND); print(serialize.dumps(serialize.diagonal_to_json(build_diagonal(5, True))))")
    outs = {}
    for flag in ("0", "1"):
        env = dict(os.environ, AINFDIAG_PURE_PYTHON=flag)
        outs[flag] = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True,
                                    text=True, check=True).stdout.split("\n", 1)
    assert outs["1"][0] == "python"
    assert outs["0"][1] == outs["1"][1]
