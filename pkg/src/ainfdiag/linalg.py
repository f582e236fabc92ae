"""Exact linear algebra over Q on sparse rows.

Rows are scaled to primitive integer vectors and handed to the row-reduction
kernel: the compiled ``_kernel`` when it is importable, else ``_kernel_py``.
Set ``AINFDIAG_PURE_PYTHON=1`` to force the fallback.  Column order fixes the
pivot order, so every result is reproducible.
"""

from __future__ import annotations

import os
from fractions import Fraction
from math import lcm

from . import _kernel_py

if os.environ.get("AINFDIAG_PURE_PYTHON") == "1":
    _kernel = None
else:
    try:
        from . import _kernel
    except ImportError:
        _kernel = None

BACKEND = _kernel.BACKEND if _kernel is not None else _kernel_py.BACKEND


def _integral(row):
    den = 1
    for v in row.values():
        if isinstance(v, Fraction):
            den = lcm(den, v.denominator)
    return {k: int(v * den) for k, v in row.items() if v}


def _run(name, rows, backend=None):
    rows = [_integral(r) for r in rows]
    if backend == "python" or _kernel is None:
        return getattr(_kernel_py, name)(rows)
    try:
        return getattr(_kernel, name)(rows)
    except OverflowError:
        return getattr(_kernel_py, name)(rows)


def rank(rows, backend=None) -> int:
    return _run("rank", rows, backend)


def rref(rows, backend=None):
    return _run("rref", rows, backend)


def solve(rows, rhs, ncols, backend=None):
    """Solve ``M x = rhs`` where ``rows[i]`` is row i of M (dict col -> value).

    ``rhs`` maps row index -> value.  Returns ``x`` as a dict col -> Fraction
    with all free variables zero, or ``None`` when the system is inconsistent.
    """
    aug = []
    for i, r in enumerate(rows):
        row = dict(r)
        v = rhs.get(i, 0)
        if v:
            row[ncols] = v
        aug.append(row)
    for i, v in rhs.items():
        if i >= len(rows) and v:
            return None
    x = {}
    for row in rref(aug, backend):
        piv = min(row)
        if piv == ncols:
            return None
        if ncols in row:
            x[piv] = Fraction(row[ncols], row[piv])
    return x


def kernel_basis(rows, ncols, backend=None):
    """Basis of the null space of M (one vector per free column), each a dict."""
    red = rref(rows, backend)
    pivots = {min(r): r for r in red}
    basis = []
    for f in range(ncols):
        if f in pivots:
            continue
        vec = {f: Fraction(1)}
        for p, r in pivots.items():
            if f in r:
                vec[p] = Fraction(-r[f], r[p])
        basis.append(vec)
    return basis
