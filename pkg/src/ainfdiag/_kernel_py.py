"""Pure-Python sparse integer row reduction (fallback for the compiled kernel).

Rows are dicts ``{column: int}``.  Every stored row is primitive (content 1)
with a positive leading entry, so the reduced row echelon form returned by
:func:`rref` is unique for a given column order.
"""

from math import gcd

BACKEND = "python"


def _normalize(row):
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            break
    lead = row[min(row)]
    if lead < 0:
        g = -g
    if g != 1:
        for k in row:
            row[k] //= g
    return row


def _combine(a, lead_a, b, lead_b):
    """Return lead_b * a - lead_a * b with zeros dropped."""
    out = {k: lead_b * v for k, v in a.items()}
    for k, v in b.items():
        w = out.get(k, 0) - lead_a * v
        if w:
            out[k] = w
        else:
            out.pop(k, None)
    return out


def echelon(rows):
    """Row echelon basis of the span of ``rows``: dict pivot column -> row."""
    pivots = {}
    for r in rows:
        row = {k: v for k, v in r.items() if v}
        while row:
            c = min(row)
            p = pivots.get(c)
            if p is None:
                pivots[c] = _normalize(row)
                break
            row = _combine(row, row[c], p, p[c])
            if row:
                _normalize(row)
    return pivots


def rank(rows, ncols=None):
    return len(echelon(rows))


def rref(rows, ncols=None):
    """Reduced row echelon form as a list of rows sorted by pivot column."""
    pivots = echelon(rows)
    cols = sorted(pivots)
    done = {}
    for c in reversed(cols):
        row = pivots[c]
        # reduced rows carry no entries in other pivot columns, so one pass suffices
        for k in [k for k in row if k != c and k in done]:
            q = done[k]
            row = _combine(row, row[k], q, q[k])
        done[c] = _normalize(row)
    return [done[c] for c in cols]
