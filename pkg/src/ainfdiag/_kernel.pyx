# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled sparse integer row reduction.

Same contract as ``_kernel_py``: rows are dicts ``{column: int}`` on input,
stored rows are primitive with a positive leading entry.  Arithmetic is in
int64 with overflow detection; on overflow ``OverflowError`` is raised and
the caller falls back to the pure-Python kernel.
"""

from libc.stdint cimport int64_t
from libc.stdlib cimport malloc, free, realloc

BACKEND = "cython"

cdef extern from *:
    """
    static inline int ck_mul(long long a, long long b, long long *r) {
        return __builtin_mul_overflow(a, b, r);
    }
    static inline int ck_sub(long long a, long long b, long long *r) {
        return __builtin_sub_overflow(a, b, r);
    }
    """
    int ck_mul(long long a, long long b, long long *r) nogil
    int ck_sub(long long a, long long b, long long *r) nogil


cdef inline int64_t _gcd(int64_t a, int64_t b) nogil:
    cdef int64_t t
    if a < 0:
        a = -a
    if b < 0:
        b = -b
    while b:
        t = a % b
        a = b
        b = t
    return a


cdef class Row:
    cdef int64_t *cols
    cdef int64_t *vals
    cdef Py_ssize_t n

    def __dealloc__(self):
        free(self.cols)
        free(self.vals)

    def as_dict(self):
        cdef Py_ssize_t i
        return {self.cols[i]: self.vals[i] for i in range(self.n)}


cdef Row _row_from_dict(dict d):
    cdef Row r = Row.__new__(Row)
    items = sorted((k, v) for k, v in d.items() if v)
    r.n = len(items)
    r.cols = <int64_t *> malloc(max(r.n, 1) * sizeof(int64_t))
    r.vals = <int64_t *> malloc(max(r.n, 1) * sizeof(int64_t))
    cdef Py_ssize_t i
    for i in range(r.n):
        r.cols[i] = items[i][0]
        r.vals[i] = items[i][1]
    return r


cdef void _normalize(Row r) nogil:
    cdef Py_ssize_t i
    cdef int64_t g = 0
    if r.n == 0:
        return
    for i in range(r.n):
        g = _gcd(g, r.vals[i])
        if g == 1:
            break
    if r.vals[0] < 0:
        g = -g
    if g != 1:
        for i in range(r.n):
            r.vals[i] = r.vals[i] // g


cdef Row _combine(Row a, int64_t la, Row b, int64_t lb):
    """lb * a - la * b, zeros dropped."""
    cdef Row out = Row.__new__(Row)
    cdef Py_ssize_t cap = a.n + b.n
    out.cols = <int64_t *> malloc(max(cap, 1) * sizeof(int64_t))
    out.vals = <int64_t *> malloc(max(cap, 1) * sizeof(int64_t))
    cdef Py_ssize_t i = 0, j = 0, k = 0
    cdef long long x, y, z
    cdef int bad = 0
    with nogil:
        while i < a.n or j < b.n:
            if j >= b.n or (i < a.n and a.cols[i] < b.cols[j]):
                bad |= ck_mul(lb, a.vals[i], &x)
                out.cols[k] = a.cols[i]
                out.vals[k] = x
                k += 1
                i += 1
            elif i >= a.n or b.cols[j] < a.cols[i]:
                bad |= ck_mul(la, b.vals[j], &y)
                bad |= ck_sub(0, y, &z)
                out.cols[k] = b.cols[j]
                out.vals[k] = z
                k += 1
                j += 1
            else:
                bad |= ck_mul(lb, a.vals[i], &x)
                bad |= ck_mul(la, b.vals[j], &y)
                bad |= ck_sub(x, y, &z)
                if z != 0:
                    out.cols[k] = a.cols[i]
                    out.vals[k] = z
                    k += 1
                i += 1
                j += 1
    out.n = k
    if bad:
        raise OverflowError("int64 overflow in row reduction")
    _normalize(out)
    return out


cdef int64_t _entry(Row r, int64_t col):
    cdef Py_ssize_t lo = 0, hi = r.n, mid
    while lo < hi:
        mid = (lo + hi) // 2
        if r.cols[mid] < col:
            lo = mid + 1
        else:
            hi = mid
    if lo < r.n and r.cols[lo] == col:
        return r.vals[lo]
    return 0


cdef dict _echelon(rows):
    cdef dict pivots = {}
    cdef Row row, p
    for d in rows:
        row = _row_from_dict(d)
        _normalize(row)
        while row.n:
            c = row.cols[0]
            p = pivots.get(c)
            if p is None:
                pivots[c] = row
                break
            row = _combine(row, row.vals[0], p, p.vals[0])
    return pivots


def echelon(rows):
    return {c: r.as_dict() for c, r in _echelon(rows).items()}


def rank(rows, ncols=None):
    return len(_echelon(rows))


def rref(rows, ncols=None):
    cdef dict pivots = _echelon(rows)
    cdef dict done = {}
    cdef Row row, q
    cdef Py_ssize_t i
    cols = sorted(pivots)
    for c in reversed(cols):
        row = pivots[c]
        hits = [row.cols[i] for i in range(1, row.n) if row.cols[i] in done]
        for k in hits:
            q = done[k]
            row = _combine(row, _entry(row, k), q, q.vals[0])
        done[c] = row
    return [(<Row> done[c]).as_dict() for c in cols]
