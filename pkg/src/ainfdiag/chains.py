"""Exact chains, finite graded complexes and the boundary solver.

A chain is a sparse map from hashable basis keys to ``Fraction``.  A complex
is anything with ``basis(d)`` (sorted, deterministic), ``boundary(key)``
(iterable of ``(key, coeff)``) and ``sort_key(key)``.
"""

from __future__ import annotations

from fractions import Fraction

from . import linalg, trees
from .errors import ArityMismatch, IndexOutOfRange, NotSolvable


class Chain(dict):
    """Linear combination ``{basis_key: Fraction}`` with zero terms pruned."""

    def __init__(self, items=()):
        super().__init__()
        if isinstance(items, dict):
            items = items.items()
        for k, v in items:
            self.add(k, v)

    def add(self, key, coeff):
        if not coeff:
            return
        v = self.get(key, 0) + coeff
        if v:
            self[key] = Fraction(v)
        else:
            del self[key]

    def add_chain(self, other, scale=1):
        for k, v in other.items():
            self.add(k, scale * v)
        return self

    def __add__(self, other):
        return Chain(self).add_chain(other)

    def __sub__(self, other):
        return Chain(self).add_chain(other, -1)

    def __neg__(self):
        return Chain((k, -v) for k, v in self.items())

    def __mul__(self, q):
        return Chain((k, q * v) for k, v in self.items())

    __rmul__ = __mul__

    def map(self, f):
        """Apply a linear map given on basis keys by ``f(key) -> iterable of (key, coeff)``."""
        out = Chain()
        for k, v in self.items():
            for k2, c in f(k):
                out.add(k2, v * c)
        return out

    def sorted_items(self, key):
        return sorted(self.items(), key=lambda kv: key(kv[0]))


def apply_linear(f, chain):
    return chain.map(f)


# -- pair (tensor) operations ------------------------------------------------

def pair_degree(p) -> int:
    return trees.degree(p[0]) + trees.degree(p[1])


def pair_key(p):
    return (trees.encode(p[0]), trees.encode(p[1]))


def pair_boundary(p):
    u1, u2 = p
    out = [((v, u2), s) for v, s in trees.boundary(u1)]
    sgn = -1 if trees.degree(u1) % 2 else 1
    out += [((u1, v), sgn * s) for v, s in trees.boundary(u2)]
    return out


def pair_rotate(p):
    a, sa = trees.rotate(p[0])
    b, sb = trees.rotate(p[1])
    return [((a, b), sa * sb)]


def pair_flip(p):
    sign = -1 if (trees.degree(p[0]) * trees.degree(p[1])) % 2 else 1
    return [((p[1], p[0]), sign)]


def tensor_boundary(x: Chain) -> Chain:
    return x.map(pair_boundary)


def rotate_pairs(x: Chain, times: int = 1) -> Chain:
    for _ in range(times):
        x = x.map(pair_rotate)
    return x


def flip_pairs(x: Chain) -> Chain:
    return x.map(pair_flip)


def _arity(x: Chain):
    ar = {trees.leaves(p[0]) for p in x}
    if len(ar) > 1:
        raise ArityMismatch(f"chain mixes arities {sorted(ar)}")
    return ar.pop() if ar else None


def compose_pairs(p, i, q):
    """``(U1⊗U2) ∘_i (V1⊗V2)`` on basis pairs: returns ``(pair, sign)``."""
    t1, s1 = trees.graft(p[0], i, q[0])
    t2, s2 = trees.graft(p[1], i, q[1])
    sign = s1 * s2
    if (trees.degree(p[1]) * trees.degree(q[0])) % 2:
        sign = -sign
    return (t1, t2), sign


def tensor_compose(x: Chain, i: int, y: Chain) -> Chain:
    n1 = _arity(x)
    _arity(y)
    if n1 is not None and not 1 <= i <= n1:
        raise IndexOutOfRange(f"index {i} outside 1..{n1}")
    out = Chain()
    for p, a in x.items():
        if trees.leaves(p[1]) != trees.leaves(p[0]):
            raise ArityMismatch("tensor factors have different arities")
        for q, b in y.items():
            r, s = compose_pairs(p, i, q)
            out.add(r, s * a * b)
    return out


# -- complexes ---------------------------------------------------------------

class TreeComplex:
    """Cellular chains C_*(K(n)) with the tree basis."""

    def __init__(self, n: int):
        self.n = n
        self.top = n - 2

    def basis(self, d):
        if not 0 <= d <= self.top:
            return []
        return trees.enumerate_trees(self.n, d)

    def boundary(self, key):
        return trees.boundary(key)

    def sort_key(self, key):
        return trees.encode(key)

    def degree(self, key):
        return trees.degree(key)


class TensorSquareComplex:
    """(A∞⊗A∞)(n): pairs of n-leaf trees with the Koszul tensor differential."""

    def __init__(self, n: int):
        self.n = n
        self.top = 2 * (n - 2)
        self._basis = {}

    def basis(self, d):
        if d not in self._basis:
            out = []
            for a in range(max(0, d - (self.n - 2)), min(d, self.n - 2) + 1):
                for u in trees.enumerate_trees(self.n, a):
                    for v in trees.enumerate_trees(self.n, d - a):
                        out.append((u, v))
            out.sort(key=pair_key)
            self._basis[d] = out
        return self._basis[d]

    def boundary(self, key):
        return pair_boundary(key)

    def sort_key(self, key):
        return pair_key(key)

    def degree(self, key):
        return pair_degree(key)


class EquivariantComplex:
    """Signed-invariant subcomplex of (A∞⊗A∞)(n).

    The group is generated by the rotation r⊗r (order n+1, unless ``rotate``
    is false) and, if ``flip``, the Koszul flip τ.  Invariance means
    r·x = (−1)^n x and τ·x = x.  Basis keys are orbit representatives (least pair key); the corresponding basis
    vector is the orbit sum with coefficient 1 on the representative.  Orbits
    whose stabiliser acts by a nontrivial character contribute nothing.
    """

    def __init__(self, n: int, flip: bool = False, rotate: bool = True):
        self.n = n
        self.flip = flip
        self.rotate = rotate
        self.base = TensorSquareComplex(n)
        self.top = self.base.top
        self._basis = {}
        self._vec = {}

    def _orbit(self, p):
        """Map orbit element -> coefficient in the orbit sum, or None if it vanishes."""
        chi_r = -1 if self.n % 2 else 1
        coeff = {p: 1}
        frontier = [p]
        gens = [(pair_rotate, chi_r)] if self.rotate else []
        if self.flip:
            gens.append((pair_flip, 1))
        ok = True
        while frontier:
            q = frontier.pop()
            for g, chi in gens:
                (q2, s), = g(q)
                c = coeff[q] * s * chi
                if q2 in coeff:
                    if coeff[q2] != c:
                        ok = False
                else:
                    coeff[q2] = c
                    frontier.append(q2)
        return coeff if ok else None

    def basis(self, d):
        if d not in self._basis:
            seen = set()
            reps = []
            for p in self.base.basis(d):
                if p in seen:
                    continue
                orb = self._orbit(p)
                if orb is None:
                    seen.update(self._members(p))
                    continue
                seen.update(orb)
                rep = min(orb, key=pair_key)
                self._vec[rep] = Chain(self._orbit(rep))
                reps.append(rep)
            reps.sort(key=pair_key)
            self._basis[d] = reps
        return self._basis[d]

    def _members(self, p):
        out = {p}
        frontier = [p]
        gens = ([pair_rotate] if self.rotate else []) + ([pair_flip] if self.flip else [])
        while frontier:
            q = frontier.pop()
            for g in gens:
                (q2, _), = g(q)
                if q2 not in out:
                    out.add(q2)
                    frontier.append(q2)
        return out

    def vector(self, rep) -> Chain:
        if rep not in self._vec:
            self.basis(pair_degree(rep))
        return self._vec[rep]

    def boundary(self, rep):
        img = tensor_boundary(self.vector(rep))
        reps = set(self.basis(pair_degree(rep) - 1))
        return [(k, v) for k, v in img.items() if k in reps]

    def coordinates(self, x: Chain, d=None):
        """Coordinates of an invariant chain, or None if ``x`` is not invariant."""
        if not x:
            return Chain()
        if d is None:
            d = pair_degree(next(iter(x)))
        reps = self.basis(d)
        coords = Chain((r, x[r]) for r in reps if r in x)
        if self.expand(coords) != x:
            return None
        return coords

    def expand(self, coords: Chain) -> Chain:
        out = Chain()
        for r, c in coords.items():
            out.add_chain(self.vector(r), c)
        return out

    def sort_key(self, key):
        return pair_key(key)

    def degree(self, key):
        return pair_degree(key)


# -- linear algebra on complexes ---------------------------------------------

def _index(complex_, d):
    basis = complex_.basis(d)
    return basis, {b: i for i, b in enumerate(basis)}


def boundary_columns(complex_, d):
    """∂_d as a list of columns (one dict per basis element of degree d)."""
    src = complex_.basis(d)
    _, idx = _index(complex_, d - 1)
    cols = []
    for b in src:
        col = {}
        for k, c in complex_.boundary(b):
            j = idx[k]
            col[j] = col.get(j, 0) + c
        cols.append({j: c for j, c in col.items() if c})
    return cols


def boundary_rows(complex_, d):
    """∂_d as rows indexed by degree d−1 basis elements."""
    cols = boundary_columns(complex_, d)
    rows = [dict() for _ in complex_.basis(d - 1)]
    for j, col in enumerate(cols):
        for i, c in col.items():
            rows[i][j] = c
    return rows


def boundary_rank(complex_, d) -> int:
    if not complex_.basis(d) or not complex_.basis(d - 1):
        return 0
    return linalg.rank(boundary_columns(complex_, d))


def homology_rank(complex_, d) -> int:
    return len(complex_.basis(d)) - boundary_rank(complex_, d) - boundary_rank(complex_, d + 1)


def cycle_basis(complex_, d):
    """Basis of ker ∂_d, as chains, from the RREF of ∂_d."""
    src = complex_.basis(d)
    rows = boundary_rows(complex_, d) if complex_.basis(d - 1) else []
    vecs = linalg.kernel_basis(rows, len(src))
    return [Chain((src[j], c) for j, c in v.items()) for v in vecs]


def apply_boundary(complex_, x: Chain) -> Chain:
    return x.map(complex_.boundary)


def solve_boundary(complex_, b: Chain, d: int, check: bool = True) -> Chain:
    """Return x of degree d+1 with ∂x = b (b of degree d); free variables are zero."""
    if not b:
        return Chain()
    _, idx = _index(complex_, d)
    rhs = {}
    for k, v in b.items():
        if k not in idx:
            raise NotSolvable(f"{k!r} is not a basis element of degree {d}", residual=b)
        rhs[idx[k]] = v
    src = complex_.basis(d + 1)
    rows = boundary_rows(complex_, d + 1)
    sol = linalg.solve(rows, rhs, len(src))
    if sol is None:
        raise NotSolvable("right-hand side is not a boundary", residual=_residual(complex_, b, d))
    x = Chain((src[j], c) for j, c in sol.items())
    if check and apply_boundary(complex_, x) != b:
        raise AssertionError("boundary solver produced a wrong solution")
    return x


def _residual(complex_, b, d):
    """Normal form of b modulo the image of ∂_{d+1} (nonzero iff b is not a boundary)."""
    basis, idx = _index(complex_, d)
    image = linalg.rref(boundary_columns(complex_, d + 1))
    vec = {idx[k]: v for k, v in b.items()}
    for row in image:
        p = min(row)
        if p in vec:
            f = vec[p] / row[p]
            for j, c in row.items():
                w = vec.get(j, 0) - f * c
                if w:
                    vec[j] = w
                else:
                    vec.pop(j, None)
    return Chain((basis[j], v) for j, v in vec.items())


def reduce_modulo(x: Chain, spanning, order):
    """Reduce ``x`` against the RREF of the chains in ``spanning``.

    ``order`` is the list of basis keys fixing the column order.  The result
    is the unique element of x + span with zero entries at every pivot.
    """
    idx = {k: i for i, k in enumerate(order)}
    rows = [{idx[k]: v for k, v in s.items()} for s in spanning]
    vec = {idx[k]: v for k, v in x.items()}
    for row in linalg.rref(rows):
        p = min(row)
        if p in vec:
            f = Fraction(vec[p], row[p])
            for j, c in row.items():
                w = vec.get(j, 0) - f * c
                if w:
                    vec[j] = w
                else:
                    vec.pop(j, None)
    return Chain((order[j], v) for j, v in vec.items())
