"""Finite-dimensional cyclic A∞-algebras with exact structure constants.

Basis elements are addressed by index.  ``ops[k]`` maps an input index tuple
of length k to a sparse output vector ``{index: Fraction}``; ``ops[1]`` is
the differential.  Signs only ever use degree parities, so the same code
serves the ℤ- and ℤ/2-graded cases.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product

from . import linalg, trees
from .errors import ArityMismatch, MissingLowerArity, NonInvertiblePairing


def _vadd(acc, vec, scale):
    for k, v in vec.items():
        w = acc.get(k, 0) + scale * v
        if w:
            acc[k] = w
        else:
            acc.pop(k, None)


class CyclicAInfAlgebra:
    def __init__(self, names, degrees, pairing, ops, parity=0, grading="Z"):
        self.names = list(names)
        self.degrees = [int(d) for d in degrees]
        self.dim = len(self.names)
        self.pairing = [[Fraction(v) for v in row] for row in pairing]
        self.ops = {}
        for k, table in ops.items():
            clean = {}
            for inp, out in table.items():
                vec = {int(i): Fraction(c) for i, c in out.items() if c}
                if vec:
                    clean[tuple(inp)] = vec
            if clean:
                self.ops[int(k)] = clean
        self.parity = int(parity) % 2
        self.grading = grading
        self._copairing = None
        self._eval_cache = {}
        self._index = {n: i for i, n in enumerate(self.names)}

    def index(self, name) -> int:
        return self._index[name]

    def p(self, i) -> int:
        """Degree parity of basis element i."""
        return self.degrees[i] % 2

    def m(self, k, inputs) -> dict:
        return self.ops.get(k, {}).get(tuple(inputs), {})

    def max_op(self) -> int:
        return max(self.ops, default=1)

    def pair(self, a, b) -> Fraction:
        return self.pairing[a][b]

    def pair_vec(self, vec, b) -> Fraction:
        return sum((c * self.pairing[a][b] for a, c in vec.items()), Fraction(0))

    @property
    def copairing(self):
        """g^{ab}: the inverse of the pairing matrix (cached)."""
        if self._copairing is None:
            self._copairing = invert(self.pairing)
        return self._copairing

    def is_frobenius(self) -> bool:
        return all(k == 2 for k in self.ops)

    def __repr__(self):
        return f"CyclicAInfAlgebra({self.names}, parity={self.parity})"


def invert(matrix):
    n = len(matrix)
    rows = []
    for i, row in enumerate(matrix):
        r = {j: Fraction(v) for j, v in enumerate(row) if v}
        r[n + i] = Fraction(1)
        rows.append(r)
    red = linalg.rref(rows)
    if len(red) != n or any(min(r) >= n for r in red):
        raise NonInvertiblePairing("pairing matrix is degenerate")
    inv = [[Fraction(0)] * n for _ in range(n)]
    for r in red:
        i = min(r)
        for j in range(n, 2 * n):
            if j in r:
                inv[i][j - n] = Fraction(r[j], r[i])
    return inv


# -- the endomorphism operad -------------------------------------------------

def _sign(e):
    return -1 if e % 2 else 1


def evaluate_tree(A: CyclicAInfAlgebra, t, inputs, sign: int = 1) -> dict:
    """ρ((t, sign)) applied to the basis tuple ``inputs``."""
    if len(inputs) != trees.leaves(t):
        raise ArityMismatch(f"tree has {trees.leaves(t)} leaves, got {len(inputs)} inputs")
    out = _evaluate(A, t, tuple(inputs))
    return {k: sign * v for k, v in out.items()} if sign != 1 else dict(out)


@lru_cache(maxsize=None)
def _decomposition(t) -> int:
    """Sign s with (t,+) = s · (((c_k ∘_k T_k) ∘_{k−1} T_{k−1}) … ∘_1 T_1)."""
    k = len(t)
    cur, sign = trees.corolla(k), 1
    for i in range(k, 0, -1):
        if t[i - 1] != trees.LEAF:
            cur, s = trees.graft(cur, i, t[i - 1])
            sign *= s
    assert cur == t
    return sign


def _evaluate(A, t, inputs):
    key = (t, inputs)
    hit = A._eval_cache.get(key)
    if hit is None:
        hit = A._eval_cache[key] = _evaluate_uncached(A, t, inputs)
    return hit


def _evaluate_uncached(A, t, inputs):
    k = len(t)
    # evaluate children left to right, remembering where each block starts
    blocks, pos = [], 0
    for child in t:
        n = trees.leaves(child)
        blocks.append((child, inputs[pos:pos + n]))
        pos += n
    child_vals = []
    for child, ins in blocks:
        if child == trees.LEAF:
            child_vals.append({ins[0]: Fraction(1)})
        else:
            child_vals.append(_evaluate(A, child, ins))
    table = A.ops.get(k, {})
    out = {}
    if not table or any(not v for v in child_vals):
        return out
    sign0 = _decomposition(t)
    for choice in product(*[list(v.items()) for v in child_vals]):
        coeff = Fraction(sign0)
        before = 0
        for (child, _), (b, c) in zip(blocks, choice):
            if child != trees.LEAF and trees.degree(child) % 2 and before % 2:
                coeff = -coeff
            coeff *= c
            before += A.degrees[b]
        res = table.get(tuple(b for b, _ in choice))
        if res:
            _vadd(out, res, coeff)
    return out


def endo_compose(A, f, nf, i, g, ng, deg_g):
    """(f ∘_i g) for multilinear maps given as callables on basis tuples."""
    def h(inputs):
        pre = sum(A.degrees[a] for a in inputs[:i - 1])
        out = {}
        for b, c in g(inputs[i - 1:i - 1 + ng]).items():
            _vadd(out, f(inputs[:i - 1] + (b,) + inputs[i - 1 + ng:]), c)
        if (deg_g * pre) % 2:
            out = {k: -v for k, v in out.items()}
        return out
    return h


# -- validation --------------------------------------------------------------

@dataclass
class AlgebraReport:
    checks: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def fail(self, name, witness):
        self.checks[name] = False
        self.failures.append((name, witness))

    def passed(self, name):
        self.checks.setdefault(name, True)


def _deg_ok(A, d_in, d_out):
    if A.grading == "Z2":
        return (d_in - d_out) % 2 == 0
    return d_in == d_out


def validate_algebra(A: CyclicAInfAlgebra, N: int) -> AlgebraReport:
    """Check every axiom through arity N; each failed check keeps its first witness."""
    rep = AlgebraReport()
    B = range(A.dim)
    names = A.names

    def record(name, ok, witness):
        if ok:
            rep.passed(name)
        elif rep.checks.get(name, True):
            rep.fail(name, witness)

    for a in B:
        for b in B:
            gab = A.pair(a, b)
            record("pairing_symmetric", gab == _sign(A.p(a) * A.p(b)) * A.pair(b, a),
                   (names[a], names[b]))
            record("pairing_parity", not gab or (A.p(a) - A.p(b) - A.parity) % 2 == 0,
                   (names[a], names[b]))
    try:
        A.copairing
        rep.passed("pairing_nondegenerate")
    except NonInvertiblePairing:
        rep.fail("pairing_nondegenerate", None)

    for k, table in A.ops.items():
        for inp, out in table.items():
            d_in = sum(A.degrees[i] for i in inp) + k - 2
            for o in out:
                record("operation_degree", _deg_ok(A, d_in, A.degrees[o]),
                       (k, tuple(names[i] for i in inp), names[o]))

    for a0 in B:
        for a1 in B:
            lhs = A.pair_vec(A.m(1, (a0,)), a1)
            rhs = _sign(A.p(a0) + 1) * sum((c * A.pair(a0, b) for b, c in A.m(1, (a1,)).items()),
                                           Fraction(0))
            record("differential_self_adjoint", lhs == rhs, (names[a0], names[a1]))

    for n in range(1, N + 1):
        bad = sorted(inp for inp, v in ainf_relations_sparse(A, n).items() if v)
        record("ainf_relations", not bad, bad and (n, tuple(names[i] for i in bad[0])))
        bad = sorted(inp for inp in cyclic_candidates(A, n)
                     if len(set(cyclic_sides(A, n, inp))) > 1)
        record("cyclicity", not bad, bad and (n, tuple(names[i] for i in bad[0])))
    return rep


def ainf_relations_sparse(A, n) -> dict:
    """All nonzero left sides of the n-th A∞ relation, built from the sparse tables.

    Agrees with :func:`ainf_relation` on every tuple; tuples not listed are zero.
    """
    acc = {}
    for j in range(1, n + 1):
        inner = A.ops.get(j, {})
        outer = A.ops.get(n - j + 1, {})
        if not inner or not outer:
            continue
        by_output = {}
        for inp, vec in inner.items():
            for b, c in vec.items():
                by_output.setdefault(b, []).append((inp, c))
        for o_inp, o_vec in outer.items():
            for i in range(1, n - j + 2):
                pre = sum(A.degrees[a] for a in o_inp[:i - 1])
                for i_inp, c in by_output.get(o_inp[i - 1], ()):
                    s = _sign(i * (j + 1) + j * n + j * pre)
                    key = o_inp[:i - 1] + i_inp + o_inp[i:]
                    _vadd(acc.setdefault(key, {}), o_vec, s * c)
    return acc


def cyclic_candidates(A, n):
    """Tuples (a_0..a_n) on which either side of the cyclicity identity can be nonzero."""
    out = set()
    for inp, vec in A.ops.get(n, {}).items():
        for a in range(A.dim):
            if A.pair_vec(vec, a):
                out.add(inp + (a,))
                out.add((a,) + inp)
    return out


def ainf_relation(A, inp) -> dict:
    """Left side of the n-th A∞ relation on a basis tuple (zero when it holds)."""
    n = len(inp)
    out = {}
    for j in range(1, n + 1):
        for i in range(1, n - j + 2):
            pre = sum(A.degrees[a] for a in inp[:i - 1])
            s = _sign(i * (j + 1) + j * n + j * pre)
            inner = A.m(j, inp[i - 1:i - 1 + j])
            for b, c in inner.items():
                res = A.m(n - j + 1, inp[:i - 1] + (b,) + inp[i - 1 + j:])
                _vadd(out, res, s * c)
    return out


def cyclic_sides(A, n, inp):
    a = inp
    lhs = A.pair_vec(A.m(n, a[:n]), a[n])
    e = n + A.p(a[0]) * sum(A.p(x) for x in a[1:])
    rhs = _sign(e) * A.pair_vec(A.m(n, a[1:]), a[0])
    return lhs, rhs


# -- tensor products ---------------------------------------------------------

def tensor_product_algebra(A: CyclicAInfAlgebra, B: CyclicAInfAlgebra, diagonal, N: int):
    """A⊗B with m_k = Σ c · i(ρ_A(T1)⊗ρ_B(T2)) over Δ(c_k), for 2 ≤ k ≤ N."""
    for k in range(2, N + 1):
        if k not in diagonal:
            raise MissingLowerArity(f"diagonal does not reach arity {k}")
    pairs = [(a, b) for a in range(A.dim) for b in range(B.dim)]
    names = [f"{A.names[a]}|{B.names[b]}" for a, b in pairs]
    degrees = [A.degrees[a] + B.degrees[b] for a, b in pairs]
    pairing = [[_sign(B.p(b1) * A.p(a2)) * A.pair(a1, a2) * B.pair(b1, b2)
                for (a2, b2) in pairs] for (a1, b1) in pairs]
    idx = {p: i for i, p in enumerate(pairs)}
    ops = {}

    d1 = {}
    for a, b in pairs:
        out = {}
        for a2, c in A.m(1, (a,)).items():
            _vadd(out, {idx[(a2, b)]: c}, 1)
        for b2, c in B.m(1, (b,)).items():
            _vadd(out, {idx[(a, b2)]: c}, _sign(A.p(a)))
        if out:
            d1[(idx[(a, b)],)] = out
    ops[1] = d1

    for k in range(2, N + 1):
        by_left = {}
        for (t1, t2), c in diagonal[k].items():
            by_left.setdefault(t1, []).append((t2, c))
        rights = {t2 for ts in by_left.values() for t2, _ in ts}
        nz_a = _nonzero_evaluations(A, by_left, k)
        nz_b = _nonzero_evaluations(B, rights, k)
        table = {}
        for a_in, fas in nz_a.items():
            sa = sum(A.p(a) for a in a_in)
            for b_in, fbs in nz_b.items():
                koszul = sum(B.p(b_in[x]) * A.p(a_in[y])
                             for x in range(k) for y in range(x + 1, k))
                out = {}
                for t1, fa in fas.items():
                    for t2, c in by_left[t1]:
                        fb = fbs.get(t2)
                        if fb is None:
                            continue
                        s = c * _sign(koszul + sa * trees.degree(t2))
                        for a2, ca in fa.items():
                            for b2, cb in fb.items():
                                _vadd(out, {idx[(a2, b2)]: ca * cb}, s)
                if out:
                    table[tuple(idx[(a, b)] for a, b in zip(a_in, b_in))] = out
        ops[k] = table
    grading = "Z2" if "Z2" in (A.grading, B.grading) else "Z"
    return CyclicAInfAlgebra(names, degrees, pairing, ops, (A.parity + B.parity) % 2, grading)


def _nonzero_evaluations(A, tree_set, k):
    """input tuple -> {tree: ρ(tree)(inputs)} keeping only nonzero values."""
    out = {}
    for inp in product(range(A.dim), repeat=k):
        vals = {}
        for t in tree_set:
            v = _evaluate(A, t, inp)
            if v:
                vals[t] = v
        if vals:
            out[inp] = vals
    return out


def nonzero_witness(A, k):
    """First input tuple on which m_k is nonzero, as names, or None."""
    for inp, out in sorted(A.ops.get(k, {}).items()):
        if out:
            return tuple(A.names[i] for i in inp), {A.names[o]: c for o, c in out.items()}
    return None
