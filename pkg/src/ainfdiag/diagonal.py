"""Cyclic diagonals A∞ → A∞⊗A∞ and cyclic homotopies between them.

A diagonal is stored as a table ``n -> Chain`` of tree pairs, the image of
the corolla c_n.  Construction is inductive: the right-hand side is the
image of ∂c_n under the already built part, and Δ(c_n) is the canonical
invariant solution of ∂x = rhs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import trees
from .chains import (
    Chain,
    EquivariantComplex,
    TensorSquareComplex,
    boundary_rank,
    compose_pairs,
    cycle_basis,
    flip_pairs,
    pair_boundary,
    pair_degree,
    pair_key,
    pair_rotate,
    reduce_modulo,
    rotate_pairs,
    solve_boundary,
    tensor_boundary,
    tensor_compose,
)
from .errors import EndpointMismatch, MissingLowerArity, NotSolvable


@dataclass
class Diagonal:
    entries: dict
    cyclic: bool = True
    cocommutative: bool = False

    @property
    def max_arity(self) -> int:
        return max(self.entries)

    def __getitem__(self, n) -> Chain:
        try:
            return self.entries[n]
        except KeyError:
            raise MissingLowerArity(f"diagonal has no entry for arity {n}") from None

    def __contains__(self, n):
        return n in self.entries

    def restrict(self, m: int) -> "Diagonal":
        return Diagonal({n: c for n, c in self.entries.items() if n <= m},
                        self.cyclic, self.cocommutative)


def corolla_pair(n):
    c = trees.corolla(n)
    return (c, c)


def operadic_terms(n):
    """Index triples (j, i, sign) of ∂c_n = Σ sign · c_{n−j+1} ∘_i c_j."""
    out = []
    for j in range(2, n):
        for i in range(1, n - j + 2):
            out.append((j, i, -1 if (i * (j + 1) + j * n) % 2 else 1))
    return out


def diagonal_rhs(n: int, diag) -> Chain:
    """Δ(∂c_n) computed from the entries of arity < n."""
    out = Chain()
    for j, i, s in operadic_terms(n):
        out.add_chain(tensor_compose(diag[n - j + 1], i, diag[j]), s)
    return out


def tree_diagonal(diag, t) -> Chain:
    """Δ on an arbitrary tree, assembled operadically from the corolla entries."""
    if t == trees.LEAF:
        return Chain({(trees.LEAF, trees.LEAF): 1})
    k = len(t)
    sign = 1
    cur_tree, cur = trees.corolla(k), Chain(diag[k])
    for i in range(k, 0, -1):
        child = t[i - 1]
        if child != trees.LEAF:
            cur_tree, s = trees.graft(cur_tree, i, child)
            sign *= s
            cur = tensor_compose(cur, i, tree_diagonal(diag, child))
    return cur * sign


def equivariant_average(gamma: Chain, n: int, cyclic: bool = True, flip: bool = False) -> Chain:
    """Average over r⊗r with the (−1)^n character, then over the flip if asked."""
    out = Chain(gamma)
    if cyclic:
        acc = Chain()
        x = Chain(gamma)
        sgn = -1 if n % 2 else 1
        for i in range(n + 1):
            acc.add_chain(x, Fraction(sgn ** i, n + 1))
            x = rotate_pairs(x)
        out = acc
    if flip:
        out = (out + flip_pairs(out)) * Fraction(1, 2)
    return out


def _canonical(complex_, x: Chain, d: int) -> Chain:
    return reduce_modulo(x, cycle_basis(complex_, d), complex_.basis(d))


def _solve_invariant(n, rhs, cyclic, flip):
    comp = EquivariantComplex(n, flip=flip, rotate=cyclic)
    coords = comp.coordinates(rhs, n - 3)
    if coords is None:
        raise NotSolvable(f"right-hand side at arity {n} is not invariant", residual=rhs)
    y = solve_boundary(comp, coords, n - 3)
    return comp.expand(_canonical(comp, y, n - 2))


def _solve_then_average(n, rhs, cyclic, flip):
    base = TensorSquareComplex(n)
    x = equivariant_average(solve_boundary(base, rhs, n - 3), n, cyclic, flip)
    if not (cyclic or flip):
        return _canonical(base, x, n - 2)
    comp = EquivariantComplex(n, flip=flip, rotate=cyclic)
    return comp.expand(_canonical(comp, comp.coordinates(x, n - 2), n - 2))


def build_diagonal(max_arity: int, cocommutative: bool = False, cyclic: bool = True,
                   method: str = "invariant") -> Diagonal:
    """Inductively build Δ(c_2..c_max_arity) with the canonical free choices.

    ``method="invariant"`` solves inside the invariant subcomplex;
    ``method="average"`` solves in the full tensor square and then averages.
    Both return the same table.
    """
    if max_arity < 2:
        raise ValueError("max_arity must be at least 2")
    solver = {"invariant": _solve_invariant, "average": _solve_then_average}[method]
    diag = Diagonal({2: Chain({corolla_pair(2): 1})}, cyclic, cocommutative)
    for n in range(3, max_arity + 1):
        rhs = diagonal_rhs(n, diag)
        if cyclic or cocommutative:
            diag.entries[n] = solver(n, rhs, cyclic, cocommutative)
        else:
            base = TensorSquareComplex(n)
            diag.entries[n] = _canonical(base, solve_boundary(base, rhs, n - 3), n - 2)
    return diag


def particular_solution(n: int, diag) -> Chain:
    """A solution of ∂x = Δ(∂c_n) in the full complex, without averaging."""
    return solve_boundary(TensorSquareComplex(n), diagonal_rhs(n, diag), n - 3)


# -- verification ------------------------------------------------------------

@dataclass
class DiagonalReport:
    checks: dict = field(default_factory=dict)   # n -> {check: bool}
    failures: list = field(default_factory=list)  # (n, check, witness pair encoding)

    @property
    def ok(self) -> bool:
        return not self.failures

    def record(self, n, name, diff):
        self.checks.setdefault(n, {})[name] = not diff
        if diff:
            w = min(diff, key=pair_key)
            self.failures.append((n, name, "%s ⊗ %s" % pair_key(w)))


def verify_diagonal(diag: Diagonal) -> DiagonalReport:
    rep = DiagonalReport()
    for n in sorted(diag.entries):
        x = diag.entries[n]
        bad_degree = Chain((p, c) for p, c in x.items() if pair_degree(p) != n - 2
                           or trees.leaves(p[0]) != n)
        rep.record(n, "degree", bad_degree)
        if n == 2:
            rep.record(n, "normalization", x - Chain({corolla_pair(2): 1}))
        try:
            rhs = diagonal_rhs(n, diag) if n > 2 else Chain()
        except MissingLowerArity:
            rhs = None
        if rhs is not None:
            rep.record(n, "chain_map", tensor_boundary(x) - rhs)
        if diag.cyclic:
            rep.record(n, "cyclic", rotate_pairs(x) - x * (-1) ** n)
        if diag.cocommutative:
            rep.record(n, "cocommutative", flip_pairs(x) - x)
    return rep


def freedom_dimension(n: int, cocommutative: bool = False, cyclic: bool = True) -> int:
    """Dimension of the closed invariant elements of degree n−2 in (A∞⊗A∞)(n)."""
    if n < 3:
        raise ValueError("freedom_dimension needs n >= 3")
    comp = EquivariantComplex(n, flip=cocommutative, rotate=cyclic)
    return len(comp.basis(n - 2)) - boundary_rank(comp, n - 2)


# -- forms on the interval ---------------------------------------------------
# A chain with form coefficients uses keys (pair, k, p): the pair tensored
# with t^p (k = 0) or t^p dt (k = 1).  dt has degree −1.

@dataclass(frozen=True)
class IntervalForm:
    poly: tuple = ()
    dt_poly: tuple = ()

    def at(self, t) -> Fraction:
        return sum((Fraction(c) * Fraction(t) ** p for p, c in enumerate(self.poly)), Fraction(0))

    def d(self) -> "IntervalForm":
        return IntervalForm((), tuple(p * c for p, c in enumerate(self.poly))[1:])


def form_degree(key) -> int:
    return pair_degree(key[0]) - key[1]


def form_boundary(key):
    pair, k, p = key
    out = [((q, k, p), s) for q, s in pair_boundary(pair)]
    if k == 0 and p > 0:
        out.append(((pair, 1, p - 1), -p if pair_degree(pair) % 2 else p))
    return out


def form_rotate(key):
    (q, s), = pair_rotate(key[0])
    return [((q, key[1], key[2]), s)]


def form_compose(x: Chain, i: int, y: Chain) -> Chain:
    """(a⊗ω) ∘_i (b⊗θ) = (−1)^{|ω||b|} (a∘_i b)⊗ωθ."""
    out = Chain()
    for (p, k, a), u in x.items():
        for (q, l, b), v in y.items():
            if k and l:
                continue
            r, s = compose_pairs(p, i, q)
            if k and pair_degree(q) % 2:
                s = -s
            out.add((r, k + l, a + b), s * u * v)
    return out


def constant_form(x: Chain) -> Chain:
    return Chain(((p, 0, 0), c) for p, c in x.items())


def evaluate_at(x: Chain, t) -> Chain:
    out = Chain()
    t = Fraction(t)
    for (p, k, a), c in x.items():
        if k == 0:
            out.add(p, c * t ** a)
    return out


def t_degree(x: Chain) -> int:
    return max((a + k for (_, k, a) in x), default=0)


class FormComplex:
    """(A∞⊗A∞)(n) ⊗ Ω truncated to t-degree ≤ N (and ≤ N−1 on dt terms)."""

    def __init__(self, n: int, N: int):
        self.base = TensorSquareComplex(n)
        self.N = N
        self._basis = {}

    def basis(self, d):
        if d not in self._basis:
            out = [(p, 0, a) for p in self.base.basis(d) for a in range(self.N + 1)]
            out += [(p, 1, a) for p in self.base.basis(d + 1) for a in range(self.N)]
            out.sort(key=self.sort_key)
            self._basis[d] = out
        return self._basis[d]

    def boundary(self, key):
        return form_boundary(key)

    def sort_key(self, key):
        return (pair_key(key[0]), key[1], key[2])


@dataclass
class Homotopy:
    entries: dict
    start: Diagonal
    end: Diagonal

    @property
    def max_arity(self):
        return max(self.entries)

    def __getitem__(self, n):
        return self.entries[n]

    def forms(self, n) -> dict:
        """Pair -> IntervalForm view of the arity-n entry."""
        acc = {}
        for (p, k, a), c in self.entries[n].items():
            poly, dt = acc.setdefault(p, ({}, {}))
            (dt if k else poly)[a] = c
        out = {}
        for p, (poly, dt) in acc.items():
            out[p] = IntervalForm(
                tuple(poly.get(a, Fraction(0)) for a in range(max(poly, default=-1) + 1)),
                tuple(dt.get(a, Fraction(0)) for a in range(max(dt, default=-1) + 1)))
        return out


def homotopy_rhs(n: int, h) -> Chain:
    out = Chain()
    for j, i, s in operadic_terms(n):
        out.add_chain(form_compose(h[n - j + 1], i, h[j]), s)
    return out


def build_homotopy(start: Diagonal, end: Diagonal, max_arity: int) -> Homotopy:
    """Cyclic elementary homotopy from ``start`` to ``end`` through ``max_arity``."""
    if start[2] != end[2]:
        raise EndpointMismatch("the two diagonals differ on c_2")
    h = {2: constant_form(start[2])}
    for n in range(3, max_arity + 1):
        d1, d2 = start[n], end[n]
        rhs = homotopy_rhs(n, h)
        # (1−t)Δ1 + tΔ2 plus a correction z with D z = residual
        h0 = constant_form(d1)
        for p, c in (d2 - d1).items():
            h0.add((p, 0, 1), c)
        residual = rhs - h0.map(form_boundary)
        N = max(n - 1, t_degree(residual) + 1)
        while True:
            try:
                z = solve_boundary(FormComplex(n, N), residual, n - 3)
                break
            except NotSolvable:
                if N > 4 * n:
                    raise
                N += 1
        h1 = h0 + z
        base = TensorSquareComplex(n)
        a = solve_boundary(base, evaluate_at(h1, 0) - d1, n - 2)
        b = solve_boundary(base, evaluate_at(h1, 1) - d2, n - 2)
        da, db = tensor_boundary(a), tensor_boundary(b)
        sgn = -1 if n % 2 else 1
        h2 = Chain(h1)
        for p, c in da.items():
            h2.add((p, 0, 0), -c)
            h2.add((p, 0, 1), c)
        for p, c in db.items():
            h2.add((p, 0, 1), -c)
        for p, c in (a - b).items():
            h2.add((p, 1, 0), -sgn * c)
        acc = Chain()
        x = h2
        for i in range(n + 1):
            acc.add_chain(x, Fraction(sgn ** i, n + 1))
            x = x.map(form_rotate)
        h[n] = acc
    return Homotopy(h, start, end)


@dataclass
class HomotopyReport:
    checks: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.failures

    def record(self, n, name, diff):
        self.checks.setdefault(n, {})[name] = not diff
        if diff:
            self.failures.append((n, name, repr(min(diff, key=repr))))


def verify_homotopy(h: Homotopy) -> HomotopyReport:
    rep = HomotopyReport()
    for n in sorted(h.entries):
        x = h.entries[n]
        rep.record(n, "start", evaluate_at(x, 0) - h.start[n])
        rep.record(n, "end", evaluate_at(x, 1) - h.end[n])
        rhs = homotopy_rhs(n, h.entries) if n > 2 else Chain()
        rep.record(n, "chain_map", x.map(form_boundary) - rhs)
        rep.record(n, "cyclic", x.map(form_rotate) - x * (-1) ** n)
    return rep
