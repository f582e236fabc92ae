"""The acceptance criteria as runnable checks.

Each ``criterion_N`` returns a :class:`Criterion` whose ``ok`` is an exact
comparison (no tolerances).  ``run_all`` is what ``ainfdiag selftest`` and
the acceptance test module execute.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from . import fixtures, trees
from .algebra import nonzero_witness, tensor_product_algebra, validate_algebra
from .chains import Chain, TreeComplex, apply_boundary, homology_rank
from .diagonal import (
    build_diagonal,
    build_homotopy,
    freedom_dimension,
    verify_diagonal,
    verify_homotopy,
)
from .graphs import (
    Oriented,
    RibbonGraph,
    a_sign,
    canonicalize,
    contract_edge,
    expand_vertex,
    frame,
    generate_subcomplex,
    graph_diagonal,
    graph_from_key,
    key_boundary,
    key_diagonal,
    oriented,
    pair_boundary_keys,
    tree_map,
    vertex_splits,
)
from .kontsevich import brute_force_value, kontsevich_value, verify_tensor_formula
from .linalg import rank

F = Fraction


@dataclass
class Criterion:
    number: int
    title: str
    ok: bool
    detail: str = ""
    parts: dict = field(default_factory=dict)

    def line(self) -> str:
        return f"[{'PASS' if self.ok else 'FAIL'}] {self.number}. {self.title}: {self.detail}"


def _summary(parts):
    return ", ".join(f"{k}={'ok' if v else 'FAIL'}" for k, v in parts.items())


# -- 1 -----------------------------------------------------------------------

def criterion_1() -> Criterion:
    d3 = build_diagonal(3)
    d4 = build_diagonal(4, cocommutative=True)
    parts = {
        "delta3": d3[3] == fixtures.reference_delta3(),
        "delta4": d4[4] == fixtures.reference_delta4(F(-1, 10)) and d4[3] == fixtures.reference_delta3(),
        "gamma11_zero": fixtures.gamma_table(F(-1, 10))[(1, 1)] == 0,
    }
    return Criterion(1, "reference Δ(c3), Δ(c4) at x = -1/10", all(parts.values()), _summary(parts), parts)


# -- 2 -----------------------------------------------------------------------

FREEDOM_EXPECTED = {(4, False): 1, (4, True): 0, (5, False): 5, (5, True): 4}


def criterion_2() -> Criterion:
    got = {k: freedom_dimension(k[0], cocommutative=k[1]) for k in FREEDOM_EXPECTED}
    parts = {f"n={n}{' cocomm' if c else ''}": got[(n, c)] == e
             for (n, c), e in FREEDOM_EXPECTED.items()}
    detail = "; ".join(f"n={n}{' cocomm' if c else ''}: got {got[(n, c)]}, expected {e}"
                       for (n, c), e in FREEDOM_EXPECTED.items())
    return Criterion(2, "freedom dimensions", all(parts.values()), detail, parts)


# -- 3 -----------------------------------------------------------------------

def catalan(k: int) -> int:
    """Binary trees with k internal vertices, by the convolution recursion."""
    c = [1]
    for m in range(1, k + 1):
        c.append(sum(c[i] * c[m - 1 - i] for i in range(m)))
    return c[k]


def criterion_3(max_n: int = 7) -> Criterion:
    parts = {}
    counts = []
    for n in range(2, max_n + 1):
        cx = TreeComplex(n)
        sq = all(not apply_boundary(cx, apply_boundary(cx, Chain({t: 1})))
                 for d in range(n - 1) for t in cx.basis(d))
        hom = [homology_rank(cx, d) for d in range(n - 1)]
        counts.append(len(cx.basis(0)))
        parts[f"n={n}"] = sq and hom == [1] + [0] * (n - 2) and counts[-1] == catalan(n - 1)
    detail = f"{_summary(parts)}; degree-0 counts {counts}"
    return Criterion(3, "associahedron complexes", all(parts.values()), detail, parts)


# -- 4 -----------------------------------------------------------------------

def criterion_4(max_arity: int = 6) -> Criterion:
    diag = build_diagonal(max_arity, cocommutative=True)
    rep = verify_diagonal(diag)
    parts = {f"n={n}": all(c.values()) for n, c in sorted(rep.checks.items())}
    detail = _summary(parts) + ("" if rep.ok else f"; first failure {rep.failures[0]}")
    return Criterion(4, f"cyclic cocommutative Δ through arity {max_arity}", rep.ok, detail, parts)


# -- 5 -----------------------------------------------------------------------

def criterion_5() -> Criterion:
    start = fixtures.reference_diagonal(F(0))
    end = fixtures.reference_diagonal(F(-1, 10))
    h = build_homotopy(start, end, 4)
    rep = verify_homotopy(h)
    parts = {}
    for n, checks in sorted(rep.checks.items()):
        for name, ok in checks.items():
            parts[name] = parts.get(name, True) and ok
    return Criterion(5, "homotopy x=0 to x=-1/10", rep.ok, _summary(parts), parts)


# -- 6 -----------------------------------------------------------------------

def criterion_6(max_arity: int = 6) -> Criterion:
    algs = fixtures.test_algebras()
    diag = build_diagonal(max_arity, cocommutative=True)
    parts = {}
    witnesses = []
    for a, b in [("Q", "Q"), ("dual_even", "dual_even"), ("dual_odd", "dual_odd")]:
        AB = tensor_product_algebra(algs[a], algs[b], diag, max_arity)
        rep = validate_algebra(AB, max_arity)
        parts[f"{a}⊗{b} valid"] = rep.ok
        w = nonzero_witness(AB, 4)
        parts[f"{a}⊗{b} m4≠0"] = w is not None
        if w:
            witnesses.append(f"{a}⊗{b}: {w[0]}")
    detail = _summary(parts)
    if witnesses:
        detail += "; witnesses " + ", ".join(witnesses)
    return Criterion(6, "tensor products through arity 6", all(parts.values()), detail, parts)


# -- 7 -----------------------------------------------------------------------

def _subcomplex_keys(og):
    cx = generate_subcomplex(og)
    return cx, [k for d in cx.degrees for k in cx.basis(d)]


def boundary_squares_to_zero(keys, twisted) -> bool:
    for k in keys:
        first = Chain(key_boundary(k, twisted))
        second = Chain()
        for k2, c in first.items():
            second.add_chain(Chain(key_boundary(k2, twisted)), c)
        if second:
            return False
    return True


def phi_report(og: Oriented, fr=None) -> dict:
    """Rank, dimension and chain-map data for φ_Γ / ψ_Γ on all tree tuples."""
    fr = frame(og.graph) if fr is None else fr
    tuples = list(product(*[trees.all_trees(n) for n in fr.arities]))
    images = [tree_map(og, fr, ts) for ts in tuples]
    keys = sorted({k for im in images for k in im})
    index = {k: i for i, k in enumerate(keys)}
    r = rank([{index[k]: c for k, c in im.items()} for im in images])
    chain_map = True
    for ts, im in zip(tuples, images):
        lhs = Chain()
        for k, c in im.items():
            lhs.add_chain(Chain(key_boundary(k, og.twisted)), c)
        rhs, before = Chain(), 0
        for m, t in enumerate(ts):
            for u, s in trees.boundary(t):
                rhs.add_chain(tree_map(og, fr, ts[:m] + (u,) + ts[m + 1:]), s * (-1) ** before)
            before += trees.degree(t)
        chain_map &= lhs == rhs
    return {"tuples": len(tuples), "dimension": len(keys), "rank": r,
            "bijective": r == len(tuples) == len(keys), "chain_map": chain_map}


def expansion_counts_ok(keys, twisted) -> bool:
    for k in keys:
        og = oriented(graph_from_key(k), 1, twisted)
        for v, c in og.graph.cycles.items():
            m = len(c)
            splits = vertex_splits(m)
            if len(splits) != m * (m - 3) // 2:
                return False
            for start, size in splits:
                new, (em, _) = expand_vertex(og, v, start, size)
                if min(len(x) for x in new.graph.cycles.values()) < 3:
                    return False
                back = contract_edge(new, em)
                if canonicalize(back)[:2] != canonicalize(og)[:2]:
                    return False
    return True


def a_sign_law_ok(keys, rng) -> tuple:
    """A_{Γ'} against the transformation law on every expansion of every key."""
    checked = 0
    for k in keys:
        g = graph_from_key(k)
        order = list(g.cycles)
        rng.shuffle(order)
        fr = frame(g, order, [rng.choice(g.cycles[v]) for v in order])
        g = RibbonGraph({v: fr.rings[order.index(v)] for v in g.cycles}, g.iota, check=False)
        fr = frame(g, order)
        og = oriented(g, rng.choice((1, -1)))
        A = a_sign(og, fr)
        ns = fr.arities
        for m, v in enumerate(order):
            c = g.cycles[v]
            for i, j in vertex_splits(len(c)):
                new, (em, ep) = expand_vertex(og, v, i, j)
                vm, vp = new.graph.vertex_of[em], new.graph.vertex_of[ep]
                order2 = order[:m] + [vp, vm] + order[m + 1:]
                roots = [c[0] if w == vp else em if w == vm else new.graph.cycles[w][0] for w in order2]
                e = sum(ns[:m]) + i * (j + 1) + ns[m] * j + 1
                checked += 1
                if a_sign(new, frame(new.graph, order2, roots)) != A * (-1) ** e:
                    return False, checked
    return True, checked


def criterion_7(seed: int = 0) -> Criterion:
    rng = random.Random(seed)
    parts = {}
    notes = []
    graphs = fixtures.test_graphs()
    for name, g in graphs.items():
        for tw in (False, True):
            tag = f"{name}/{'twisted' if tw else 'untwisted'}"
            og = oriented(g, 1, tw)
            _, keys = _subcomplex_keys(og)
            parts[f"d²=0 {tag}"] = boundary_squares_to_zero(keys, tw)
            rep = phi_report(og)
            parts[f"φ bijective {tag}"] = rep["bijective"]
            parts[f"φ chain map {tag}"] = rep["chain_map"]
            if not rep["bijective"]:
                notes.append(f"{tag}: {rep['tuples']} tuples, dim {rep['dimension']}, rank {rep['rank']}")
            parts[f"expansions {tag}"] = expansion_counts_ok(keys, tw)
            ok, _ = a_sign_law_ok(keys, rng)
            parts[f"A law {tag}"] = ok
    for name, g in fixtures.six_valent_graphs().items():
        for tw in (False, True):
            _, keys = _subcomplex_keys(oriented(g, 1, tw))
            parts[f"d²=0 {name}/{'twisted' if tw else 'untwisted'}"] = boundary_squares_to_zero(keys, tw)
    failed = [k for k, v in parts.items() if not v]
    detail = f"{len(parts) - len(failed)}/{len(parts)} checks pass"
    if failed:
        detail += "; failing: " + ", ".join(failed) + " (" + "; ".join(notes) + ")"
    return Criterion(7, "graph complex suite", not failed, detail, parts)


# -- 8 -----------------------------------------------------------------------

REGIMES = {"even⊗even": (False, False), "odd⊗odd": (True, True),
           "even⊗odd": (False, True), "odd⊗even": (True, False)}


def criterion_8(seed: int = 0, diag=None) -> Criterion:
    rng = random.Random(seed)
    diag = build_diagonal(4, cocommutative=True) if diag is None else diag
    parts = {}
    for regime, (lt, rt) in REGIMES.items():
        src = lt != rt
        chain_ok = indep_ok = True
        for g in fixtures.test_graphs().values():
            _, keys = _subcomplex_keys(oriented(g, 1, src))
            for k in keys:
                og = oriented(graph_from_key(k), 1, src)
                d = graph_diagonal(og, diag, lt, rt)
                rhs = Chain()
                for k2, c in key_boundary(k, src):
                    rhs.add_chain(key_diagonal(k2, diag, src, lt, rt), c)
                chain_ok &= pair_boundary_keys(d, lt, rt) == rhs
                order = list(og.graph.cycles)
                rng.shuffle(order)
                fr = frame(og.graph, order, [rng.choice(og.graph.cycles[v]) for v in order])
                indep_ok &= graph_diagonal(og, diag, lt, rt, fr) == d
        parts[f"chain map {regime}"] = chain_ok
        parts[f"frame independence {regime}"] = indep_ok
    return Criterion(8, "graph diagonal", all(parts.values()), _summary(parts), parts)


# -- 9 -----------------------------------------------------------------------

TENSOR_MATRIX = {
    "even⊗even": [("Q", "Q"), ("dual_even", "Q"), ("Q", "dual_even"), ("dual_even", "dual_even")],
    "even⊗odd": [("Q", "dual_odd"), ("dual_even", "dual_odd"), ("Q", "queer"), ("dual_even", "queer")],
    "odd⊗odd": [("dual_odd", "dual_odd"), ("queer", "queer"), ("dual_odd", "queer")],
}


def criterion_9(diag=None) -> Criterion:
    diag = build_diagonal(4, cocommutative=True) if diag is None else diag
    algs = fixtures.test_algebras()
    graphs = fixtures.test_graphs()
    parts = {}
    nonzero = 0
    for regime, pairs in TENSOR_MATRIX.items():
        ok = True
        for a, b in pairs:
            A, B = algs[a], algs[b]
            src = bool(A.parity) != bool(B.parity)
            keys = sorted({canonicalize(oriented(g, 1, src))[0] for g in graphs.values()
                           if not canonicalize(oriented(g, 1, src))[2]})
            AB = tensor_product_algebra(A, B, diag, 3)
            rep = verify_tensor_formula(A, B, keys, diag, AB)
            ok &= rep.ok
            nonzero += sum(1 for k in keys if kontsevich_value(AB, k))
        parts[regime] = ok
    th = oriented(graphs["theta"])
    q_val = kontsevich_value(algs["Q"], th)
    d_val = kontsevich_value(algs["dual_even"], th)
    parts["Q theta |c|=1"] = abs(q_val) == 1 and brute_force_value(algs["Q"], th) == q_val
    parts["dual_even theta c=0"] = d_val == 0 and brute_force_value(algs["dual_even"], th) == 0
    detail = f"{_summary(parts)}; c_Q(theta) = {q_val}; nonzero left-hand sides {nonzero}"
    return Criterion(9, "tensor formula at chain level", all(parts.values()), detail, parts)


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9]


def run_all(seed: int = 0, echo=None):
    out = []
    for fn in CRITERIA:
        kwargs = {"seed": seed} if "seed" in fn.__code__.co_varnames else {}
        c = fn(**kwargs)
        out.append(c)
        if echo:
            echo(c.line())
    return out
