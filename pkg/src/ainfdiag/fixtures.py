"""Reference objects: explicit low-arity diagonals, small cyclic algebras
and the smallest ribbon graphs."""

from __future__ import annotations

from fractions import Fraction

from . import trees
from .chains import Chain
from .diagonal import Diagonal

F = Fraction
_t = trees.decode


def _signed(pairs):
    return [(_t(s), sign) for s, sign in pairs]


# degree-0 pieces, as oriented trees (tree, sign)
B3 = _signed([("((**)*)", -1), ("(*(**))", 1)])
B4 = _signed([("(*(*(**)))", -1), ("(*((**)*))", 1), ("((*(**))*)", -1),
              ("(((**)*)*)", 1), ("((**)(**))", 1)])
# degree-1 pieces E_1..E_5; their orientations differ from the
# canonical edge order by these signs (fixed by the chain-map check)
E4 = _signed([("((**)**)", 1), ("(*(**)*)", -1), ("(**(**))", 1),
              ("((***)*)", -1), ("(*(***))", -1)])


def reference_delta3() -> Chain:
    c3 = trees.corolla(3)
    out = Chain()
    for b, s in B3:
        out.add((b, c3), F(s, 2))
        out.add((c3, b), F(s, 2))
    return out


def gamma_table(x) -> dict:
    """γ_{i,j} (1-based) of the one-parameter family of cyclic Δ(c_4)."""
    x = F(x)
    g = {(1, 1): F(-1, 10) - x, (1, 2): x, (1, 3): F(-2, 5) - x,
         (1, 4): F(-1, 5) + x, (1, 5): F(1, 5) + x}
    rel = {
        (1, 1): [(2, 2, 1), (3, 3, 1), (4, 4, 1), (5, 5, 1)],
        (1, 2): [(2, 3, 1), (3, 4, 1), (4, 5, -1), (5, 1, 1)],
        (1, 3): [(2, 4, 1), (3, 5, -1), (4, 1, -1), (5, 2, 1)],
        (1, 4): [(2, 5, -1), (3, 1, -1), (4, 2, -1), (5, 3, 1)],
        (1, 5): [(2, 1, 1), (3, 2, 1), (4, 3, 1), (5, 4, -1)],
    }
    for src, targets in rel.items():
        for i, j, s in targets:
            g[(i, j)] = s * g[src]
    return g


def reference_delta4(x) -> Chain:
    c4 = trees.corolla(4)
    out = Chain()
    for b, s in B4:
        out.add((c4, b), F(s, 5))
        out.add((b, c4), F(s, 5))
    for (i, j), g in gamma_table(x).items():
        (a, sa), (b, sb) = E4[i - 1], E4[j - 1]
        out.add((a, b), sa * sb * g)
    return out


def reference_diagonal(x=F(-1, 10), max_arity=4) -> Diagonal:
    c2 = trees.corolla(2)
    entries = {2: Chain({(c2, c2): 1}), 3: reference_delta3()}
    if max_arity >= 4:
        entries[4] = reference_delta4(x)
    return Diagonal(entries, cyclic=True, cocommutative=F(x) == F(-1, 10))


# -- algebras ----------------------------------------------------------------

def _alg(names, degrees, pairing, products, parity=0, grading="Z"):
    from .algebra import CyclicAInfAlgebra
    idx = {n: i for i, n in enumerate(names)}
    ops = {}
    for (k, ins), out in products.items():
        ops.setdefault(k, {})[tuple(idx[a] for a in ins)] = {idx[o]: c for o, c in out.items()}
    return CyclicAInfAlgebra(names, degrees, pairing, ops, parity, grading)


def ground_field():
    """ℚ with ⟨1,1⟩ = 1."""
    return _alg(["1"], [0], [[1]], {(2, ("1", "1")): {"1": 1}})


def dual_numbers(odd: bool = False):
    """ℚ[x]/x² with ⟨1,x⟩ = ⟨x,1⟩ = 1; |x| = 1 gives the odd pairing."""
    prods = {(2, ("1", "1")): {"1": 1}, (2, ("1", "x")): {"x": 1}, (2, ("x", "1")): {"x": 1}}
    return _alg(["1", "x"], [0, 1 if odd else 0], [[0, 1], [1, 0]], prods, 1 if odd else 0)


def odd_m3_algebra():
    """ℤ/2-graded: u odd, w even, ⟨u,w⟩ = ⟨w,u⟩ = 1, only m_3(u,u,u) = w."""
    return _alg(["u", "w"], [1, 0], [[0, 1], [1, 0]], {(3, ("u", "u", "u")): {"w": 1}},
                parity=1, grading="Z2")


def matrix_algebra(n: int = 2):
    """n×n matrices in degree 0 with the trace pairing ⟨a,b⟩ = tr(ab)."""
    names = [f"e{i}{j}" for i in range(n) for j in range(n)]
    prods = {}
    for i in range(n):
        for j in range(n):
            for k in range(n):
                prods[(2, (f"e{i}{j}", f"e{j}{k}"))] = {f"e{i}{k}": 1}
    pairing = [[1 if (j == k and i == l) else 0 for k in range(n) for l in range(n)]
               for i in range(n) for j in range(n)]
    return _alg(names, [0] * len(names), pairing, prods)


def queer_algebra():
    """ℚ[ξ]/(ξ² − 1) with ξ odd and the odd trace ⟨a,b⟩ = coefficient of ξ in ab."""
    prods = {(2, ("1", "1")): {"1": 1}, (2, ("1", "xi")): {"xi": 1},
             (2, ("xi", "1")): {"xi": 1}, (2, ("xi", "xi")): {"1": 1}}
    return _alg(["1", "xi"], [0, 1], [[0, 1], [1, 0]], prods, parity=1, grading="Z2")


def test_algebras():
    return {"Q": ground_field(), "dual_even": dual_numbers(False),
            "dual_odd": dual_numbers(True), "odd_m3": odd_m3_algebra(),
            "unital_m3": unital_m3_algebra(), "matrix2": matrix_algebra(2),
            "queer": queer_algebra()}


def unital_m3_algebra():
    """ℤ/2-graded, odd pairing: unit 1, odd u and t, even w.

    ⟨1,t⟩ = ⟨u,w⟩ = 1; m_2 is strictly unital with u·w = w·u = t;
    m_3(u,u,u) = w.  Trees mixing m_2 and m_3 act nontrivially here.
    """
    names = ["1", "u", "w", "t"]
    prods = {(2, ("1", "1")): {"1": 1}}
    for x in names[1:]:
        prods[(2, ("1", x))] = {x: 1}
        prods[(2, (x, "1"))] = {x: 1}
    prods[(2, ("u", "w"))] = {"t": 1}
    prods[(2, ("w", "u"))] = {"t": 1}
    prods[(3, ("u", "u", "u"))] = {"w": 1}
    pairing = [[0, 0, 0, 1], [0, 0, 1, 0], [0, 1, 0, 0], [1, 0, 0, 0]]
    return _alg(names, [0, 1, 0, 1], pairing, prods, parity=1, grading="Z2")


# -- ribbon graphs -----------------------------------------------------------

def _graph(cycles, pairs):
    from .graphs import RibbonGraph
    iota = {}
    for a, b in pairs:
        iota[a], iota[b] = b, a
    return RibbonGraph({i: tuple(c) for i, c in enumerate(cycles)}, iota)


def theta(genus: int = 0):
    """Two trivalent vertices, three parallel edges; genus 0 or 1."""
    pairs = [(0, 3), (1, 5), (2, 4)] if genus == 0 else [(0, 3), (1, 4), (2, 5)]
    return _graph([(0, 1, 2), (3, 4, 5)], pairs)


def dumbbell():
    """Two loop vertices joined by a bridge."""
    return _graph([(0, 1, 2), (3, 4, 5)], [(0, 1), (2, 3), (4, 5)])


def figure_eight(adjacent: bool = False):
    """One 4-valent vertex with two loops; opposite pairing has (g, n) = (1, 1)."""
    pairs = [(0, 1), (2, 3)] if adjacent else [(0, 2), (1, 3)]
    return _graph([(0, 1, 2, 3)], pairs)


def rose(pairs):
    """One vertex of valency 2·len(pairs) with the given loops."""
    return _graph([tuple(range(2 * len(pairs)))], pairs)


def test_graphs():
    return {"theta": theta(0), "theta_torus": theta(1), "dumbbell": dumbbell(),
            "figure_eight": figure_eight(False), "figure_eight_adjacent": figure_eight(True)}


def six_valent_graphs():
    return {"rose_adjacent": rose([(0, 1), (2, 3), (4, 5)]),
            "rose_opposite": rose([(0, 3), (1, 4), (2, 5)]),
            "rose_mixed": rose([(0, 1), (2, 4), (3, 5)])}
