import random
from fractions import Fraction
from itertools import product

import pytest
from conftest import pairings

from ainfdiag import fixtures
from ainfdiag import trees as T
from ainfdiag.algebra import tensor_product_algebra
from ainfdiag.diagonal import build_diagonal
from ainfdiag.errors import InvalidGraph, ParityMismatch
from ainfdiag.graphs import (
    Oriented,
    RibbonGraph,
    canonicalize,
    frame,
    graph_from_key,
    oriented,
)
from ainfdiag.kontsevich import (
    Audit,
    _edge_list,
    _koszul,
    brute_force_value,
    kontsevich_value,
    verify_cocycle,
    verify_tensor_formula,
)

GRAPHS = fixtures.test_graphs()
EVEN = ["Q", "dual_even", "matrix2"]
ODD = ["dual_odd", "odd_m3", "unital_m3", "queer"]


def trivalent_keys(V, twisted):
    """Nonzero canonical keys of connected trivalent graphs with V vertices."""
    out = set()
    for p in pairings(list(range(3 * V))):
        iota = {}
        for a, b in p:
            iota[a], iota[b] = b, a
        try:
            g = RibbonGraph({i: (3 * i, 3 * i + 1, 3 * i + 2) for i in range(V)}, iota)
        except InvalidGraph:
            continue
        k, _, zero = canonicalize(oriented(g, 1, twisted))
        if not zero:
            out.add(k)
    return sorted(out)


def n_edges(key):
    return len(key[1]) // 2


def small_keys(keys, max_states=300, dim=2):
    """Keys whose state sums stay small: at most ``max_states`` edge labellings."""
    return [k for k in keys if dim ** n_edges(k) <= max_states]


def reframed(og, rng):
    """The same oriented graph presented with a shuffled word and a random frame."""
    g = og.graph
    w = list(og.word)
    rng.shuffle(w)
    og2 = Oriented(g, og.sign * T.perm_sign(og.word, w), tuple(w), og.twisted)
    order = rng.sample(list(g.cycles), len(g.cycles))
    return og2, frame(g, order, [rng.choice(g.cycles[v]) for v in order])


# -- fixed values ------------------------------------------------------------

def test_ground_field_theta(algebras):
    th = oriented(GRAPHS["theta"])
    v = kontsevich_value(algebras["Q"], th)
    assert abs(v) == 1
    assert brute_force_value(algebras["Q"], th) == v


def test_dual_numbers_theta_vanishes(algebras):
    th = oriented(GRAPHS["theta"])
    assert kontsevich_value(algebras["dual_even"], th) == 0
    assert brute_force_value(algebras["dual_even"], th) == 0


def test_non_trivalent_graphs_vanish_on_frobenius(algebras):
    assert kontsevich_value(algebras["Q"], oriented(GRAPHS["figure_eight_adjacent"])) == 0


def test_orientation_sign_is_linear(algebras):
    th = oriented(GRAPHS["theta"])
    assert kontsevich_value(algebras["Q"], th.scaled(-1)) == -kontsevich_value(algebras["Q"], th)


def test_parity_mismatch(algebras):
    with pytest.raises(ParityMismatch):
        kontsevich_value(algebras["Q"], oriented(GRAPHS["theta"], 1, True))
    with pytest.raises(ParityMismatch):
        kontsevich_value(algebras["dual_odd"], oriented(GRAPHS["theta"]))


def test_audit(algebras):
    audit = Audit()
    v = kontsevich_value(algebras["matrix2"], oriented(GRAPHS["theta"]), audit=audit)
    assert audit.value == v
    assert audit.states == 4 ** 3
    assert 0 < audit.nonzero_states <= audit.states
    assert len(audit.edges) == 3


def test_koszul_helper():
    assert _koszul([1, 1], [1, 0]) == -1
    assert _koszul([1, 0], [1, 0]) == 1
    assert _koszul([1, 1, 1], [2, 1, 0]) == -1


# -- oracles -----------------------------------------------------------------

@pytest.mark.parametrize("V", [2, 4])
def test_matrix_algebra_counts_boundaries(algebras, V):
    # a trivalent graph with M_2 coefficients evaluates to ±2^(number of boundary cycles)
    A = algebras["matrix2"]
    for key in trivalent_keys(V, False):
        v = kontsevich_value(A, key)
        assert abs(v) == 2 ** graph_from_key(key).genus_boundaries()[1]


@pytest.mark.parametrize("name", EVEN + ODD)
def test_state_sum_matches_brute_force(algebras, graphs_b3, name):
    A = algebras[name]
    twisted = bool(A.parity)
    for key in graphs_b3:
        if A.dim ** len(key[1]) > 5000:
            continue
        og = oriented(graph_from_key(key), 1, twisted)
        if canonicalize(og)[2]:
            continue
        assert kontsevich_value(A, og) == brute_force_value(A, og)


@pytest.mark.parametrize("name", EVEN + ODD)
def test_value_independent_of_presentation(algebras, graphs_b3, name):
    rng = random.Random(name)
    A = algebras[name]
    twisted = bool(A.parity)
    for key in small_keys(graphs_b3, dim=A.dim) + trivalent_keys(2, twisted):
        og = oriented(graph_from_key(key), 1, twisted)
        v = kontsevich_value(A, og)
        for _ in range(3):
            og2, fr = reframed(og, rng)
            assert kontsevich_value(A, og2, fr) == v


def test_zero_generators_evaluate_to_zero(algebras):
    # a value on a graph with an orientation-reversing automorphism must be 0
    A = algebras["matrix2"]
    og = oriented(GRAPHS["figure_eight"])
    assert canonicalize(og)[2]
    assert kontsevich_value(A, og) == 0


def _unshifted_odd_value(A, og, fr):
    """The odd state sum with plain parities and no vertex factor (a wrong convention)."""
    edges, osign = _edge_list(og)
    slots = [h for ring in fr.rings for h in ring[1:] + ring[:1]]
    target = {}
    for i, (a, b) in enumerate(edges):
        target[a], target[b] = 2 * i, 2 * i + 1
    entries = [(a, b, c) for a in range(A.dim) for b in range(A.dim) for c in [A.copairing[a][b]] if c]
    total = Fraction(0)
    for choice in product(entries, repeat=len(edges)):
        lab, co = {}, Fraction(1)
        for (a, b, c), (h, k) in zip(choice, edges):
            lab[h], lab[k] = a, b
            co *= c
        for ring in fr.rings:
            co *= A.pair_vec(A.m(len(ring) - 1, tuple(lab[h] for h in ring[1:])), lab[ring[0]])
        if co:
            total += co * _koszul([A.p(lab[h]) for h in slots], [target[h] for h in slots])
    return osign * total


@pytest.mark.parametrize("name", ["queer", "dual_odd"])
def test_odd_value_independent_on_four_vertices(algebras, name):
    A = algebras[name]
    rng = random.Random(2)
    for key in trivalent_keys(4, True):
        og = oriented(graph_from_key(key), 1, True)
        v = kontsevich_value(A, og)
        for _ in range(4):
            og2, fr = reframed(og, rng)
            assert kontsevich_value(A, og2, fr) == v


def test_negative_control_wrong_odd_convention_is_frame_dependent(algebras):
    # the presentation test above has teeth: a wrong sign rule is caught
    A = algebras["queer"]
    rng = random.Random(1)
    dependent = 0
    for key in trivalent_keys(4, True):
        og = oriented(graph_from_key(key), 1, True)
        v = _unshifted_odd_value(A, og, frame(og.graph))
        for _ in range(4):
            og2, fr = reframed(og, rng)
            dependent += _unshifted_odd_value(A, og2, fr) != v
    assert dependent > 0


# -- cocycle and tensor formula ----------------------------------------------

@pytest.mark.parametrize("name", EVEN + ["dual_odd", "queer"])
def test_cocycle(algebras, name):
    from conftest import all_graph_keys
    A = algebras[name]
    rep = verify_cocycle(A, all_graph_keys(2))
    assert rep.ok, rep.failures


def test_cocycle_on_three_loops(algebras, graphs_b3):
    rep = verify_cocycle(algebras["matrix2"], [k for k in graphs_b3 if n_edges(k) <= 4])
    assert rep.ok, rep.failures


TENSOR_PAIRS = [("Q", "matrix2"), ("matrix2", "Q"), ("dual_even", "matrix2"),
                ("matrix2", "dual_odd"), ("queer", "Q"), ("queer", "queer"), ("dual_odd", "queer")]


@pytest.mark.parametrize("a,b", TENSOR_PAIRS)
def test_tensor_formula(algebras, reference_diagonal, a, b):
    A, B = algebras[a], algebras[b]
    src = bool(A.parity) != bool(B.parity)
    keys = sorted({canonicalize(oriented(g, 1, src))[0] for g in GRAPHS.values()
                   if not canonicalize(oriented(g, 1, src))[2]})
    rep = verify_tensor_formula(A, B, keys, reference_diagonal)
    assert rep.ok, rep.failures


def test_tensor_formula_nontrivial(algebras, reference_diagonal):
    # M_2 ⊗ M_2 ≅ M_4 on the theta: both sides equal ±4^3 up to the boundary count
    A = algebras["matrix2"]
    key = canonicalize(oriented(GRAPHS["theta"]))[0]
    AB = tensor_product_algebra(A, A, reference_diagonal, 2)
    v = kontsevich_value(AB, key)
    assert abs(v) == 4 ** 3
    assert verify_tensor_formula(A, A, [key], reference_diagonal, AB).ok


def test_tensor_formula_with_other_diagonal(algebras):
    # the identity holds for any cyclic diagonal, not just the reference one
    diag = build_diagonal(4)
    A, B = algebras["Q"], algebras["matrix2"]
    keys = [canonicalize(oriented(GRAPHS[n]))[0] for n in ("theta", "dumbbell", "figure_eight_adjacent")]
    assert verify_tensor_formula(A, B, keys, diag).ok
