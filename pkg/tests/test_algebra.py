from fractions import Fraction
from itertools import product

import pytest

from ainfdiag import fixtures
from ainfdiag import trees as T
from ainfdiag.algebra import (
    CyclicAInfAlgebra,
    ainf_relation,
    ainf_relations_sparse,
    cyclic_sides,
    evaluate_tree,
    nonzero_witness,
    tensor_product_algebra,
    validate_algebra,
)
from ainfdiag.errors import ArityMismatch, MissingLowerArity, NonInvertiblePairing


@pytest.mark.parametrize("name", sorted(fixtures.test_algebras()))
def test_fixture_algebras_validate(algebras, name):
    rep = validate_algebra(algebras[name], 4)
    assert rep.ok, rep.failures


@pytest.mark.parametrize("name", sorted(fixtures.test_algebras()))
def test_sparse_relations_agree_with_exhaustive(algebras, name):
    A = algebras[name]
    for n in range(1, 5):
        sparse = ainf_relations_sparse(A, n)
        for inp in product(range(A.dim), repeat=n):
            dense = {k: v for k, v in ainf_relation(A, inp).items() if v}
            assert dense == {k: v for k, v in sparse.get(inp, {}).items() if v}


@pytest.mark.parametrize("name", sorted(fixtures.test_algebras()))
def test_cyclicity_exhaustive(algebras, name):
    A = algebras[name]
    for n in range(1, 5):
        for inp in product(range(A.dim), repeat=n + 1):
            lhs, rhs = cyclic_sides(A, n, inp)
            assert lhs == rhs


def test_evaluate_tree_ground_field(algebras):
    Q = algebras["Q"]
    for t in T.enumerate_trees(4, 0):
        # every binary tree evaluates m_2's iterates to ±1
        v = evaluate_tree(Q, t, (0, 0, 0, 0))
        assert set(v) == {0} and abs(v[0]) == 1
    assert evaluate_tree(Q, T.corolla(3), (0, 0, 0)) == {}


def test_evaluate_tree_arity_check(algebras):
    with pytest.raises(ArityMismatch):
        evaluate_tree(algebras["Q"], T.corolla(3), (0, 0))


def test_degenerate_pairing_reported():
    A = CyclicAInfAlgebra(["a", "b"], [0, 0], [[1, 1], [1, 1]], {})
    with pytest.raises(NonInvertiblePairing):
        A.copairing
    assert not validate_algebra(A, 2).ok


def test_corrupted_product_reported(algebras):
    A = algebras["dual_even"]
    ops = {k: {i: dict(o) for i, o in t.items()} for k, t in A.ops.items()}
    ops[2][(1, 0)] = {1: Fraction(2)}   # break cyclicity
    B = CyclicAInfAlgebra(A.names, A.degrees, A.pairing, ops, A.parity, A.grading)
    rep = validate_algebra(B, 3)
    assert not rep.ok
    assert "cyclicity" in dict(rep.failures) or "ainf_relations" in dict(rep.failures)


@pytest.mark.parametrize("pair", [("Q", "Q"), ("dual_even", "dual_even"), ("dual_odd", "dual_odd"),
                                  ("Q", "unital_m3"), ("dual_even", "dual_odd")])
def test_tensor_products_validate(algebras, reference_diagonal, pair):
    A, B = algebras[pair[0]], algebras[pair[1]]
    AB = tensor_product_algebra(A, B, reference_diagonal, 4)
    rep = validate_algebra(AB, 4)
    assert rep.ok, rep.failures
    assert AB.parity == (A.parity + B.parity) % 2


def test_unit_on_the_left(algebras, reference_diagonal):
    # ℚ ⊗ A has the structure constants of A through arity 3
    A = algebras["unital_m3"]
    QA = tensor_product_algebra(algebras["Q"], A, reference_diagonal, 3)
    for k in (2, 3):
        for inp in product(range(A.dim), repeat=k):
            assert QA.m(k, inp) == A.m(k, inp)


def test_frobenius_square_has_no_m4(algebras, reference_diagonal):
    A = algebras["dual_even"]
    assert nonzero_witness(tensor_product_algebra(A, A, reference_diagonal, 4), 4) is None


def test_m3_square_has_m4(algebras, diag5):
    A = algebras["unital_m3"]
    AB = tensor_product_algebra(A, A, diag5, 5)
    assert nonzero_witness(AB, 4) is not None
    assert validate_algebra(AB, 5).ok


def test_tensor_needs_all_arities(algebras, reference_diagonal):
    with pytest.raises(MissingLowerArity):
        tensor_product_algebra(algebras["Q"], algebras["Q"], reference_diagonal, 5)
