from fractions import Fraction

import pytest

from ainfdiag import trees as T
from ainfdiag.chains import (
    Chain,
    EquivariantComplex,
    TensorSquareComplex,
    TreeComplex,
    boundary_rank,
    flip_pairs,
    homology_rank,
    rotate_pairs,
    solve_boundary,
    tensor_boundary,
    tensor_compose,
)
from ainfdiag.errors import NotSolvable


def test_chain_arithmetic():
    x = Chain({"a": 1, "b": Fraction(1, 2)})
    y = Chain({"a": -1})
    assert x + y == {"b": Fraction(1, 2)}
    assert (x - x) == {}
    assert 2 * x == {"a": 2, "b": 1}
    assert -y == {"a": 1}
    assert Chain({"a": 0}) == {}


def test_tensor_boundary_squares_to_zero():
    comp = TensorSquareComplex(4)
    for d in range(comp.top + 1):
        for p in comp.basis(d):
            assert tensor_boundary(tensor_boundary(Chain({p: 1}))) == {}


@pytest.mark.parametrize("n", range(2, 8))
def test_associahedron_is_contractible(n):
    comp = TreeComplex(n)
    assert homology_rank(comp, 0) == 1
    for d in range(1, comp.top + 1):
        assert homology_rank(comp, d) == 0


def test_tensor_square_is_contractible():
    comp = TensorSquareComplex(4)
    assert homology_rank(comp, 0) == 1
    assert all(homology_rank(comp, d) == 0 for d in range(1, comp.top + 1))


def test_solve_boundary_roundtrip():
    comp = TreeComplex(5)
    b = Chain(T.boundary(T.corolla(5)))
    x = solve_boundary(comp, b, 2)
    assert Chain(x).map(T.boundary) == b


def test_solve_boundary_rejects_cycles_that_are_not_boundaries():
    comp = TreeComplex(3)
    with pytest.raises(NotSolvable):
        solve_boundary(comp, Chain({T.decode("((**)*)"): 1}), 0)


def test_rotation_and_flip_are_involutive_up_to_order():
    comp = TensorSquareComplex(4)
    x = Chain({p: i + 1 for i, p in enumerate(comp.basis(2)[:7])})
    y = x
    for _ in range(5):
        y = rotate_pairs(y)
    assert y == x
    assert flip_pairs(flip_pairs(x)) == x


def test_invariant_basis_vectors_are_invariant():
    for n, flip in [(3, False), (4, False), (4, True)]:
        comp = EquivariantComplex(n, flip=flip)
        for d in range(comp.top + 1):
            for k in comp.basis(d):
                v = comp.vector(k)
                assert rotate_pairs(v) == v * (-1) ** n
                if flip:
                    assert flip_pairs(v) == v


def test_invariant_complex_boundary_rank_matches_full():
    # the invariant boundary map is the restriction of the full one
    comp = EquivariantComplex(4)
    for d in range(1, comp.top + 1):
        vecs = [comp.vector(k) for k in comp.basis(d)]
        images = [tensor_boundary(v) for v in vecs]
        keys = sorted({p for im in images for p in im}, key=repr)
        from ainfdiag import linalg
        rows = [{keys.index(p): c for p, c in im.items()} for im in images]
        assert linalg.rank(rows) == boundary_rank(comp, d)


def test_tensor_compose_is_bilinear():
    c2 = Chain({(T.corolla(2), T.corolla(2)): 1})
    x = tensor_compose(c2, 1, c2 * 3)
    assert x == tensor_compose(c2, 1, c2) * 3
