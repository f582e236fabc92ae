import json
import random
from fractions import Fraction

import pytest

from ainfdiag import fixtures, serialize
from ainfdiag.diagonal import build_homotopy
from ainfdiag.errors import InvalidGraph
from ainfdiag.graphs import canonicalize, oriented
from ainfdiag.kontsevich import kontsevich_value


def roundtrip(obj):
    return json.loads(serialize.dumps(obj))


def test_rationals():
    assert serialize.q(Fraction(-1, 10)) == "-1/10"
    assert serialize.unq("3") == 3
    with pytest.raises(serialize.SchemaError):
        serialize.unq("1/0")
    with pytest.raises(serialize.SchemaError):
        serialize.unq([1])


def test_diagonal_roundtrip(reference_diagonal):
    back = serialize.diagonal_from_json(roundtrip(serialize.diagonal_to_json(reference_diagonal)))
    assert back.entries == reference_diagonal.entries
    assert back.cocommutative == reference_diagonal.cocommutative


def test_homotopy_roundtrip():
    h = build_homotopy(fixtures.reference_diagonal(Fraction(0)), fixtures.reference_diagonal(Fraction(-1, 10)), 4)
    back = serialize.homotopy_from_json(roundtrip(serialize.homotopy_to_json(h)))
    assert back.entries == h.entries
    assert back.start.entries == h.start.entries


@pytest.mark.parametrize("name", sorted(fixtures.test_algebras()))
def test_algebra_roundtrip(algebras, name):
    A = algebras[name]
    B = serialize.algebra_from_json(roundtrip(serialize.algebra_to_json(A)))
    assert (B.names, B.degrees, B.pairing, B.ops, B.parity, B.grading) == \
        (A.names, A.degrees, A.pairing, A.ops, A.parity, A.grading)


@pytest.mark.parametrize("name", sorted(fixtures.test_graphs()))
@pytest.mark.parametrize("twisted", [False, True])
@pytest.mark.parametrize("sign", [1, -1])
def test_graph_roundtrip_keeps_orientation(name, twisted, sign):
    og = oriented(fixtures.test_graphs()[name], sign, twisted)
    back = serialize.graph_from_json(roundtrip(serialize.graph_to_json(og)))
    assert canonicalize(back) == canonicalize(og)


def test_twisted_order_permutation_changes_sign():
    og = oriented(fixtures.theta(1), 1, True)
    d = serialize.graph_to_json(og)
    d["orientation"]["order"][0], d["orientation"]["order"][1] = \
        d["orientation"]["order"][1], d["orientation"]["order"][0]
    back = serialize.graph_from_json(d)
    assert not canonicalize(og)[2]
    assert canonicalize(back)[1] == -canonicalize(og)[1]


def test_untwisted_order_permutation_changes_value(algebras):
    og = oriented(fixtures.theta(0))
    d = serialize.graph_to_json(og)
    order = d["orientation"]["order"]
    order[-1], order[-2] = order[-2], order[-1]
    assert kontsevich_value(algebras["Q"], serialize.graph_from_json(d)) == -kontsevich_value(algebras["Q"], og)


def test_graph_from_plain_description():
    back = serialize.graph_from_json({"nu": [[0, 1, 2], [3, 4, 5]], "iota": [[0, 3], [1, 5], [2, 4]]})
    assert canonicalize(back)[0] == canonicalize(oriented(fixtures.theta(0)))[0]


@pytest.mark.parametrize("doc,err", [
    ({"nu": [[0, 1, 2]], "iota": [[0, 1]]}, InvalidGraph),
    ({"nu": [[0, 1, 2], [3, 4, 5]], "iota": [[0, 3, 1]]}, serialize.SchemaError),
    ({"iota": []}, serialize.SchemaError),
    ({"nu": [[0, 1, 2], [3, 4, 5]], "iota": [[0, 3], [1, 5], [2, 4]],
      "orientation": {"order": ["v0"]}}, serialize.SchemaError),
])
def test_graph_schema_errors(doc, err):
    with pytest.raises(err):
        serialize.graph_from_json(doc)


def test_algebra_schema_errors(algebras):
    d = serialize.algebra_to_json(algebras["dual_even"])
    bad = json.loads(json.dumps(d))
    bad["ops"]["2"][0]["in"] = ["nope", "1"]
    with pytest.raises(serialize.SchemaError):
        serialize.algebra_from_json(bad)
    bad = json.loads(json.dumps(d))
    bad["pairing"] = [[1]]
    with pytest.raises(serialize.SchemaError):
        serialize.algebra_from_json(bad)
    bad = json.loads(json.dumps(d))
    bad["grading"] = "Z3"
    with pytest.raises(serialize.SchemaError):
        serialize.algebra_from_json(bad)


def test_bad_tree_in_diagonal():
    with pytest.raises(serialize.SchemaError):
        serialize.diagonal_from_json({"entries": {"2": [{"left": "(*)", "right": "(**)", "coeff": "1"}]}})


def test_load_rejects_bad_json(tmp_path):
    p = tmp_path / "x.json"
    p.write_text("{not json")
    with pytest.raises(serialize.SchemaError):
        serialize.load(p)


def test_output_is_stable(reference_diagonal):
    assert serialize.dumps(serialize.diagonal_to_json(reference_diagonal)) == \
        serialize.dumps(serialize.diagonal_to_json(reference_diagonal))
    rng = random.Random(0)
    items = list(reference_diagonal[4].items())
    rng.shuffle(items)
    from ainfdiag.chains import Chain
    shuffled = type(reference_diagonal)({**reference_diagonal.entries, 4: Chain(items)}, True, True)
    assert serialize.dumps(serialize.diagonal_to_json(shuffled)) == \
        serialize.dumps(serialize.diagonal_to_json(reference_diagonal))
