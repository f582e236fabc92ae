from fractions import Fraction

import pytest

from ainfdiag import fixtures
from ainfdiag.chains import Chain
from ainfdiag.diagonal import (
    Diagonal,
    IntervalForm,
    build_homotopy,
    evaluate_at,
    form_boundary,
    verify_homotopy,
)
from ainfdiag.errors import EndpointMismatch


@pytest.fixture(scope="module")
def homotopy():
    return build_homotopy(fixtures.reference_diagonal(Fraction(0)), fixtures.reference_diagonal(Fraction(-1, 10)), 4)


def test_homotopy_verifies(homotopy):
    rep = verify_homotopy(homotopy)
    assert rep.ok, rep.failures
    for n in (2, 3, 4):
        assert rep.checks[n] == {"start": True, "end": True, "chain_map": True, "cyclic": True}


def test_endpoints(homotopy):
    assert evaluate_at(homotopy[4], 0) == fixtures.reference_delta4(Fraction(0))
    assert evaluate_at(homotopy[4], 1) == fixtures.reference_delta4(Fraction(-1, 10))


def test_self_homotopy_is_constant_in_low_arity():
    d = fixtures.reference_diagonal(Fraction(0))
    h = build_homotopy(d, d, 3)
    assert verify_homotopy(h).ok
    assert all(k == 0 and p == 0 for (_, k, p) in h[3])


def test_forms_view(homotopy):
    start = fixtures.reference_delta4(Fraction(0))
    end = fixtures.reference_delta4(Fraction(-1, 10))
    for pair, f in homotopy.forms(4).items():
        assert f.at(0) == start.get(pair, 0)
        assert f.at(1) == end.get(pair, 0)


def test_interval_form_derivative():
    f = IntervalForm((Fraction(1), Fraction(2), Fraction(3)), ())
    assert f.d().dt_poly == (2, 6)


def test_d_squared_on_forms(homotopy):
    x = homotopy[4]
    assert x.map(form_boundary).map(form_boundary) == Chain()


def test_mismatched_endpoints_rejected():
    d = fixtures.reference_diagonal(Fraction(0))
    e = dict(d.entries)
    e[2] = e[2] * 2
    with pytest.raises(EndpointMismatch):
        build_homotopy(d, Diagonal(e, True, True), 3)
