"""Every acceptance criterion, run exactly; one [PASS]/[FAIL] line each.

The lines are printed (visible with ``-s``) and repeated in the terminal
summary, so a plain ``pytest -v`` run records them too.
"""

import pytest

from ainfdiag import acceptance

SEED = 0
LINES = {}


@pytest.mark.parametrize("fn", acceptance.CRITERIA, ids=lambda f: f.__name__)
def test_criterion(fn):
    kwargs = {"seed": SEED} if "seed" in fn.__code__.co_varnames else {}
    c = fn(**kwargs)
    LINES[c.number] = c.line()
    print(c.line())
    assert c.ok, c.detail
