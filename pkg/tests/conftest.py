from fractions import Fraction

import pytest

from ainfdiag import fixtures
from ainfdiag.diagonal import build_diagonal


@pytest.fixture(scope="session")
def reference_diagonal():
    return fixtures.reference_diagonal(Fraction(-1, 10))


@pytest.fixture(scope="session")
def diag5():
    return build_diagonal(5, cocommutative=True)


@pytest.fixture(scope="session")
def algebras():
    return fixtures.test_algebras()


def pairings(xs):
    if not xs:
        yield []
        return
    a = xs[0]
    for i in range(1, len(xs)):
        for rest in pairings(xs[1:i] + xs[i + 1:]):
            yield [(a, xs[i])] + rest


def all_graph_keys(loops):
    """Canonical keys of all connected ribbon graphs with first Betti number ``loops``
    and valencies ≥ 3.

    Starts from every one-vertex graph (a rose with ``loops`` petals) and
    closes under expansion, which keeps E − V fixed.
    """
    from ainfdiag.graphs import RibbonGraph, canonicalize, expansions, graph_from_key, oriented

    seen, todo = set(), []
    for p in pairings(list(range(2 * loops))):
        iota = {}
        for a, b in p:
            iota[a], iota[b] = b, a
        k = canonicalize(oriented(RibbonGraph({0: tuple(range(2 * loops))}, iota)))[0]
        if k not in seen:
            seen.add(k)
            todo.append(k)
    while todo:
        for x in expansions(oriented(graph_from_key(todo.pop()))):
            k = canonicalize(x)[0]
            if k not in seen:
                seen.add(k)
                todo.append(k)
    return sorted(seen)


@pytest.fixture(scope="session")
def graphs_b3():
    return all_graph_keys(3)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import LINES
    except ImportError:
        return
    if LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(LINES):
            terminalreporter.write_line(LINES[n])
