import os
from pathlib import Path

import pytest

from likarr.groebner import groebner_basis, reduce
from likarr.likelihood import parse_arrangement
from likarr.poly import GREVLEX

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def pytest_addoption(parser):
    parser.addoption("--stretch", action="store_true", help="run the long-running stretch checks")


def pytest_configure(config):
    config.addinivalue_line("markers", "stretch: long-running; needs --stretch or LIKARR_STRETCH=1")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--stretch") or os.environ.get("LIKARR_STRETCH") == "1":
        return
    skip = pytest.mark.skip(reason="stretch check; pass --stretch or set LIKARR_STRETCH=1")
    for item in items:
        if "stretch" in item.keywords:
            item.add_marker(skip)


def load(name, **kw):
    return parse_arrangement((FIXTURES / name).read_text(), **kw)


def s_pair(f, g, order=GREVLEX):
    """S-polynomial computed with plain polynomial arithmetic."""
    ef, cf = f.leading_term(order)
    eg, cg = g.leading_term(order)
    lcm = tuple(max(a, b) for a, b in zip(ef, eg))
    R = f.ring
    mf = R.monomial(tuple(a - b for a, b in zip(lcm, ef)))
    mg = R.monomial(tuple(a - b for a, b in zip(lcm, eg)))
    return mf * f * cg - mg * g * cf


def is_groebner(G, order=GREVLEX) -> bool:
    """Buchberger criterion checked after the fact."""
    G = list(G)
    for i in range(len(G)):
        for j in range(i + 1, len(G)):
            if reduce(s_pair(G[i], G[j], order), G, order):
                return False
    return True


def assert_groebner_of(I, order=GREVLEX):
    G = groebner_basis(I, order)
    assert is_groebner(G, order)
    assert all(not reduce(g, G, order) for g in I.generators)
    return G


# acceptance criteria report one line each in the terminal summary
ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(ACCEPTANCE):
        terminalreporter.write_line(line)
