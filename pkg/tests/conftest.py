import numpy as np
import pytest
from hypothesis import settings
from hypothesis import strategies as st

from polyfeq.abelian import FinAbGroup
from polyfeq.functions import FunctionTable

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

small_moduli = st.lists(st.integers(2, 6), min_size=1, max_size=2).filter(lambda ms: int(np.prod(ms)) <= 12)
groups = small_moduli.map(FinAbGroup)


@st.composite
def tables(draw, domain=None, codomain=None):
    G = domain if domain is not None else draw(groups)
    H = codomain if codomain is not None else draw(groups)
    idx = draw(st.lists(st.integers(0, H.order - 1), min_size=G.order, max_size=G.order))
    return FunctionTable(G, H, H.residues[idx])


@st.composite
def elements(draw, G):
    return G.element(draw(st.integers(0, G.order - 1)))


@pytest.fixture
def z5():
    return FinAbGroup([5])


def pytest_terminal_summary(terminalreporter):
    from . import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for number in sorted(test_acceptance.RESULTS):
            terminalreporter.write_line(test_acceptance.RESULTS[number].line())
