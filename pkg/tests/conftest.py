import numpy as np
import pytest
from hypothesis import strategies as st

from boolelab.core import Expression, lg_expression

SETTINGS = "abcd"
STATIONS = ("1", "2", "3")


@pytest.fixture
def lg():
    """Two-station LG expression (Lille/Lyon)."""
    return lg_expression(("Lille", "Lyon"))


@pytest.fixture
def lg3():
    return lg_expression(("Lille", "Lyon", "Paris"))


@st.composite
def pairwise_expressions(draw, max_terms=6):
    n = draw(st.integers(1, max_terms))
    slot = st.tuples(st.sampled_from(SETTINGS), st.sampled_from(STATIONS))
    terms = [[draw(slot), draw(slot)] for _ in range(n)]
    return Expression.from_pairs(terms, co_dated=draw(st.booleans()))


def random_pairwise_expression(rng: np.random.Generator, max_terms=6, settings=SETTINGS, stations=STATIONS):
    n = int(rng.integers(1, max_terms + 1))
    terms = [
        [(str(rng.choice(list(settings))), str(rng.choice(list(stations)))) for _ in range(2)]
        for _ in range(n)
    ]
    return Expression.from_pairs(terms, co_dated=bool(rng.integers(2)))
