import random

import pytest

from gonflow.graphs import WeightedGraph


@pytest.fixture
def rng():
    return random.Random(20261016)


def triangle(w=(1, 1, 1)) -> WeightedGraph:
    return WeightedGraph.from_edges([("a", "b", w[0]), ("b", "c", w[1]), ("c", "a", w[2])])
