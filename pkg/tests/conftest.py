import numpy as np
import pytest

from greenwalk import families, pipeline
from greenwalk.graph import WeightedDigraph


@pytest.fixture
def p3():
    """Path 0-1-2: every quantity is known by hand."""
    return pipeline.analyze(families.path_graph(3))


@pytest.fixture
def directed_triangle():
    g = WeightedDigraph(3, ((0, 1, 1.0), (1, 2, 1.0), (2, 0, 1.0)))
    return pipeline.analyze(g)


def maxabs(values) -> float:
    return float(np.abs(np.asarray(values, dtype=float)).max())
