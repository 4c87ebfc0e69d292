import pytest

from graphspec_cli.core.generators import (
    complete,
    cycle,
    lattice,
    line_example,
    path,
    regular_tree,
    single_edge,
)
from graphspec_cli.core.graph import WeightedGraph


@pytest.fixture
def p3() -> WeightedGraph:
    """Path 0-1-2 with unit weights."""
    return WeightedGraph.from_edges(3, [(0, 1, 1.0), (1, 2, 1.0)])


@pytest.fixture
def star() -> WeightedGraph:
    """K_{1,3} centered at 0."""
    return WeightedGraph.from_edges(4, [(0, 1, 1.0), (0, 2, 1.0), (0, 3, 1.0)])


@pytest.fixture
def z_line():
    return lattice(dim=1)


@pytest.fixture
def z2():
    return lattice(dim=2)


@pytest.fixture
def tree():
    return regular_tree(d=3)


@pytest.fixture
def heavy_line():
    return line_example()


@pytest.fixture
def edge_family():
    return single_edge()


@pytest.fixture
def normalized_c6():
    return cycle(6, measure="mn")


@pytest.fixture
def normalized_p3():
    return path(3, measure="mn")


@pytest.fixture
def normalized_k4():
    return complete(4, measure="mn")


@pytest.fixture
def workdir(tmp_path, monkeypatch):
    """Run inside an empty directory so no config file is discovered."""
    monkeypatch.chdir(tmp_path)
    return tmp_path
