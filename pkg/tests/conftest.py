"""Shared fixtures and the --runslow switch."""

import pytest

from product_percolation.graphs import GraphSpec


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run acceptance-scale tests")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def square_lattice():
    return GraphSpec.lattice(2)


@pytest.fixture
def ternary_tree():
    return GraphSpec.regular_tree(3)


@pytest.fixture
def insertions_d1_line():
    """(tree with Z insertions, n0 = 1) x Z: the smallest space the branching walk runs on."""
    return GraphSpec.tree_with_insertions(1, 1).with_line()
