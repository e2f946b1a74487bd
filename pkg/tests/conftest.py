"""Shared diagrams for the test suite."""

import pytest

from services.diagram import canonicalize

E1_BLOCKS = [[1], [2], [4], [3, -1, -2], [-3, -4]]


@pytest.fixture
def dot():
    return canonicalize(1, [[1], [-1]])


@pytest.fixture
def bar():
    return canonicalize(1, [[1, -1]])


@pytest.fixture
def e1():
    return canonicalize(4, E1_BLOCKS)


@pytest.fixture
def crossing():
    return canonicalize(2, [[1, -2], [2, -1]])


@pytest.fixture
def d2():
    return canonicalize(4, [[1], [2, -3], [3], [4], [-1], [-2], [-4]])
