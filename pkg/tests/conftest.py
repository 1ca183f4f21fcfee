import pytest

from hoptree.graph_model import Instance


@pytest.fixture
def i3() -> Instance:
    """The desk-reference instance: n=3, weight-1 edges (0,1), (1,2), (2,3)."""
    return Instance(3, [1, 2, 2, 1, 2, 1])
