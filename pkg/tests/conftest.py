import os

import pytest
from hypothesis import HealthCheck, settings

from hyperchroma import Hypergraph
from hyperchroma.process import fano as _fano

settings.register_profile(
    "repo",
    max_examples=int(os.environ.get("HYPOTHESIS_EXAMPLES", "60")),
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")


@pytest.fixture
def fano():
    return _fano()


@pytest.fixture
def g0():
    return Hypergraph(5, 3, [(0, 1, 2), (1, 2, 3), (2, 3, 4)])


@pytest.fixture
def k43():
    return Hypergraph(4, 3, [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)])
