import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from deltasimplex import enumerate_atlas


@pytest.fixture(scope="session")
def atlas_cache():
    """Memoized atlas builder shared by the whole session."""
    cache = {}

    def get(delta: int, n: int, family: str = "both"):
        key = (delta, n, family)
        if key not in cache:
            cache[key] = enumerate_atlas(delta, n, family)
        return cache[key]

    return get


@pytest.fixture
def triangle():
    from deltasimplex import InequalitySystem

    return InequalitySystem(2, ((-1, 0), (0, -1), (1, 1)), (0, 0, 1))
