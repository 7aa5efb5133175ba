import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from blockverify.corpus import build_group  # noqa: E402
from blockverify.limits import LIMITS  # noqa: E402


@pytest.fixture
def group():
    """Build a named corpus group (fresh object, so caches do not leak between tests)."""
    return build_group


@pytest.fixture(autouse=True)
def restore_limits():
    saved = dict(vars(LIMITS))
    yield
    for k, v in saved.items():
        setattr(LIMITS, k, v)
