import functools

import pytest
from hypothesis import HealthCheck, settings

from finsler_toolkit.rootsys import build_root_system
from finsler_toolkit.weyl import WeylGroup

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@functools.lru_cache(maxsize=None)
def group(tag):
    return WeylGroup(build_root_system(tag))


@pytest.fixture
def weyl():
    return group
