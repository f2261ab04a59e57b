import os
import sys

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

from gfcech import GradedModule, PolyRing  # noqa: E402


@pytest.fixture
def qxy():
    R = PolyRing("xy")
    return R, R.gens()


@pytest.fixture
def free_xy(qxy):
    R, _ = qxy
    return GradedModule.free(R)


@pytest.fixture
def node(qxy):
    """Q[x,y]/(xy): the union of the coordinate axes."""
    R, (x, y) = qxy
    return GradedModule.cyclic(R, [x * y])


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not getattr(mod, "RESULTS", None):
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
