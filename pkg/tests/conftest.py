import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from fractl import TorusGrid, build_filter_bank

settings.register_profile(
    "default", deadline=None, max_examples=40,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.function_scoped_fixture],
)
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def grid64():
    return TorusGrid(1, 64)


@pytest.fixture(scope="session")
def bank64(grid64):
    return build_filter_bank(grid64)


@pytest.fixture(scope="session")
def grid2d():
    return TorusGrid(2, 32)


ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
