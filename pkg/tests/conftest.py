from __future__ import annotations

import pytest
from hypothesis import HealthCheck, settings

from housingforge.fixtures import all_fixtures
from housingforge.ingest import default_library

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(scope="session")
def lib():
    return default_library()


@pytest.fixture(scope="session")
def fixtures():
    return all_fixtures()


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
