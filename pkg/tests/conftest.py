import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile(
    "repo", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("repo")

from monosoergel.rootdata import preset  # noqa: E402


@pytest.fixture(scope="session")
def pgl2():
    return preset("PGL2")


@pytest.fixture(scope="session")
def pgl3():
    return preset("PGL3")


@pytest.fixture(scope="session")
def sl2():
    return preset("SL2")


def pytest_terminal_summary(terminalreporter):
    try:
        import test_acceptance
    except ImportError:
        return
    if not test_acceptance.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in test_acceptance.summary_lines():
        terminalreporter.write_line(line)
