import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@pytest.fixture(scope="session")
def corpus():
    from corpus import random_connected_graphs

    return random_connected_graphs()


@pytest.fixture(scope="session")
def weighted_corpus():
    from corpus import random_weighted_graphs

    return random_weighted_graphs()


def pytest_terminal_summary(terminalreporter):
    from oracles import ACCEPTANCE_RESULTS

    if ACCEPTANCE_RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_RESULTS, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
