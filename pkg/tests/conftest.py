import datetime

import pytest

from webometer.sim_index import InterfaceKind, SimConfig, generate_corpus


class FakeClock:
    """Controllable date source for quota tests."""

    def __init__(self, start: datetime.date = datetime.date(2004, 7, 1)):
        self.current = start

    def __call__(self) -> datetime.date:
        return self.current

    def advance(self, days: int = 1) -> None:
        self.current += datetime.timedelta(days=days)


@pytest.fixture
def clock():
    return FakeClock()


@pytest.fixture(scope="session")
def small_config():
    return SimConfig(seed=11, num_docs=1500, docs_per_day=50, vocab_size=800)


@pytest.fixture(scope="session")
def small_corpus(small_config):
    return generate_corpus(small_config)


@pytest.fixture(scope="session")
def corpus10k():
    return generate_corpus(SimConfig(seed=7, num_docs=10_000))


@pytest.fixture(scope="session")
def kinds():
    return (InterfaceKind.STANDARD, InterfaceKind.API)
