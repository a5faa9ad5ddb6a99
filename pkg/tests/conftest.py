import pytest

from qclaw.config import get_settings
from qclaw.seedcore import check_compatible
from qclaw.seedfile import bundled_pairs


@pytest.fixture(autouse=True)
def _fresh_settings(monkeypatch):
    # Single-threaded, untimed defaults unless a test overrides them
    monkeypatch.setenv("QCLAW_THREADS", "1")
    monkeypatch.delenv("QCLAW_REPORT_TIMING", raising=False)
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture(scope="session")
def pairs():
    return bundled_pairs()


@pytest.fixture
def rank1():
    return check_compatible([[0, -1], [1, 0]], [[0], [1]])


@pytest.fixture
def a2():
    return check_compatible([[0, 1], [-1, 0]], [[0, 1], [-1, 0]])


@pytest.fixture
def a2_principal(pairs):
    return pairs["a2_principal"]


@pytest.fixture
def a3_principal(pairs):
    return pairs["a3_principal"]
