import pytest

from gaars import ars, hhs
from gaars.rng import Rng

# Fixture from the tiny backend: E0=2, s_m=3 (E_m=8), ring (9, 13) with keys (5, 7).
EXAMPLE = dict(E_m=8, s_m=3, ring=(9, 13), sks=(5, 7), deltas=(2, 4), delta_primes=(3, 2),
               b=6, tau=(0, 1))

_ACCEPTANCE: list[tuple[int, bool, str]] = []


def record_acceptance(number: int, passed: bool, detail: str) -> None:
    _ACCEPTANCE.append((number, passed, detail))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, passed, detail in sorted(_ACCEPTANCE):
        terminalreporter.write_line(
            f"criterion {number}: {'PASS' if passed else 'FAIL'}  {detail}")


@pytest.fixture(scope="session")
def tiny():
    return hhs.tiny()


@pytest.fixture(scope="session")
def realistic():
    return hhs.realistic()


@pytest.fixture
def example():
    return dict(EXAMPLE)


def distinct_keys(action, n, rng):
    keys: list[ars.KeyPair] = []
    i = 0
    while len(keys) < n:
        kp = ars.keygen(action, rng.fork("key", i))
        i += 1
        if all(kp.pk != other.pk for other in keys):
            keys.append(kp)
    return keys


@pytest.fixture
def setup_factory():
    """(master, keys) on a backend, seeded."""

    def make(action, n, seed):
        rng = Rng(seed)
        return ars.mkeygen(action, rng.fork("master")), distinct_keys(action, n, rng)

    return make
