import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from wiretapnet.gf import field_new
from wiretapnet.matrix import Matrix, rank
from wiretapnet.netcode import lif_construct
from wiretapnet.network import butterfly
from wiretapnet.secure import SecureCodeBundle, secure_lif_construct
from wiretapnet.wiretap import from_parity_check

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

BE, ED, EF = 6, 7, 8


@pytest.fixture(scope="session")
def gf2():
    return field_new(2)


@pytest.fixture(scope="session")
def gf3():
    return field_new(3)


@pytest.fixture(scope="session")
def bfly():
    return butterfly()


@pytest.fixture(scope="session")
def bfly_secure(gf3, bfly):
    return secure_lif_construct(bfly, 2, 1, 1, gf3, H=[[1, 1]])


@pytest.fixture(scope="session")
def bfly_gf2_code(gf2, bfly):
    return lif_construct(bfly, 2, gf2)


@pytest.fixture(scope="session")
def bfly_insecure(gf2, bfly_gf2_code):
    """The GF(2) butterfly code (BE carries x1 + x2) paired with H = [1 1]."""
    return SecureCodeBundle(from_parity_check(gf2, [[1, 1]]), bfly_gf2_code, 1, frozenset(range(9)))


def random_full_rank(field, k, n, rng):
    while True:
        m = Matrix(field, rng.integers(0, field.order, size=(k, n)))
        if rank(m) == k:
            return m


def random_invertible(field, n, rng):
    return random_full_rank(field, n, n, rng)


# --- acceptance report ---

_RESULTS: list[tuple[str, str, float]] = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    label = marker.args[0]
    if rep.when == "call" or (rep.when == "setup" and rep.failed):
        _RESULTS.append((label, "PASS" if rep.passed else "FAIL", rep.duration))


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for label, verdict, secs in sorted(_RESULTS, key=lambda r: int(r[0].split(".")[0])):
        terminalreporter.write_line(f"{verdict}  {label}  ({secs:.2f}s)")
