import os

import pytest
from hypothesis import HealthCheck, settings

from otforge import intmat
from otforge.classify import FactoredCharPoly
from otforge.polyring import IntPoly, companion

settings.register_profile(
    "otforge",
    derandomize=True,
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile(os.environ.get("OTFORGE_HYPOTHESIS_PROFILE", "otforge"))

T = IntPoly([0, 1])
C2 = IntPoly([1, 0, 1])  # t^2 + 1
B1 = IntPoly([1, 3, 3, 3, 1])
B2 = IntPoly([1, 4, 3, 4, 1])
B12 = IntPoly([1, 0, 0, 0, 8, 20, 19, 20, 8, 0, 0, 0, 1])  # degree-12 example


def jordan_block_matrix():
    """8x8: [[C, I], [0, C]] for C = companion(t^2+1), next to companion(B1)."""
    c = companion(C2)
    top = tuple(tuple(list(a) + list(b)) for a, b in zip(c, intmat.identity(2)))
    bot = tuple(tuple(list(a) + list(b)) for a, b in zip(intmat.zeros(2, 2), c))
    return intmat.block_diag(top + bot, companion(B1))


@pytest.fixture(scope="session")
def j1_case():
    return companion(C2 * B1), FactoredCharPoly(C2, [B1])


@pytest.fixture(scope="session")
def j_case():
    return companion(C2 * B1 * B2), FactoredCharPoly(C2, [B1, B2])


@pytest.fixture(scope="session")
def jordan_case():
    return jordan_block_matrix(), FactoredCharPoly(C2 * C2, [B1])


@pytest.fixture(scope="session")
def j1_family(j1_case):
    from otforge.units import build_dirichlet_family

    m, f = j1_case
    return build_dirichlet_family(m, f)


@pytest.fixture(scope="session")
def jordan_family(jordan_case):
    from otforge.units import build_dirichlet_family

    m, f = jordan_case
    return build_dirichlet_family(m, f)


ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[k])
