import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from silting import instances  # noqa: E402
from silting.algebra import enumerate_modules, projective_module, simple_module  # noqa: E402
from silting.functors import beta_star, endo_algebra  # noqa: E402
from silting.torsion import TorsionPair  # noqa: E402


@pytest.fixture(scope="session")
def A():
    return instances.a2()


@pytest.fixture(scope="session")
def Pbar(A):
    return instances.silting_pair(A)


@pytest.fixture(scope="session")
def single(A):
    return instances.arrow_complex(A)


@pytest.fixture(scope="session")
def tilting(A):
    return instances.tilting_pair(A)


@pytest.fixture(scope="session")
def regular(A):
    return instances.regular(A)


@pytest.fixture(scope="session")
def tp(Pbar):
    return TorsionPair.of(Pbar)


@pytest.fixture(scope="session")
def b(tp):
    return beta_star(tp.certificate)


@pytest.fixture(scope="session")
def inv(A):
    return enumerate_modules(A, 3)


@pytest.fixture(scope="session")
def E_inv(Pbar):
    return enumerate_modules(endo_algebra(Pbar).algebra, 3)


@pytest.fixture(scope="session")
def S1(A):
    return simple_module(A, "1")


@pytest.fixture(scope="session")
def S2(A):
    return simple_module(A, "2")


@pytest.fixture(scope="session")
def P1(A):
    return projective_module(A, "1")


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        terminalreporter.write_line(results[n])
