import os

import pytest
from hypothesis import HealthCheck, settings

from dgha.cdga import monomial_quotient
from dgha.exactfield import FieldSpec
from dgha.presentation import build, load_example

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", deadline=None, max_examples=300,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

QQ = FieldSpec.rationals()
GF7 = FieldSpec.prime(7)


@pytest.fixture(params=[QQ, GF7], ids=["Q", "GF7"])
def field(request):
    return request.param


@pytest.fixture
def example():
    return lambda name: build(load_example(name))


@pytest.fixture
def R_dn():
    return monomial_quotient(QQ, ["x"], [(2,)])


@pytest.fixture
def R_nG():
    return monomial_quotient(QQ, ["x", "y"], [(2, 0), (1, 1), (0, 2)])


# acceptance lines, printed once at the end of the run
ACCEPTANCE: dict = {}


def record_acceptance(name: str, ok: bool, detail: str = "") -> bool:
    ACCEPTANCE[name] = (ok, detail)
    return ok


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, (ok, detail) in ACCEPTANCE.items():
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
