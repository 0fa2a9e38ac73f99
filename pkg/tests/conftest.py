import random

import pytest

from thetareg.cli import parse_eta
from thetareg.fields import parse_field
from thetareg.regulators import regulator_report
from thetareg.ring import alpha_of


def report(field_key: str, eta: str, p: int):
    """alpha and regulator report for eta given high degree first."""
    fld = parse_field(field_key)
    alpha = alpha_of(parse_eta(eta, fld), p, fld)
    return alpha, regulator_report(alpha)


@pytest.fixture
def rng():
    return random.Random(20240611)


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    if mod is None or not getattr(mod, "RESULTS", None):
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[k])
