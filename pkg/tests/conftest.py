import cmath
import math

import numpy as np
import pytest

from okalab.branchlog import BranchedPoint

_ACCEPTANCE = {}


def random_branch(rng, rmin=0.25, rmax=4.0, theta_max=3 * math.pi):
    ell = complex(rng.uniform(math.log(rmin), math.log(rmax)), rng.uniform(-theta_max, theta_max))
    return BranchedPoint(cmath.exp(ell), ell)


def random_w(rng, rmin=0.25, rmax=4.0):
    return math.exp(rng.uniform(math.log(rmin), math.log(rmax))) * cmath.exp(1j * rng.uniform(-math.pi, math.pi))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_runtest_logreport(report):
    crit = dict(report.user_properties).get("criterion")
    if crit is None:
        return
    if report.when == "call" or report.outcome != "passed":
        prev = _ACCEPTANCE.get(crit, ("PASS", ""))
        ok = report.outcome == "passed" and prev[0] == "PASS"
        _ACCEPTANCE[crit] = ("PASS" if ok else "FAIL", dict(report.user_properties).get("title", ""))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for crit in sorted(_ACCEPTANCE):
        status, title = _ACCEPTANCE[crit]
        terminalreporter.write_line(f"[{status}] criterion {crit:>2}: {title}")
