import os
import re
import sys
from fractions import Fraction

import pytest
from hypothesis import settings

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile("default", deadline=None, max_examples=60, derandomize=True)
settings.load_profile("default")

from formalis.exactpoly import VarSpec  # noqa: E402


@pytest.fixture
def xy():
    return VarSpec(("x", "y"))


@pytest.fixture
def xyt():
    return VarSpec(("x", "y", "t"))


@pytest.fixture
def laurent():
    return VarSpec(("x", "y", "t"), invertible=("x",), series_var="t")


def frac(s):
    return Fraction(s)


# -- acceptance summary -------------------------------------------------------

_acceptance = {}
_CRITERION = re.compile(r"test_criterion_(\d+)_(\w+)")


def pytest_runtest_logreport(report):
    m = _CRITERION.search(report.nodeid)
    if m is None or (report.when != "call" and report.passed):
        return
    _acceptance[int(m.group(1))] = (report.passed, m.group(2), report.duration)


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_acceptance):
        ok, name, duration = _acceptance[number]
        terminalreporter.write_line(
            f"criterion {number}: {'PASS' if ok else 'FAIL'}  {name.replace('_', ' ')}  ({duration:.2f}s)")
