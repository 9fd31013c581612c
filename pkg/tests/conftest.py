import json
from pathlib import Path

import mpmath
import pytest
from hypothesis import HealthCheck, settings

from apery4.numerics import make_context

settings.register_profile(
    "apery4",
    max_examples=25,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("apery4")

ORACLE = json.loads(Path(__file__).with_name("oracle_values.json").read_text())


def oracle(*path):
    """Frozen oracle value as an 80-digit mpf (or a plain dict of strings)."""
    node = ORACLE
    for key in path:
        node = node[key]
    with mpmath.workdps(ORACLE["dps"]):
        if isinstance(node, str):
            return mpmath.mpf(node)
        if isinstance(node, list):
            return [mpmath.mpf(v) for v in node]
    return node


def close(value, expected, digits):
    """|value - expected| < 10^-digits * max(1, |expected|), compared at high precision."""
    with mpmath.workdps(ORACLE["dps"]):
        v = mpmath.mpmathify(value)
        e = mpmath.mpmathify(expected)
        return abs(v - e) < mpmath.mpf(10) ** (-digits) * max(1, abs(e))


@pytest.fixture(scope="session")
def ctx30():
    return make_context(30)


@pytest.fixture(scope="session")
def ctx60():
    return make_context(60)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
