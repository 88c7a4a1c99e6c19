from __future__ import annotations

import warnings

import pytest
from hypothesis import HealthCheck, settings

from genplateau.field import ProvenanceWarning

settings.register_profile(
    "default", max_examples=100, deadline=None, suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large, HealthCheck.large_base_example]
)
settings.load_profile("default")

warnings.simplefilter("ignore", ProvenanceWarning)

# acceptance criteria record "PASS"/"FAIL" lines here; printed in the terminal summary
ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[n])


@pytest.fixture
def acceptance_log():
    return ACCEPTANCE_LINES
