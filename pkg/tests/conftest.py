from __future__ import annotations

import pytest
from hypothesis import settings

from elliptic_intertwiners.combs import SampledEqualityPolicy

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")


@pytest.fixture
def pol() -> SampledEqualityPolicy:
    return SampledEqualityPolicy(n_samples=8)


_ACCEPTANCE: list[str] = []


@pytest.fixture(scope="session")
def acceptance_log() -> list[str]:
    """Lines printed in the terminal summary, one per acceptance criterion."""
    return _ACCEPTANCE


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in _ACCEPTANCE:
            terminalreporter.write_line(line)
