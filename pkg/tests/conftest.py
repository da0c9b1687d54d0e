import hypothesis
import numpy as np
import pytest

np.seterr(all="raise", under="ignore")

hypothesis.settings.register_profile("default", max_examples=100, deadline=None)
hypothesis.settings.register_profile("fast", max_examples=10, deadline=None)
hypothesis.settings.load_profile("default")

_CRITERIA: list[str] = []


@pytest.fixture(scope="session")
def criterion_report():
    """Collects one PASS/FAIL line per acceptance criterion."""

    def report(number, ok, detail=""):
        _CRITERIA.append(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}".rstrip())
        print(_CRITERIA[-1])

    return report


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_CRITERIA, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
