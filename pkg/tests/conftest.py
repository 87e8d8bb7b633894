import pytest
from hypothesis import settings

# symbolic products vary a lot in cost; wall-clock deadlines only add flakiness
settings.register_profile("suite", deadline=None)
settings.load_profile("suite")

_LINES: dict = {}


@pytest.fixture
def criterion():
    """Record the pass/fail line of one acceptance criterion."""
    def record(number: int, ok: bool, detail: str) -> bool:
        _LINES[number] = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
        print(_LINES[number])
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(_LINES):
            terminalreporter.write_line(_LINES[n])
