import pytest

_ACCEPTANCE_LINES: dict[int, str] = {}


class AcceptanceLog:
    """Collects one verdict line per acceptance criterion."""

    def record(self, number: int, passed: bool, detail: str):
        _ACCEPTANCE_LINES[number] = f"criterion {number:2d}: {'PASS' if passed else 'FAIL'}: {detail}"


@pytest.fixture(scope="session")
def acceptance():
    return AcceptanceLog()


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE_LINES):
        terminalreporter.write_line(_ACCEPTANCE_LINES[number])
