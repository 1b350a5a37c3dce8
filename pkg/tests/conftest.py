import pytest

_LINES: list[str] = []


@pytest.fixture
def record():
    """Log one acceptance line; shown in the terminal summary."""
    def _record(label: str, ok: bool, detail: str = "") -> None:
        _LINES.append(f"{'PASS' if ok else 'FAIL'} {label}" + (f": {detail}" if detail else ""))
    return _record


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in _LINES:
            terminalreporter.write_line(line)
