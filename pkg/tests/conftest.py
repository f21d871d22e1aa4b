import pytest

_LINES = []


@pytest.fixture
def report(capsys):
    """Print an acceptance verdict line immediately and again in the summary."""
    def emit(criterion: int, passed: bool, detail: str):
        line = f"CRITERION {criterion}: {'PASS' if passed else 'FAIL'} - {detail}"
        _LINES.append(line)
        with capsys.disabled():
            print("\n" + line, flush=True)
        return passed
    return emit


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in _LINES:
            terminalreporter.write_line(line)
