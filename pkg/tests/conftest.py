import pytest

_LINES = []


class Recorder:
    """Collects one PASS/FAIL line per acceptance criterion."""

    def record(self, label, ok, detail=""):
        line = f"{'PASS' if ok else 'FAIL'}  {label}" + (f"  ({detail})" if detail else "")
        _LINES.append(line)
        print(line)
        return ok


@pytest.fixture(scope="session")
def acceptance():
    return Recorder()


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in _LINES:
            terminalreporter.write_line(line)
