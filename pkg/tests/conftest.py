import pytest

_ACCEPTANCE = []


@pytest.fixture
def acceptance():
    """Record one acceptance line: ``record(number, title, passed, seconds, detail)``."""
    def record(number, title, passed, seconds, detail=""):
        _ACCEPTANCE.append((number, title, passed, seconds, detail))
    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, passed, seconds, detail in sorted(_ACCEPTANCE):
        mark = "PASS" if passed else "FAIL"
        line = f"criterion {number}: {mark}  {title}  ({seconds:.2f}s)"
        if detail:
            line += f"  {detail}"
        terminalreporter.write_line(line)
