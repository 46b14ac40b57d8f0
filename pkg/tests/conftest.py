import pytest

_VERDICTS: list[str] = []


@pytest.fixture
def verdict():
    """Record a one-line PASS/FAIL for an acceptance criterion and return the flag."""

    def record(number: int, title: str, ok: bool, detail: str) -> bool:
        ok = bool(ok)
        _VERDICTS.append(f"[{'PASS' if ok else 'FAIL'}] criterion {number:2d} {title}: {detail}")
        print(_VERDICTS[-1])
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_VERDICTS, key=lambda s: int(s.split()[2])):
            terminalreporter.write_line(line)
