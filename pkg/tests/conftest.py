import pytest


@pytest.fixture
def acceptance(request):
    """Record one PASS/FAIL line per acceptance criterion and print it."""
    lines = request.config.stash.setdefault(_LINES, [])

    def report(number: int, title: str, ok: bool, detail: str) -> bool:
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:2d} {title}: {detail}"
        print(line)
        lines.append((number, line))
        return ok

    return report


_LINES = pytest.StashKey[list]()


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_LINES, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)
