import pytest

ACCEPTANCE_LINES: list[str] = []


class ScriptedRng:
    """Stand-in RNG returning pre-arranged draws, for hand-stepped tests."""

    def __init__(self, uniforms=(), integers=()):
        self.uniforms = list(uniforms)
        self.integers = list(integers)

    def random(self):
        return self.uniforms.pop(0)

    def randrange(self, n):
        value = self.integers.pop(0)
        assert 0 <= value < n, f"scripted integer {value} outside range({n})"
        return value


@pytest.fixture
def scripted():
    return ScriptedRng


@pytest.fixture
def acceptance_log():
    def record(criterion: int, ok: bool, detail: str):
        ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] criterion {criterion}: {detail}")
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
