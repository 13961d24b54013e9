from pathlib import Path

import pytest

SCENARIOS = Path(__file__).resolve().parent.parent / "scenarios"


@pytest.fixture
def scenario_dir():
    return SCENARIOS


@pytest.fixture
def write_file(tmp_path):
    def _write(name, text):
        path = tmp_path / name
        path.write_text(text)
        return path

    return _write


# Acceptance verdicts, printed as one line per criterion after the run.
VERDICTS: dict = {}


@pytest.fixture
def criterion():
    from contextlib import contextmanager

    @contextmanager
    def _criterion(number, summary):
        VERDICTS[number] = (False, summary)
        yield
        VERDICTS[number] = (True, summary)

    return _criterion


def pytest_terminal_summary(terminalreporter):
    if not VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(VERDICTS):
        ok, summary = VERDICTS[number]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {summary}")
