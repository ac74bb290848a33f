from __future__ import annotations

import contextlib

import pytest

_LINES: list[str] = []


@pytest.fixture
def criterion():
    """Context manager recording one PASS/FAIL line for an acceptance criterion."""

    @contextlib.contextmanager
    def record(label: str):
        try:
            yield
        except BaseException as exc:
            line = f"FAIL {label}: {type(exc).__name__}: {str(exc).splitlines()[0] if str(exc) else ''}"
            _LINES.append(line)
            print(line)
            raise
        line = f"PASS {label}"
        _LINES.append(line)
        print(line)

    return record


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in _LINES:
            terminalreporter.write_line(line)
