"""Collects acceptance verdicts and prints one line per criterion."""

from __future__ import annotations

import pytest

_VERDICTS: dict[int, tuple[str, bool, str]] = {}


@pytest.fixture
def criterion():
    def record(number: int, title: str, passed: bool, detail: str = "") -> bool:
        _VERDICTS[number] = (title, passed, detail)
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if not _VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_VERDICTS):
        title, passed, detail = _VERDICTS[number]
        verdict = "PASS" if passed else "FAIL"
        line = f"criterion {number} [{verdict}] {title}"
        if detail:
            line += f" -- {detail}"
        terminalreporter.write_line(line)
