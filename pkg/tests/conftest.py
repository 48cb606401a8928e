"""Collects acceptance outcomes and prints one line per criterion at the end."""

import pytest

_RESULTS: dict[int, tuple[str, bool, str, list[str]]] = {}


class Recorder:
    def __call__(self, number: int, title: str, ok: bool, detail: str = "", notes=()):
        _RESULTS[number] = (title, bool(ok), detail, list(notes))
        return ok


@pytest.fixture
def record():
    return Recorder()


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(_RESULTS):
        title, ok, detail, notes = _RESULTS[n]
        tr.write_line(f"[{'PASS' if ok else 'FAIL'}] {n:2d}. {title}: {detail}")
        for note in notes:
            tr.write_line(f"          info: {note}")
