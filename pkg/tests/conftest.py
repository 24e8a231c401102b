import pathlib

import pytest

GOLDEN = pathlib.Path(__file__).parent / "golden"

_ACCEPTANCE = {}


class _Recorder:
    def __call__(self, number: int, passed: bool, detail: str = "") -> bool:
        _ACCEPTANCE[number] = (bool(passed), detail)
        return bool(passed)


@pytest.fixture
def record():
    return _Recorder()


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        passed, detail = _ACCEPTANCE[number]
        verdict = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"criterion {number:2d}: {verdict}  {detail}")
