import pytest

from jscuav.params import NetworkParams

_ACCEPTANCE: dict[str, str] = {}


def _sort_key(cid: str):
    return (0, int(cid)) if cid.isdigit() else (1, cid)


@pytest.fixture
def acceptance():
    """Record one pass/fail line per acceptance criterion (printed in the summary)."""

    def record(cid: str, title: str, passed: bool, detail: str) -> bool:
        _ACCEPTANCE[cid] = f"[{'PASS' if passed else 'FAIL'}] {cid:>2}. {title}: {detail}"
        print(_ACCEPTANCE[cid])
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for cid in sorted(_ACCEPTANCE, key=_sort_key):
        terminalreporter.write_line(_ACCEPTANCE[cid])


@pytest.fixture
def params():
    return NetworkParams()
