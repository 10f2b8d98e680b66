import pytest

ACCEPTANCE: dict[int | str, tuple[bool, str]] = {}


def _label(key) -> str:
    return f"criterion {key:>2}" if isinstance(key, int) else f"{key:<12}"


@pytest.fixture
def acceptance():
    """Record one line per acceptance criterion for the terminal summary."""
    def record(key: int | str, ok: bool, detail: str) -> None:
        ACCEPTANCE[key] = (ok, detail)
        print(f"{_label(key)}: {'PASS' if ok else 'FAIL'}  {detail}")
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE, key=lambda k: (isinstance(k, str), str(k).zfill(3))):
        ok, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"{_label(key)}: {'PASS' if ok else 'FAIL'}  {detail}")
