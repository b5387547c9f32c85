import pytest

ACCEPTANCE: list[tuple[str, str, str]] = []


@pytest.fixture
def record_criterion(capsys):
    """Print and remember one acceptance line: ``record_criterion(id, ok, detail)``."""

    def record(ident: str, status: str, detail: str = "") -> None:
        line = f"ACCEPTANCE {ident}: {status}" + (f"  ({detail})" if detail else "")
        ACCEPTANCE.append((ident, status, detail))
        with capsys.disabled():
            print("\n" + line)

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for ident, status, detail in sorted(ACCEPTANCE, key=lambda t: int(t[0].split()[0])):
        terminalreporter.write_line(f"{ident}: {status}" + (f"  ({detail})" if detail else ""))
