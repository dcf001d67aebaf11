import pytest

# criterion number -> (verdict, description); filled by test_acceptance.py
ACCEPTANCE: dict[int, tuple[str, str]] = {}


@pytest.fixture
def verdict():
    def record(number: int, ok: bool, text: str) -> bool:
        ACCEPTANCE[number] = ("PASS" if ok else "FAIL", text)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        status, text = ACCEPTANCE[number]
        terminalreporter.write_line(f"[{status}] criterion {number}: {text}")
