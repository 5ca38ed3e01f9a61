import pytest

# (criterion id, passed, detail) rows filled in by test_acceptance.py
ACCEPTANCE = []


@pytest.fixture(scope="session")
def record():
    def _record(cid, ok, detail):
        ACCEPTANCE.append((cid, bool(ok), detail))
        print(f"[{'PASS' if ok else 'FAIL'}] criterion {cid}: {detail}")
        return bool(ok)

    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for cid, ok, detail in sorted(ACCEPTANCE, key=lambda r: r[0]):
        tr.write_line(f"{'PASS' if ok else 'FAIL'}  {cid:<4} {detail}")
