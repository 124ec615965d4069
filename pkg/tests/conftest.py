import pytest

from apgroups.field_core import build_context, primes_upto

ACCEPTANCE_LINES: list[str] = []


def record(criterion: str, ok: bool, detail: str = "") -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] {criterion}" + (f": {detail}" if detail else "")
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def small_primes(limit):
    return [int(p) for p in primes_upto(limit) if p >= 3]


@pytest.fixture(scope="session")
def ctx_cache():
    cache = {}

    def get(p):
        if p not in cache:
            cache[p] = build_context(p)
        return cache[p]

    return get
