import pytest

from hermod.genio import default_corpus

ACCEPTANCE: dict = {}


def record(criterion: int, passed: bool, detail: str) -> None:
    """Remember an acceptance outcome for the end-of-run summary."""
    ACCEPTANCE[criterion] = (passed, detail)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        passed, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if passed else 'FAIL'}  {detail}")


@pytest.fixture(scope="session")
def corpus():
    return default_corpus()


@pytest.fixture(scope="session")
def t0():
    return 10


@pytest.fixture(scope="session")
def chi8(corpus, t0):
    return corpus.hmf("chi8", t0)
