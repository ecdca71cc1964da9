import numpy as np
import pytest

_acceptance: dict[str, tuple[str, str]] = {}


@pytest.fixture
def rng():
    return np.random.default_rng(20001016)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if item.module.__name__.rpartition(".")[2] != "test_acceptance":
        return
    if rep.when == "call" or rep.failed:
        doc = (item.function.__doc__ or item.name).strip().splitlines()[0]
        prev = _acceptance.get(item.nodeid, ("passed", doc))[0]
        _acceptance[item.nodeid] = ("failed" if rep.failed or prev == "failed" else rep.outcome, doc)


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for outcome, doc in _acceptance.values():
        terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {doc}")
