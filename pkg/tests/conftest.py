from __future__ import annotations

import contextlib

import pytest

from ndkernel.environment import ProofEnvironment
from ndkernel.shell import default_store

ACCEPTANCE_RESULTS: list[tuple[str, bool]] = []


@contextlib.contextmanager
def criterion(name: str):
    """Record one acceptance criterion verdict for the terminal summary."""
    try:
        yield
    except BaseException:
        ACCEPTANCE_RESULTS.append((name, False))
        raise
    ACCEPTANCE_RESULTS.append((name, True))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}")


@pytest.fixture(scope="session")
def store():
    return default_store()


@pytest.fixture(scope="session")
def km_env(store) -> ProofEnvironment:
    return ProofEnvironment.from_json(store.read("Kelley-Morse"))
