import time

import pytest

from thermosolutal.convection import run_lockstep
from thermosolutal.domain import Grid2D
from thermosolutal.elliptic import geometry_constants
from thermosolutal.harness import suite_scenarios

_CRITERIA: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        ok, detail = _CRITERIA[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")


@pytest.fixture(scope="session")
def criterion():
    """Record one pass/fail line per acceptance criterion."""
    def record(n: int, ok: bool, detail: str = ""):
        prev = _CRITERIA.get(n)
        if prev is not None:
            ok = ok and prev[0]
            detail = f"{prev[1]}; {detail}"
        _CRITERIA[n] = (bool(ok), detail)
    return record


@pytest.fixture(scope="session")
def grid64():
    return Grid2D(64, 64, 1.0, 1.0)


@pytest.fixture(scope="session")
def geo64(grid64):
    return geometry_constants(grid64)


@pytest.fixture(scope="session")
def suite():
    return suite_scenarios(64, 1.0)


@pytest.fixture(scope="session")
def suite_run(suite):
    """All five suite scenarios at 64^2 to t = 1, integrated once, with wall time."""
    t0 = time.perf_counter()
    trajs = run_lockstep(list(suite.values()))
    elapsed = time.perf_counter() - t0
    return dict(zip(suite, trajs)), elapsed
