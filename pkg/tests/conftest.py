import functools

import numpy as np
import pytest

from schedsim import BurstSpec, ResponderSpec, ScheduleSpec, SessionConfig, run_sweep

SEED = 1
DT = 0.005

_acceptance_lines: list[str] = []


def record(criterion: str, passed: bool, detail: str) -> None:
    line = f"[{'PASS' if passed else 'FAIL'}] {criterion}: {detail}"
    _acceptance_lines.append(line)
    print(line)


@pytest.fixture
def report():
    return record


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)


def schedule_for(kind: str, size: float) -> ScheduleSpec:
    if kind == "RI":
        return ScheduleSpec.ri(size, dt=DT)
    if kind == "RT":
        return ScheduleSpec.rt(size, dt=DT)
    if kind == "RDRL":
        return ScheduleSpec.rdrl(size, dt=DT)
    return ScheduleSpec.rr(size)


@functools.lru_cache(maxsize=None)
def desk_sweep(kind: str, size: float, burst=None, rates=None, seed: int = SEED):
    """Desk-scale sweep, memoized across test modules.

    ``burst`` is ``(p_run, p_break)`` or None; ``rates`` a tuple or None for the
    default 0..200 step 5 grid.
    """
    kw = {} if rates is None else {"rates": np.array(rates, dtype=float)}
    config = SessionConfig.desk(seed=seed, dt=DT, **kw)
    responder = ResponderSpec(0.0, DT, BurstSpec(*burst) if burst else None)
    return run_sweep(config, schedule_for(kind, size), responder)


def curve(points):
    B = np.array([p.B_nominal for p in points])
    R = np.array([p.R_mean for p in points])
    return B, R
