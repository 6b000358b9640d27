"""Repeated sessions over a grid of response rates, with per-rate summaries.

Every (rate, repetition) cell draws from its own generator derived from
``(master seed, rate, repetition)``, so results do not depend on the order
or thread in which cells run.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from ._kernel import arming_intervals_kernel, run_session_kernel
from .errors import ConfigurationError
from .responder import ResponderSpec
from .schedules import ScheduleKind, ScheduleSpec, cycle_steps

__all__ = [
    "SessionConfig",
    "SessionRecord",
    "SweepPoint",
    "hdi",
    "cell_rng",
    "run_session",
    "run_sweep",
    "inter_arming_times",
    "THREADS_ENV",
]

THREADS_ENV = "SCHEDSIM_THREADS"


def hdi(samples, mass: float = 0.95) -> tuple[float, float]:
    """Narrowest contiguous window of sorted samples holding ``ceil(mass*n)`` values.

    Ties resolve to the leftmost window.
    """
    x = np.sort(np.asarray(samples, dtype=float).ravel())
    n = x.size
    if n == 0:
        raise ValueError("hdi of an empty sample")
    if not 0 < mass <= 1:
        raise ValueError(f"mass must be in (0, 1], got {mass}")
    k = min(n, max(1, math.ceil(mass * n - 1e-9)))
    widths = x[k - 1 :] - x[: n - k + 1]
    i = int(np.argmin(widths))
    return float(x[i]), float(x[i + k - 1])


@dataclass
class SessionConfig:
    duration: float = 600.0
    dt: float = 0.005
    repetitions: int = 100
    rates: Sequence[float] = field(default_factory=lambda: np.arange(0, 201, 5.0))
    seed: int = 0

    def __post_init__(self):
        self.rates = np.asarray(self.rates, dtype=float)
        if self.repetitions < 1:
            raise ConfigurationError("repetitions must be >= 1")
        if (self.rates < 0).any() or not np.isfinite(self.rates).all():
            raise ConfigurationError("rates must be finite and >= 0")
        if not self.dt > 0 or not self.duration > 0:
            raise ConfigurationError("duration and dt must be > 0")
        self.n_steps  # validates divisibility

    @property
    def n_steps(self) -> int:
        r = self.duration / self.dt
        n = round(r)
        if abs(r - n) > 1e-9 * max(1.0, r):
            raise ConfigurationError(f"dt={self.dt} does not divide duration={self.duration}")
        return int(n)

    @classmethod
    def desk(cls, seed: int = 0, **kw) -> "SessionConfig":
        """600 s sessions, 100 repetitions, rates 0..200 step 5."""
        return cls(seed=seed, **kw)

    @classmethod
    def full(cls, seed: int = 0, **kw) -> "SessionConfig":
        """One-hour sessions, 500 repetitions, integer rates 0..200."""
        kw.setdefault("duration", 3600.0)
        kw.setdefault("repetitions", 500)
        kw.setdefault("rates", np.arange(0, 201, 1.0))
        return cls(seed=seed, **kw)


PROFILES = {"desk": SessionConfig.desk, "full": SessionConfig.full}


@dataclass(frozen=True)
class SessionRecord:
    responses: int
    armings: int
    reinforcers: int
    duration: float

    @property
    def response_rate(self) -> float:
        return self.responses * 60.0 / self.duration

    @property
    def reinforcement_rate(self) -> float:
        return self.reinforcers * 60.0 / self.duration


@dataclass
class SweepPoint:
    B_nominal: float
    B_realized_mean: float
    R_mean: float
    hdi_lo: float
    hdi_hi: float
    samples: np.ndarray
    response_samples: np.ndarray

    @property
    def reps(self) -> int:
        return len(self.samples)

    @property
    def R_se(self) -> float:
        if self.reps < 2:
            return 0.0
        return float(np.std(self.samples, ddof=1) / math.sqrt(self.reps))


def _rate_key(B: float) -> int:
    # milli-responses/min, so non-integer grids still get distinct streams
    return int(round(B * 1000))


def cell_rng(seed: int, B: float, rep: int) -> np.random.Generator:
    """Generator for one (rate, repetition) cell, split off the master seed."""
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(_rate_key(B), int(rep)))
    return np.random.Generator(np.random.PCG64(ss))


def _kernel_args(schedule: ScheduleSpec, responder: ResponderSpec, dt: float):
    if not math.isclose(responder.t, dt, rel_tol=1e-12):
        raise ConfigurationError(f"responder step {responder.t} differs from session dt {dt}")
    burst = responder.burst
    return (
        schedule.kind.code,
        cycle_steps(schedule, dt),
        schedule.p,
        schedule.rdrl_rearm,
        burst is not None,
        burst.p_run if burst else 0.0,
        burst.p_break if burst else 0.0,
        responder.p_response,
    )


def run_session(
    schedule: ScheduleSpec,
    responder: ResponderSpec,
    duration: float = 600.0,
    dt: float = 0.005,
    seed=0,
) -> SessionRecord:
    """Simulate one session. ``seed`` may be an int or a ``numpy`` Generator."""
    n = SessionConfig(duration=duration, dt=dt, repetitions=1, rates=[0.0]).n_steps
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    resp, armed, deliv = run_session_kernel(*_kernel_args(schedule, responder, dt), n, rng)
    return SessionRecord(int(resp), int(armed), int(deliv), float(duration))


def _n_threads() -> int:
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ConfigurationError(f"{THREADS_ENV} must be an integer, got {env!r}") from None
    return os.cpu_count() or 1


def run_sweep(
    config: SessionConfig,
    schedule: ScheduleSpec,
    responder: Optional[ResponderSpec] = None,
    mass: float = 0.95,
) -> list[SweepPoint]:
    """Run ``repetitions`` sessions at every rate in ``config.rates``.

    ``responder`` is a template whose rate is replaced by each grid value
    (for bursty responders the grid value is the local rate).
    """
    if responder is None:
        responder = ResponderSpec(0.0, config.dt)
    rates = np.sort(np.unique(config.rates))
    specs = [responder.with_rate(B) for B in rates]
    args = [_kernel_args(schedule, s, config.dt) for s in specs]
    n, reps = config.n_steps, config.repetitions

    counts = np.zeros((len(rates), reps, 2), dtype=np.int64)

    def work(i: int, r: int) -> None:
        rng = cell_rng(config.seed, rates[i], r)
        resp, _, deliv = run_session_kernel(*args[i], n, rng)
        counts[i, r, 0] = resp
        counts[i, r, 1] = deliv

    cells = [(i, r) for i in range(len(rates)) for r in range(reps)]
    threads = _n_threads()
    if threads == 1:
        for c in cells:
            work(*c)
    else:
        with ThreadPoolExecutor(threads) as ex:
            list(ex.map(lambda c: work(*c), cells))

    minutes = config.duration / 60.0
    points = []
    for i, B in enumerate(rates):
        R = counts[i, :, 1] / minutes
        Bs = counts[i, :, 0] / minutes
        lo, hi = hdi(R, mass)
        points.append(SweepPoint(float(B), float(Bs.mean()), float(R.mean()), lo, hi, R, Bs))
    return points


def inter_arming_times(
    schedule: ScheduleSpec, n_armings: int, dt: float = 0.005, rng=None
) -> np.ndarray:
    """Seconds between successive armings of an RI or RT schedule under constant responding."""
    if schedule.kind not in (ScheduleKind.RI, ScheduleKind.RT):
        raise ConfigurationError("inter-arming times are defined here for RI and RT only")
    if not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(rng)
    steps = arming_intervals_kernel(cycle_steps(schedule, dt), schedule.p, int(n_armings), rng)
    return steps * dt
