"""Discrete-time state machines for random reinforcement schedules.

Four schedule kinds are supported:

* ``RI``   random interval: every ``T`` seconds a reinforcer is armed with
  probability ``p``; the next response collects it and restarts the clock.
* ``RDRL`` random differential reinforcement of low rates: every response
  restarts the clock; a reinforcer is armed with probability ``p`` once the
  clock completes a cycle of ``T`` seconds without a response.
* ``RT``   random time: every ``T`` seconds a reinforcer is delivered with
  probability ``p`` regardless of behavior.
* ``RR``   random ratio: each response is reinforced with probability ``1/x``.

:func:`step_schedule` is a pure transition function over an immutable
:class:`ScheduleState`. The compiled session kernel in :mod:`schedsim._kernel`
implements the same transitions and consumes random numbers in the same order,
so both routes produce identical trajectories for the same generator.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .errors import ConfigurationError

__all__ = [
    "ScheduleKind",
    "ScheduleSpec",
    "ScheduleState",
    "StepOutcome",
    "step_schedule",
    "cycle_steps",
    "DEFAULT_RDRL_P",
]

# Arming probability used for RDRL schedules built from a size alone.
# With T' = p * V this reproduces the published RDRL feedback curves.
DEFAULT_RDRL_P = 0.25


class ScheduleKind(str, enum.Enum):
    RI = "RI"
    RDRL = "RDRL"
    RT = "RT"
    RR = "RR"

    @property
    def code(self) -> int:
        return _KIND_CODES[self]


_KIND_CODES = {ScheduleKind.RI: 0, ScheduleKind.RDRL: 1, ScheduleKind.RT: 2, ScheduleKind.RR: 3}


@dataclass(frozen=True)
class ScheduleSpec:
    """Static description of a schedule.

    ``T`` is the cycle length in seconds and ``p`` the arming probability per
    completed cycle. ``x`` is the nominal size: seconds for the timed kinds
    (``T / p``) and a response count for RR. For RR ``T`` is ``None`` and ``p``
    equals ``1 / x``.

    ``rdrl_rearm`` selects the RDRL arming rule. When false (the default) only
    the first completed cycle after a response gets an arming attempt, so a
    response is reinforced iff its inter-response time exceeds ``T`` and a
    Bernoulli(p) draw succeeds. When true every completed cycle gets an
    attempt, which makes the required pause geometric with mean ``T / p``.
    """

    kind: ScheduleKind
    T: Optional[float]
    p: float
    x: float
    rdrl_rearm: bool = False

    def __post_init__(self):
        try:
            kind = ScheduleKind(self.kind)
        except ValueError:
            raise ConfigurationError(f"unknown schedule kind {self.kind!r}") from None
        object.__setattr__(self, "kind", kind)
        if kind is ScheduleKind.RR:
            if not self.x >= 1:
                raise ConfigurationError(f"RR ratio must be >= 1, got {self.x}")
            if not math.isclose(self.p, 1.0 / self.x, rel_tol=1e-12):
                raise ConfigurationError("RR requires p == 1/x")
            return
        if self.T is None or not self.T > 0:
            raise ConfigurationError(f"cycle length T must be > 0, got {self.T}")
        if not 0 < self.p <= 1:
            raise ConfigurationError(f"arming probability p must be in (0, 1], got {self.p}")
        if not self.x > 0:
            raise ConfigurationError(f"schedule size must be > 0, got {self.x}")

    # -- constructors ---------------------------------------------------------

    @classmethod
    def from_cycle(cls, kind, T: float, p: float, rdrl_rearm: bool = False) -> "ScheduleSpec":
        """Timed schedule from an explicit cycle length and probability."""
        return cls(ScheduleKind(kind), float(T), float(p), float(T) / float(p), rdrl_rearm)

    @classmethod
    def ri(cls, size: float, dt: float = 0.005, t_max: float = 1.0) -> "ScheduleSpec":
        from .solver import solve_cycle_params

        res = solve_cycle_params(size, dt=dt, t_max=t_max)
        return cls(ScheduleKind.RI, res.T, res.p, res.mean)

    @classmethod
    def rt(cls, size: float, dt: float = 0.005, t_max: float = 1.0) -> "ScheduleSpec":
        from .solver import solve_cycle_params

        res = solve_cycle_params(size, dt=dt, t_max=t_max)
        return cls(ScheduleKind.RT, res.T, res.p, res.mean)

    @classmethod
    def rdrl(
        cls, size: float, p: float = DEFAULT_RDRL_P, dt: float = 0.005, rdrl_rearm: bool = False
    ) -> "ScheduleSpec":
        """RDRL of mean size ``size`` seconds with cycle ``T' = p * size``.

        ``T'`` is rounded to a whole number of steps and ``p`` is then
        recomputed so that ``T'/p == size``.
        """
        if not size > 0:
            raise ConfigurationError(f"schedule size must be > 0, got {size}")
        n = max(1, round(p * size / dt))
        T = n * dt
        return cls(ScheduleKind.RDRL, T, min(1.0, T / size), size, rdrl_rearm)

    @classmethod
    def rr(cls, ratio: float) -> "ScheduleSpec":
        return cls(ScheduleKind.RR, None, 1.0 / ratio, float(ratio))

    @property
    def rate_ceiling(self) -> float:
        """Theoretical upper bound on reinforcers per minute (``60/x``); inf for RR."""
        if self.kind is ScheduleKind.RR:
            return math.inf
        return 60.0 / self.x


def cycle_steps(spec: ScheduleSpec, dt: float) -> int:
    """Number of ``dt`` steps in one cycle; raises if ``dt`` does not divide ``T``."""
    if not dt > 0:
        raise ConfigurationError(f"time step must be > 0, got {dt}")
    if spec.kind is ScheduleKind.RR:
        return 0
    ratio = spec.T / dt
    n = round(ratio)
    if n < 1 or abs(ratio - n) > 1e-9 * max(1.0, ratio):
        raise ConfigurationError(f"time step {dt} does not divide cycle length {spec.T}")
    return int(n)


@dataclass(frozen=True)
class ScheduleState:
    """Mutable-by-replacement schedule state.

    ``clock_steps`` counts whole steps since the last clock reset or cycle
    boundary, so it always stays below the cycle length. ``attempted`` marks
    that the current RDRL pause already had its arming attempt.
    """

    clock_steps: int = 0
    armed: bool = False
    attempted: bool = False
    armed_count: int = 0
    delivered_count: int = 0

    def clock(self, dt: float) -> float:
        return self.clock_steps * dt


@dataclass(frozen=True)
class StepOutcome:
    reinforced: bool = False
    armed_this_step: bool = False


def step_schedule(
    state: ScheduleState,
    spec: ScheduleSpec,
    response: bool,
    dt: float,
    rng: np.random.Generator,
) -> tuple[ScheduleState, StepOutcome]:
    """Advance ``state`` by one step of length ``dt``.

    A uniform draw is consumed only when an arming (or RR delivery) decision
    is actually made.
    """
    n = cycle_steps(spec, dt)
    kind = spec.kind
    clock, armed, attempted = state.clock_steps, state.armed, state.attempted
    n_armed, n_delivered = state.armed_count, state.delivered_count
    reinforced = armed_now = False

    if kind is ScheduleKind.RI:
        clock += 1
        if clock == n:
            clock = 0
            if not armed and rng.random() < spec.p:
                armed = armed_now = True
                n_armed += 1
        if response and armed:
            armed = False
            reinforced = True
            n_delivered += 1
            clock = 0

    elif kind is ScheduleKind.RDRL:
        if response:
            if armed:
                armed = False
                reinforced = True
                n_delivered += 1
            clock = 0
            attempted = False
        elif spec.rdrl_rearm or not attempted:
            clock += 1
            if clock == n:
                clock = 0
                attempted = True
                if not armed and rng.random() < spec.p:
                    armed = armed_now = True
                    n_armed += 1

    elif kind is ScheduleKind.RT:
        clock += 1
        if clock == n:
            clock = 0
            if rng.random() < spec.p:
                armed_now = reinforced = True
                n_armed += 1
                n_delivered += 1

    else:  # RR
        if response and rng.random() < spec.p:
            armed_now = reinforced = True
            n_armed += 1
            n_delivered += 1

    new = replace(
        state,
        clock_steps=clock,
        armed=armed,
        attempted=attempted,
        armed_count=n_armed,
        delivered_count=n_delivered,
    )
    return new, StepOutcome(reinforced, armed_now)
