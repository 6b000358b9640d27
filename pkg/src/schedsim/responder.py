"""Stochastic responders: a Bernoulli process, optionally gated by break-and-run bursts."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ConfigurationError

__all__ = [
    "BurstSpec",
    "ResponderSpec",
    "ResponderState",
    "Mode",
    "response_probability",
    "step_responder",
]


def response_probability(B: float, t: float) -> float:
    """Per-step response probability for a rate of ``B`` responses/min and step ``t`` s."""
    if not B >= 0:
        raise ConfigurationError(f"response rate must be >= 0, got {B}")
    if not t > 0:
        raise ConfigurationError(f"time step must be > 0, got {t}")
    p = B / (60.0 * (1.0 / t))
    if p > 1:
        raise ConfigurationError(
            f"rate {B}/min is unrepresentable with step {t} s (needs p={p:.4g} > 1)"
        )
    return p


@dataclass(frozen=True)
class BurstSpec:
    """Two-state break-and-run chain.

    ``p_run`` and ``p_break`` are per-step switch probabilities (pausing to
    running and running to pausing). ``lor`` is the local operant rate in
    responses/min while running; ``None`` means "use the responder's B".
    """

    p_run: float
    p_break: float
    lor: Optional[float] = None

    def __post_init__(self):
        if not 0 < self.p_run <= 1:
            raise ConfigurationError(f"p_run must be in (0, 1], got {self.p_run}")
        if not 0 <= self.p_break <= 1:
            raise ConfigurationError(f"p_break must be in [0, 1], got {self.p_break}")

    @property
    def running_fraction(self) -> float:
        return self.p_run / (self.p_run + self.p_break)


class Mode(enum.IntEnum):
    PAUSING = 0
    RUNNING = 1


@dataclass(frozen=True)
class ResponderSpec:
    B: float
    t: float = 0.005
    burst: Optional[BurstSpec] = None

    def __post_init__(self):
        # validates B and t as a side effect
        response_probability(self.B, self.t)
        if self.burst is not None:
            response_probability(self.local_rate, self.t)

    @property
    def local_rate(self) -> float:
        """Rate while running; equals ``B`` without bursts."""
        if self.burst is None or self.burst.lor is None:
            return self.B
        return self.burst.lor

    @property
    def effective_rate(self) -> float:
        """Long-run responses/min."""
        if self.burst is None:
            return self.B
        return self.local_rate * self.burst.running_fraction

    @property
    def p_response(self) -> float:
        return response_probability(self.local_rate, self.t)

    def initial_state(self) -> "ResponderState":
        return ResponderState(Mode.PAUSING if self.burst is not None else Mode.RUNNING)

    def with_rate(self, B: float) -> "ResponderSpec":
        """Copy at nominal rate ``B``; with bursts, ``B`` becomes the local rate."""
        burst = self.burst
        if burst is not None:
            burst = BurstSpec(burst.p_run, burst.p_break, float(B))
        return ResponderSpec(float(B), self.t, burst)


@dataclass(frozen=True)
class ResponderState:
    mode: Mode = Mode.RUNNING


def step_responder(
    state: ResponderState, spec: ResponderSpec, rng: np.random.Generator
) -> tuple[ResponderState, bool]:
    """One step: switch mode (bursty responders only), then maybe respond.

    Draw order: one uniform for the mode switch when bursts are on, then one
    uniform for the response if the responder is running.
    """
    p = spec.p_response
    burst = spec.burst
    if burst is None:
        return state, bool(rng.random() < p)
    u = rng.random()
    if state.mode is Mode.RUNNING:
        mode = Mode.PAUSING if u < burst.p_break else Mode.RUNNING
    else:
        mode = Mode.RUNNING if u < burst.p_run else Mode.PAUSING
    if mode is Mode.RUNNING:
        return ResponderState(mode), bool(rng.random() < p)
    return ResponderState(mode), False
