"""Search for cycle length / arming probability pairs realizing a schedule size."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from .errors import ConfigurationError, InfeasibleError

__all__ = ["SolverResult", "solve_cycle_params", "check_cycle_params", "MEAN_TOL", "SD_TOL"]

MEAN_TOL = 0.01
SD_TOL = 0.01
_TIE = 1e-12


@dataclass(frozen=True)
class SolverResult:
    x: float
    T: float
    p: float
    mean: float
    sd: float
    mean_err: float
    sd_ratio: float

    @property
    def feasible(self) -> bool:
        return self.mean_err <= MEAN_TOL and 1 - SD_TOL <= self.sd_ratio <= 1

    def as_dict(self) -> dict:
        return asdict(self)


def check_cycle_params(x: float, T: float, p: float) -> SolverResult:
    """Moments of the geometric inter-arming time for (T, p) against target ``x``."""
    mean = T / p
    sd = mean * math.sqrt(1 - p)
    return SolverResult(x, T, p, mean, sd, abs(x - mean) / x, sd / x)


def solve_cycle_params(
    x: float,
    dt: float = 0.005,
    t_max: float = 1.0,
    p_resolution: Optional[float] = None,
) -> SolverResult:
    """Exhaustive grid search over ``T in {dt, 2dt, ..., t_max}``.

    For each T, ``p = T/x`` rounded to ``p_resolution`` (or kept at float
    precision when ``None``). Among candidates meeting both the 1% mean
    tolerance and ``0.99 <= sd/x <= 1``, the one with the smallest mean error
    wins; ties go to the larger T.
    """
    if not x > 0:
        raise ConfigurationError(f"schedule size must be > 0, got {x}")
    if not 0 < dt <= t_max:
        raise ConfigurationError(f"need 0 < dt <= t_max, got dt={dt}, t_max={t_max}")
    if p_resolution is not None and not p_resolution > 0:
        raise ConfigurationError("p_resolution must be > 0")

    k = np.arange(1, int(math.floor(t_max / dt + 1e-9)) + 1)
    T = np.round(k * dt, 12)
    p = T / x
    if p_resolution is not None:
        p = np.round(p / p_resolution) * p_resolution
    valid = (p > 0) & (p <= 1)
    if not valid.any():
        raise InfeasibleError(
            f"no valid probability for size {x}: even T={dt} needs p={dt / x:.4g} > 1"
        )
    T, p = T[valid], p[valid]
    mean = T / p
    sd_ratio = mean * np.sqrt(1 - p) / x
    mean_err = np.abs(x - mean) / x
    ok = (mean_err <= MEAN_TOL) & (sd_ratio >= 1 - SD_TOL) & (sd_ratio <= 1)

    if not ok.any():
        v_mean = np.maximum(0, mean_err - MEAN_TOL)
        v_sd = np.maximum(0, (1 - SD_TOL) - sd_ratio) + np.maximum(0, sd_ratio - 1)
        i = int(np.argmin(v_mean + v_sd))
        which = "mean tolerance" if v_mean[i] >= v_sd[i] else "standard deviation tolerance"
        raise InfeasibleError(
            f"no (T, p) for size {x} with dt={dt}, t_max={t_max}; closest candidate "
            f"T={T[i]:.6g}, p={p[i]:.6g} violates the {which} "
            f"(mean_err={mean_err[i]:.4g}, sd_ratio={sd_ratio[i]:.4g})"
        )

    idx = np.flatnonzero(ok)
    best = mean_err[idx].min()
    tied = idx[mean_err[idx] <= best + _TIE]
    i = int(tied[np.argmax(T[tied])])
    return check_cycle_params(float(x), float(T[i]), float(p[i]))
