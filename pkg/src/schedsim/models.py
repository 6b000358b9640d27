"""Closed-form reinforcement feedback functions.

All rates are per minute; schedule sizes ``V`` are in seconds, so ``60/V`` is
the reinforcers-per-minute ceiling. Each family returns its analytic limit at
``B = 0`` (zero for every family here).
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError

__all__ = [
    "Family",
    "RFFModel",
    "RdrlPredictions",
    "evaluate",
    "rdrl_predictions",
    "rachlin_m_of_V",
    "FREE_PARAMS",
    "DEFAULT_BMAX",
]

E = math.e
DEFAULT_BMAX = 200.0


class Family(str, enum.Enum):
    BAUM = "baum"
    KILLEEN = "killeen"
    PRELEC = "prelec"
    RACHLIN = "rachlin"
    RDRL_2EXP = "rdrl"
    RDRL_REDUCED = "rdrl_reduced"


RI_FAMILIES = (Family.BAUM, Family.KILLEEN, Family.PRELEC, Family.RACHLIN)

# Parameters estimated by fitting; everything else in ``RFFModel.params`` is fixed.
FREE_PARAMS = {
    Family.BAUM: ("V",),
    Family.KILLEEN: ("V", "c"),
    Family.PRELEC: ("V",),
    Family.RACHLIN: ("V", "m"),
    Family.RDRL_2EXP: ("b", "c"),
    Family.RDRL_REDUCED: (),
}

_REQUIRED = {
    Family.BAUM: ("V",),
    Family.KILLEEN: ("V", "c"),
    Family.PRELEC: ("V",),
    Family.RACHLIN: ("V", "m", "Bmax"),
    Family.RDRL_2EXP: ("V", "b", "c"),
    Family.RDRL_REDUCED: ("V",),
}


@dataclass(frozen=True)
class RFFModel:
    family: Family
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        fam = Family(self.family)
        object.__setattr__(self, "family", fam)
        params = dict(self.params)
        if fam is Family.RACHLIN:
            params.setdefault("Bmax", DEFAULT_BMAX)
        missing = [k for k in _REQUIRED[fam] if k not in params]
        if missing:
            raise ConfigurationError(f"{fam.value} model needs parameters {missing}")
        for k, v in params.items():
            if not v > 0:
                raise ConfigurationError(f"parameter {k} must be > 0, got {v}")
        if fam is Family.RACHLIN and not params["m"] < 1:
            raise ConfigurationError(f"Rachlin exponent m must be in (0, 1), got {params['m']}")
        object.__setattr__(self, "params", params)

    @property
    def a(self) -> float:
        return 60.0 / self.params["V"]

    def __call__(self, B):
        return evaluate(self, B)


def _baum(B, V):
    with np.errstate(divide="ignore"):
        return np.where(B > 0, 1.0 / (V / 60.0 + 1.0 / np.where(B > 0, B, 1.0)), 0.0)


def _killeen(B, V, c):
    return (60.0 / V) * -np.expm1(-B / c)


def _prelec(B, V):
    safe = np.where(B > 0, B, 1.0)
    return np.where(B > 0, B * -np.expm1(-60.0 / (V * safe)), 0.0)


def _rachlin(B, V, m, Bmax):
    return (60.0 / V) * (B / Bmax) ** m


def _two_exp(B, V, b, c):
    return (60.0 / V) * (np.exp(-B / b) - np.exp(-B / c))


def evaluate(model: RFFModel, B):
    """Reinforcers/min predicted by ``model`` at response rate(s) ``B``."""
    Barr = np.asarray(B, dtype=float)
    if (Barr < 0).any():
        raise ConfigurationError("response rate must be >= 0")
    p = model.params
    fam = model.family
    if fam is Family.BAUM:
        R = _baum(Barr, p["V"])
    elif fam is Family.KILLEEN:
        R = _killeen(Barr, p["V"], p["c"])
    elif fam is Family.PRELEC:
        R = _prelec(Barr, p["V"])
    elif fam is Family.RACHLIN:
        if (Barr > p["Bmax"]).any():
            warnings.warn(
                f"Rachlin model evaluated beyond Bmax={p['Bmax']}", RuntimeWarning, stacklevel=2
            )
        R = _rachlin(Barr, p["V"], p["m"], p["Bmax"])
    elif fam is Family.RDRL_2EXP:
        R = _two_exp(Barr, p["V"], p["b"], p["c"])
    else:
        V = p["V"]
        R = _two_exp(Barr, V, E**6 / V, E**5 / V)
    return float(R) if np.ndim(R) == 0 else R


@dataclass(frozen=True)
class RdrlPredictions:
    V: float
    b: float
    c: float
    Bm: float
    Rm: float
    Bi: float
    Ri: float

    def as_dict(self) -> dict:
        return dict(V=self.V, b=self.b, c=self.c, Bm=self.Bm, Rm=self.Rm, Bi=self.Bi, Ri=self.Ri)


def rdrl_predictions(V: float) -> RdrlPredictions:
    """Parameter-free RDRL curve: decay/rise scales, maximum and inflection point."""
    if not V > 0:
        raise ConfigurationError(f"schedule size must be > 0, got {V}")
    a = 60.0 / V
    b = E**6 / V
    c = E**5 / V
    Bm = E**6 / ((E - 1) * V)
    Rm = a * (E - 1) * math.exp(-E / (E - 1))
    Bi = 2 * Bm
    Ri = a * (math.exp(-2 / (E - 1)) - math.exp(-2 * E / (E - 1)))
    return RdrlPredictions(V, b, c, Bm, Rm, Bi, Ri)


def rachlin_m_of_V(V: float) -> float:
    """Empirical Rachlin exponent as a function of RI size (seconds)."""
    if not V > 0:
        raise ConfigurationError(f"schedule size must be > 0, got {V}")
    return math.exp(-0.5 - (1 - 1 / E) * math.log(V))
