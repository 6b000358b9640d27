"""Levenberg-Marquardt fits of feedback functions and information-criterion ranking."""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import ConfigurationError, DegenerateFitError
from .models import (
    DEFAULT_BMAX,
    E,
    FREE_PARAMS,
    Family,
    RFFModel,
    _baum,
    _killeen,
    _prelec,
    _rachlin,
    _two_exp,
)

__all__ = [
    "FitOptions",
    "FitResult",
    "Ranked",
    "fit",
    "compare",
    "format_ranking",
    "aic",
    "bic",
    "r_squared",
    "GOOD_R2",
    "EXCELLENT_R2",
]

GOOD_R2 = 0.9
EXCELLENT_R2 = 0.95


def aic(rss: float, n: int, k: int) -> float:
    with np.errstate(divide="ignore"):
        return float(n * np.log(rss / n) + 2 * k)


def bic(rss: float, n: int, k: int) -> float:
    with np.errstate(divide="ignore"):
        return float(n * np.log(rss / n) + k * np.log(n))


def r_squared(rss: float, tss: float) -> float:
    if tss <= 0:
        raise DegenerateFitError("total sum of squares is zero; R^2 is undefined")
    return 1.0 - rss / tss


@dataclass
class FitOptions:
    """``initial`` overrides starting values by parameter name."""

    initial: dict = field(default_factory=dict)
    max_iter: int = 200
    rtol: float = 1e-10
    drop_zero: bool = False

    def __post_init__(self):
        if not self.rtol > 0:
            raise ConfigurationError("rtol must be > 0")
        if self.max_iter < 1:
            raise ConfigurationError("max_iter must be >= 1")


@dataclass
class FitResult:
    family: Family
    params: dict
    n: int
    k: int
    rss: float
    tss: float
    r2: float
    aic: float
    bic: float
    converged: bool
    iterations: int
    rss_history: list
    data_key: str

    def model(self) -> RFFModel:
        return RFFModel(self.family, self.params)

    @property
    def good(self) -> bool:
        return self.r2 >= GOOD_R2

    @property
    def excellent(self) -> bool:
        return self.r2 >= EXCELLENT_R2

    def as_dict(self) -> dict:
        return {
            "family": self.family.value,
            "params": dict(self.params),
            "free": list(FREE_PARAMS[self.family]),
            "n": self.n,
            "k": self.k,
            "rss": self.rss,
            "r2": self.r2,
            "aic": self.aic,
            "bic": self.bic,
            "converged": self.converged,
            "iterations": self.iterations,
            "data_key": self.data_key,
        }


def _data_key(B: np.ndarray, R: np.ndarray) -> str:
    h = hashlib.sha256()
    h.update(np.ascontiguousarray(B, dtype="<f8").tobytes())
    h.update(np.ascontiguousarray(R, dtype="<f8").tobytes())
    return h.hexdigest()[:16]


# parameters living in (0, 1) get a logit transform, the rest a log transform
def _to_z(name, v):
    return math.log(v / (1 - v)) if name == "m" else math.log(v)


def _from_z(name, z):
    return 1 / (1 + math.exp(-z)) if name == "m" else math.exp(z)


def _initial(family: Family, B, R, size, bmax) -> dict:
    if size is None:
        if family in (Family.RDRL_2EXP, Family.RDRL_REDUCED):
            raise ConfigurationError(f"{family.value} fits need the schedule size (fixed a = 60/V)")
        # plateau of an interval schedule sits near 60/V
        size = 60.0 / max(float(np.max(R)), 1e-12)
    V = float(size)
    init = {"V": V}
    if family is Family.KILLEEN:
        init["c"] = 100.0 / V
    elif family is Family.RACHLIN:
        init["m"] = 0.2
        if bmax is None:
            bmax = float(np.max(B)) if np.max(B) > 0 else DEFAULT_BMAX
        init["Bmax"] = float(bmax)
    elif family is Family.RDRL_2EXP:
        init["b"] = E**6 / V
        init["c"] = E**5 / V
    return init


def fit(
    family,
    B: Sequence[float],
    R: Sequence[float],
    size: Optional[float] = None,
    options: Optional[FitOptions] = None,
    bmax: Optional[float] = None,
) -> FitResult:
    """Least-squares fit of one feedback-function family to (B, R) points.

    ``size`` is the nominal schedule size in seconds. It seeds ``V`` for the
    interval families and fixes ``a = 60/V`` for the RDRL families. ``bmax``
    fixes Rachlin's normalizing rate (default: the largest B in the data).
    Non-convergence is reported through ``converged``, not raised.
    """
    family = Family(family)
    opts = options or FitOptions()
    B = np.asarray(B, dtype=float)
    R = np.asarray(R, dtype=float)
    if B.shape != R.shape or B.ndim != 1:
        raise ConfigurationError("B and R must be 1-D arrays of equal length")
    if opts.drop_zero:
        keep = B > 0
        B, R = B[keep], R[keep]
    if np.unique(B).size != B.size:
        raise ConfigurationError("B values must be distinct")
    free = FREE_PARAMS[family]
    k = len(free)
    n = B.size
    if n < k + 1:
        raise ConfigurationError(f"{family.value} needs at least {k + 1} points, got {n}")
    tss = float(np.sum((R - R.mean()) ** 2))
    if tss <= 0:
        raise DegenerateFitError("all observed R are identical; R^2 is undefined")

    params = _initial(family, B, R, size, bmax)
    params.update(opts.initial)

    def residuals(z):
        p = dict(params)
        for name, zi in zip(free, z):
            p[name] = _from_z(name, zi)
        return _raw(family, B, p) - R, p

    z = np.array([_to_z(name, params[name]) for name in free], dtype=float)
    r, params_now = residuals(z)
    rss = float(r @ r)
    history = [rss]
    converged = k == 0
    iterations = 0
    lam = 1e-3

    while not converged and iterations < opts.max_iter:
        J = _jacobian(residuals, z, r)
        A = J.T @ J
        g = J.T @ r
        d = np.maximum(np.diag(A), 1e-300)
        accepted = False
        while lam <= 1e12:
            try:
                step = np.linalg.solve(A + lam * np.diag(d), -g)
            except np.linalg.LinAlgError:
                lam *= 10
                continue
            z_new = z + step
            with np.errstate(over="ignore", invalid="ignore"):
                r_new, p_new = residuals(z_new)
            rss_new = float(r_new @ r_new)
            if np.isfinite(rss_new) and rss_new < rss:
                accepted = True
                break
            lam *= 10
        if not accepted:
            # no downhill step at any damping: stationary to working precision
            converged = True
            break
        iterations += 1
        gain = rss - rss_new
        z, r, rss, params_now = z_new, r_new, rss_new, p_new
        history.append(rss)
        lam = max(lam / 10, 1e-12)
        if gain <= opts.rtol * history[-2] or rss <= 1e-28 * tss:
            converged = True

    return FitResult(
        family=family,
        params={k_: float(v) for k_, v in params_now.items()},
        n=n,
        k=k,
        rss=rss,
        tss=tss,
        r2=r_squared(rss, tss),
        aic=aic(rss, n, k),
        bic=bic(rss, n, k),
        converged=converged,
        iterations=iterations,
        rss_history=history,
        data_key=_data_key(B, R),
    )


def _raw(family: Family, B, p):
    if family is Family.BAUM:
        return _baum(B, p["V"])
    if family is Family.KILLEEN:
        return _killeen(B, p["V"], p["c"])
    if family is Family.PRELEC:
        return _prelec(B, p["V"])
    if family is Family.RACHLIN:
        return _rachlin(B, p["V"], p["m"], p["Bmax"])
    if family is Family.RDRL_2EXP:
        return _two_exp(B, p["V"], p["b"], p["c"])
    V = p["V"]
    return _two_exp(B, V, E**6 / V, E**5 / V)


def _jacobian(residuals, z, r0):
    J = np.empty((r0.size, z.size))
    for j in range(z.size):
        h = 1e-7 * max(1.0, abs(z[j]))
        zp = z.copy()
        zp[j] += h
        with np.errstate(over="ignore", invalid="ignore"):
            J[:, j] = (residuals(zp)[0] - r0) / h
    return J


@dataclass(frozen=True)
class Ranked:
    fit: FitResult
    bic_rank: int
    aic_rank: int

    @property
    def good(self) -> bool:
        return self.fit.good

    @property
    def excellent(self) -> bool:
        return self.fit.excellent


def compare(fits: Sequence[FitResult]) -> list[Ranked]:
    """Rank fits by BIC (ascending), with AIC ranks alongside."""
    fits = list(fits)
    if not fits:
        return []
    keys = {f.data_key for f in fits}
    if len(keys) != 1:
        raise ConfigurationError("fits were made on different data; comparison is meaningless")
    by_aic = sorted(range(len(fits)), key=lambda i: fits[i].aic)
    aic_rank = {i: rank + 1 for rank, i in enumerate(by_aic)}
    by_bic = sorted(range(len(fits)), key=lambda i: fits[i].bic)
    return [Ranked(fits[i], rank + 1, aic_rank[i]) for rank, i in enumerate(by_bic)]


def format_ranking(ranking: Sequence[Ranked]) -> str:
    lines = [f"{'rank':>4}  {'RFF':<13}{'R2':>9}{'BIC':>11}{'AIC':>11}  params"]
    for r in ranking:
        f = r.fit
        flag = "excellent" if r.excellent else ("good" if r.good else "below-good")
        params = ", ".join(f"{k}={f.params[k]:.5g}" for k in FREE_PARAMS[f.family])
        lines.append(
            f"{r.bic_rank:>4}  {f.family.value:<13}{f.r2:>9.5f}{f.bic:>11.1f}{f.aic:>11.1f}"
            f"  {params}  [{flag}]"
        )
    return "\n".join(lines)
