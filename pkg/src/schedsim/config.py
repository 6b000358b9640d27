"""Declarative experiment files (TOML).

Example::

    [schedule]
    kind = "RI"          # RI | RDRL | RT | RR
    size_s = 5           # or cycle_s + p; RR uses ratio

    [responder]
    rate_grid_per_min = "0:200:5"    # or rates_per_min = [...] / rate_per_min = 20

    [responder.burst]                # optional break-and-run chain
    p_run = 0.01
    p_break = 0.01

    [session]
    seed = 1

    [output]
    dir = "out"
    profile = "desk"     # desk | full
    samples = false
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .errors import ConfigurationError
from .responder import BurstSpec, ResponderSpec
from .schedules import DEFAULT_RDRL_P, ScheduleKind, ScheduleSpec, cycle_steps
from .session import PROFILES, SessionConfig
from .solver import check_cycle_params, solve_cycle_params

__all__ = ["ExperimentConfig", "load_config", "parse_config", "parse_grid"]

_KEYS = {
    "schedule": {"kind", "size_s", "ratio", "cycle_s", "p", "rdrl_p", "rdrl_rearm", "tmax_s", "p_resolution"},
    "responder": {"rate_per_min", "rates_per_min", "rate_grid_per_min", "burst"},
    "burst": {"p_run", "p_break"},
    "session": {"duration_s", "dt_s", "repetitions", "seed"},
    "output": {"dir", "profile", "samples"},
}


def parse_grid(text: str) -> np.ndarray:
    """``"lo:hi:step"`` to an inclusive float grid."""
    try:
        lo, hi, step = (float(v) for v in text.split(":"))
    except ValueError:
        raise ConfigurationError(f"grid must look like lo:hi:step, got {text!r}") from None
    if not step > 0 or hi < lo:
        raise ConfigurationError(f"bad grid {text!r}")
    n = int(np.floor((hi - lo) / step + 1e-9))
    return np.round(lo + step * np.arange(n + 1), 10)


@dataclass
class ExperimentConfig:
    schedule: ScheduleSpec
    responder: ResponderSpec
    session: SessionConfig
    out_dir: Path
    write_samples: bool
    profile: str
    digest: str
    raw: dict

    @property
    def meta(self) -> dict:
        meta = {
            "config_sha256": self.digest,
            "seed": self.session.seed,
            "kind": self.schedule.kind.value,
            "size_s": format(self.schedule.x, ".10g"),
        }
        if self.schedule.T is not None:
            meta["T_s"] = format(self.schedule.T, ".10g")
            meta["p"] = format(self.schedule.p, ".10g")
        return meta


def _check_keys(section: str, table: dict) -> None:
    unknown = set(table) - _KEYS[section]
    if unknown:
        raise ConfigurationError(f"unknown key(s) in [{section}]: {sorted(unknown)}")


def _schedule(sec: dict, dt: float, force: bool) -> ScheduleSpec:
    _check_keys("schedule", sec)
    if "kind" not in sec:
        raise ConfigurationError("[schedule] needs a kind")
    try:
        kind = ScheduleKind(str(sec["kind"]).upper())
    except ValueError:
        raise ConfigurationError(f"unknown schedule kind {sec['kind']!r}") from None
    if kind is ScheduleKind.RR:
        if "ratio" not in sec:
            raise ConfigurationError("RR schedules need ratio")
        return ScheduleSpec.rr(float(sec["ratio"]))
    rearm = bool(sec.get("rdrl_rearm", False))
    if "cycle_s" in sec or "p" in sec:
        if not ("cycle_s" in sec and "p" in sec):
            raise ConfigurationError("explicit cycles need both cycle_s and p")
        T, p = float(sec["cycle_s"]), float(sec["p"])
        spec = ScheduleSpec.from_cycle(kind, T, p, rdrl_rearm=rearm)
        if kind in (ScheduleKind.RI, ScheduleKind.RT) and not force:
            x = float(sec.get("size_s", T / p))
            chk = check_cycle_params(x, T, p)
            if not chk.feasible:
                raise ConfigurationError(
                    f"cycle_s={T}, p={p} miss the 1% tolerances for size {x} "
                    f"(mean_err={chk.mean_err:.4g}, sd_ratio={chk.sd_ratio:.4g}); use --force"
                )
        return spec
    if "size_s" not in sec:
        raise ConfigurationError("[schedule] needs size_s or cycle_s + p")
    size = float(sec["size_s"])
    if kind is ScheduleKind.RDRL:
        return ScheduleSpec.rdrl(size, float(sec.get("rdrl_p", DEFAULT_RDRL_P)), dt, rearm)
    res = solve_cycle_params(
        size, dt=dt, t_max=float(sec.get("tmax_s", 1.0)), p_resolution=sec.get("p_resolution")
    )
    return ScheduleSpec(kind, res.T, res.p, res.mean)


def parse_config(raw: dict, force: bool = False) -> ExperimentConfig:
    """Build an :class:`ExperimentConfig` from an already-parsed mapping."""
    unknown = set(raw) - {"schedule", "responder", "session", "output"}
    if unknown:
        raise ConfigurationError(f"unknown section(s): {sorted(unknown)}")
    out = dict(raw.get("output", {}))
    _check_keys("output", out)
    profile = out.get("profile", "desk")
    if profile not in PROFILES:
        raise ConfigurationError(f"profile must be one of {sorted(PROFILES)}, got {profile!r}")

    sess = dict(raw.get("session", {}))
    _check_keys("session", sess)
    resp = dict(raw.get("responder", {}))
    _check_keys("responder", resp)

    kw = {}
    if "duration_s" in sess:
        kw["duration"] = float(sess["duration_s"])
    if "dt_s" in sess:
        kw["dt"] = float(sess["dt_s"])
    if "repetitions" in sess:
        kw["repetitions"] = int(sess["repetitions"])
    rate_keys = [k for k in ("rate_per_min", "rates_per_min", "rate_grid_per_min") if k in resp]
    if len(rate_keys) > 1:
        raise ConfigurationError(f"give only one of {rate_keys}")
    if rate_keys:
        v = resp[rate_keys[0]]
        if rate_keys[0] == "rate_per_min":
            kw["rates"] = [float(v)]
        elif rate_keys[0] == "rates_per_min":
            kw["rates"] = [float(b) for b in v]
        else:
            kw["rates"] = parse_grid(str(v))
    session = PROFILES[profile](seed=int(sess.get("seed", 0)), **kw)

    burst = None
    if "burst" in resp:
        b = dict(resp["burst"])
        _check_keys("burst", b)
        try:
            burst = BurstSpec(float(b["p_run"]), float(b["p_break"]))
        except KeyError as exc:
            raise ConfigurationError(f"[responder.burst] needs {exc.args[0]}") from None
    responder = ResponderSpec(0.0, session.dt, burst)
    for B in session.rates:
        responder.with_rate(B)  # fail early on unrepresentable rates

    schedule = _schedule(dict(raw.get("schedule", {})), session.dt, force)
    cycle_steps(schedule, session.dt)

    digest = hashlib.sha256(json.dumps(raw, sort_keys=True, default=str).encode()).hexdigest()[:16]
    return ExperimentConfig(
        schedule=schedule,
        responder=responder,
        session=session,
        out_dir=Path(out.get("dir", ".")),
        write_samples=bool(out.get("samples", False)),
        profile=profile,
        digest=digest,
        raw=raw,
    )


def load_config(path, force: bool = False) -> ExperimentConfig:
    try:
        with open(path, "rb") as fh:
            raw = tomllib.load(fh)
    except FileNotFoundError:
        raise ConfigurationError(f"config file not found: {path}") from None
    except tomllib.TOMLDecodeError as exc:
        raise ConfigurationError(f"{path}: {exc}") from None
    cfg = parse_config(raw, force=force)
    if not cfg.out_dir.is_absolute():
        cfg.out_dir = Path(path).parent / cfg.out_dir
    return cfg
