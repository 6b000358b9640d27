"""CSV/JSON emission and loading.

Every file starts with (or, for JSON, carries) a metadata record holding the
config hash and seed that produced it.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .errors import ConfigurationError
from .fitting import FitResult
from .models import Family, evaluate

__all__ = [
    "SWEEP_COLUMNS",
    "write_sweep_csv",
    "write_samples_csv",
    "read_sweep_csv",
    "write_fits_json",
    "read_fits_json",
    "emit_plot_data",
    "write_rows",
]

SWEEP_COLUMNS = ("B_nominal", "B_realized", "R_mean", "hdi_lo", "hdi_hi", "reps")


def _fmt(v) -> str:
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return format(float(v), ".12g")


def _header(meta: Optional[dict]) -> str:
    meta = meta or {}
    return "# schedsim " + " ".join(f"{k}={v}" for k, v in meta.items()) + "\n"


def write_rows(path, meta, columns, rows) -> Path:
    path = Path(path)
    with open(path, "w", newline="") as fh:
        fh.write(_header(meta))
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        for row in rows:
            w.writerow([v if isinstance(v, str) else _fmt(v) for v in row])
    return path


def write_sweep_csv(points, path, meta: Optional[dict] = None) -> Path:
    rows = ((p.B_nominal, p.B_realized_mean, p.R_mean, p.hdi_lo, p.hdi_hi, p.reps) for p in points)
    return write_rows(path, meta, SWEEP_COLUMNS, rows)


def write_samples_csv(points, path, meta: Optional[dict] = None) -> Path:
    def rows():
        for p in points:
            for r, (b, R) in enumerate(zip(p.response_samples, p.samples)):
                yield p.B_nominal, r, b, R

    return write_rows(path, meta, ("B_nominal", "rep", "B_realized", "R"), rows())


def _parse_meta(line: str) -> dict:
    meta = {}
    for tok in line.lstrip("#").split()[1:]:
        if "=" in tok:
            k, v = tok.split("=", 1)
            meta[k] = v
    return meta


def read_sweep_csv(path) -> tuple[dict, dict]:
    """Return ``(columns, meta)``; columns map each header name to a float array."""
    meta: dict = {}
    lines = []
    with open(path, newline="") as fh:
        for line in fh:
            if line.startswith("#"):
                if line.startswith("# schedsim"):
                    meta.update(_parse_meta(line))
                continue
            if line.strip():
                lines.append(line)
    rows = list(csv.reader(lines))
    if not rows:
        raise ConfigurationError(f"{path}: no data")
    header = rows[0]
    missing = [c for c in ("B_nominal", "R_mean") if c not in header]
    if missing:
        raise ConfigurationError(f"{path}: missing columns {missing}")
    try:
        data = np.array([[float(v) for v in r] for r in rows[1:]], dtype=float)
    except ValueError as exc:
        raise ConfigurationError(f"{path}: non-numeric value ({exc})") from None
    data = data.reshape(-1, len(header))
    return {name: data[:, i] for i, name in enumerate(header)}, meta


def write_fits_json(fits: Sequence[FitResult], path, meta: Optional[dict] = None) -> Path:
    path = Path(path)
    doc = {"meta": dict(meta or {}), "fits": [f.as_dict() for f in fits]}
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    return path


def read_fits_json(path) -> list[dict]:
    doc = json.loads(Path(path).read_text())
    return doc["fits"]


def _curve_rows(family: Family, params: dict, grid: np.ndarray, label: str):
    from .models import RFFModel

    model = RFFModel(family, params)
    for B, R in zip(grid, np.atleast_1d(evaluate(model, grid))):
        yield label, B, R, "", ""
    if family in (Family.RDRL_2EXP, Family.RDRL_REDUCED):
        V = params["V"]
        a = 60.0 / V
        b = params.get("b", np.e**6 / V)
        c = params.get("c", np.e**5 / V)
        for B in grid:
            yield f"{label}:asymptote", B, a, "", ""
        for B in grid:
            yield f"{label}:decay", B, a * np.exp(-B / b), "", ""
        for B in grid:
            yield f"{label}:rise", B, a * -np.expm1(-B / c), "", ""


def emit_plot_data(
    sweep,
    fits: Sequence = (),
    path="plot.csv",
    grid: Optional[np.ndarray] = None,
    meta: Optional[dict] = None,
) -> Path:
    """Tidy CSV with one ``observed`` block plus one block per fitted curve.

    ``sweep`` is either a list of sweep points or the column dict returned by
    :func:`read_sweep_csv`. ``fits`` holds :class:`FitResult` objects or the
    dicts from :func:`read_fits_json`. RDRL fits also get their asymptote,
    decaying and rising exponential components.
    """
    if isinstance(sweep, dict):
        B = sweep["B_nominal"]
        R = sweep["R_mean"]
        lo = sweep.get("hdi_lo", np.full_like(B, np.nan))
        hi = sweep.get("hdi_hi", np.full_like(B, np.nan))
    else:
        B = np.array([p.B_nominal for p in sweep])
        R = np.array([p.R_mean for p in sweep])
        lo = np.array([p.hdi_lo for p in sweep])
        hi = np.array([p.hdi_hi for p in sweep])
    if grid is None:
        top = float(B.max()) if B.size else 200.0
        grid = np.linspace(0.0, top, 401)

    def rows():
        for row in zip(B, R, lo, hi):
            yield ("observed",) + row
        for f in fits:
            if isinstance(f, FitResult):
                fam, params = f.family, f.params
            else:
                fam, params = Family(f["family"]), f["params"]
            yield from _curve_rows(fam, params, grid, fam.value)

    return write_rows(path, meta, ("series", "B", "R", "hdi_lo", "hdi_hi"), rows())
