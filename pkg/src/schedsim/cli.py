"""Command-line entry point.

Exit codes: 0 ok, 1 configuration/usage error, 2 infeasible solver request,
3 runtime failure (I/O and anything unexpected).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .config import load_config, parse_grid
from .errors import ConfigurationError, DegenerateFitError, InfeasibleError
from .fitting import FitOptions, compare, fit, format_ranking
from .io import (
    emit_plot_data,
    read_fits_json,
    read_sweep_csv,
    write_fits_json,
    write_samples_csv,
    write_rows,
    write_sweep_csv,
)
from .models import RI_FAMILIES, Family, RFFModel, evaluate, rachlin_m_of_V, rdrl_predictions
from .responder import ResponderSpec
from .session import SessionConfig, run_sweep
from .solver import solve_cycle_params

EXIT_OK, EXIT_CONFIG, EXIT_SOLVER, EXIT_RUNTIME = 0, 1, 2, 3

FAMILY_SETS = {
    "all": RI_FAMILIES,
    "baum": (Family.BAUM,),
    "killeen": (Family.KILLEEN,),
    "prelec": (Family.PRELEC,),
    "rachlin": (Family.RACHLIN,),
    "rdrl": (Family.RDRL_2EXP, Family.RDRL_REDUCED),
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigurationError(f"{self.prog}: {message}")


def _emit(record: dict, fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(record))
    else:
        print(",".join(record))
        print(",".join(format(float(v), ".10g") for v in record.values()))


def cmd_solve_tp(args) -> int:
    res = solve_cycle_params(args.size, dt=args.dt, t_max=args.tmax, p_resolution=args.p_resolution)
    _emit(res.as_dict(), args.format)
    return EXIT_OK


def _prepare_out(cfg, override):
    out = Path(override) if override else cfg.out_dir
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_simulate(args) -> int:
    cfg = load_config(args.config, force=args.force)
    out = _prepare_out(cfg, args.out)
    points = run_sweep(cfg.session, cfg.schedule, cfg.responder)
    write_sweep_csv(points, out / "sweep.csv", cfg.meta)
    if cfg.write_samples:
        write_samples_csv(points, out / "samples.csv", cfg.meta)
    print(f"wrote {out / 'sweep.csv'} ({len(points)} rates x {cfg.session.repetitions} reps)")
    return EXIT_OK


def _size_from(args, meta) -> float | None:
    if args.size is not None:
        return args.size
    if "size_s" in meta:
        return float(meta["size_s"])
    return None


def cmd_fit(args) -> int:
    cols, meta = read_sweep_csv(args.data)
    size = _size_from(args, meta)
    opts = FitOptions(drop_zero=args.drop_zero)
    fits = [fit(f, cols["B_nominal"], cols["R_mean"], size=size, options=opts, bmax=args.bmax)
            for f in FAMILY_SETS[args.family]]
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    fmeta = {k: meta[k] for k in ("config_sha256", "seed") if k in meta}
    fmeta["source"] = Path(args.data).name
    write_fits_json(fits, out, fmeta)
    table = format_ranking(compare(fits))
    header = "# schedsim " + " ".join(f"{k}={v}" for k, v in fmeta.items())
    out.with_suffix(".txt").write_text(header + "\n" + table + "\n")
    print(table)
    return EXIT_OK


def _params(items) -> dict:
    params = {}
    for item in items or []:
        if "=" not in item:
            raise ConfigurationError(f"--param expects name=value, got {item!r}")
        k, v = item.split("=", 1)
        try:
            params[k] = float(v)
        except ValueError:
            raise ConfigurationError(f"--param {k}: not a number: {v!r}") from None
    return params


def cmd_predict(args) -> int:
    if args.target == "rdrl-points":
        print(json.dumps(rdrl_predictions(args.size).as_dict()))
        return EXIT_OK
    if args.model is None:
        raise ConfigurationError("predict needs --model (or the rdrl-points target)")
    family = Family(args.model)
    params = {"V": args.size}
    if family is Family.KILLEEN:
        params["c"] = 100.0 / args.size
    elif family is Family.RACHLIN:
        params["m"] = rachlin_m_of_V(args.size)
    elif family is Family.RDRL_2EXP:
        pred = rdrl_predictions(args.size)
        params.update(b=pred.b, c=pred.c)
    params.update(_params(args.param))
    model = RFFModel(family, params)
    if args.at is not None:
        grid = np.array([args.at])
    else:
        grid = parse_grid(args.grid)
    print("B,R")
    for B, R in zip(grid, np.atleast_1d(evaluate(model, grid))):
        print(f"{format(float(B), '.10g')},{format(float(R), '.10g')}")
    return EXIT_OK


def cmd_break_run(args) -> int:
    cfg = load_config(args.config, force=args.force)
    if cfg.responder.burst is None:
        raise ConfigurationError("break-run needs a [responder.burst] section")
    out = _prepare_out(cfg, args.out)
    frac = cfg.responder.burst.running_fraction
    bursty = run_sweep(cfg.session, cfg.schedule, cfg.responder)
    s = cfg.session
    plain_cfg = SessionConfig(s.duration, s.dt, s.repetitions, s.rates * frac, s.seed)
    plain = {round(p.B_nominal, 9): p for p in
             run_sweep(plain_cfg, cfg.schedule, ResponderSpec(0.0, s.dt))}
    rows = []
    inside = 0
    for p in bursty:
        q = plain[round(p.B_nominal * frac, 9)]
        ok = q.hdi_lo <= p.R_mean <= q.hdi_hi
        inside += ok
        rows.append((p.B_nominal, q.B_nominal, p.B_realized_mean, p.R_mean, q.R_mean,
                     q.hdi_lo, q.hdi_hi, int(ok)))
    meta = dict(cfg.meta, running_fraction=format(frac, ".10g"))
    cols = ("lor", "B_effective", "B_realized", "R_mean_burst", "R_mean_plain",
            "plain_hdi_lo", "plain_hdi_hi", "inside")
    write_rows(out / "break_run.csv", meta, cols, rows)
    print(f"wrote {out / 'break_run.csv'}: {inside}/{len(rows)} burst means inside plain HDI")
    return EXIT_OK


def cmd_report(args) -> int:
    cols, meta = read_sweep_csv(args.data)
    fits = read_fits_json(args.fits) if args.fits else []
    emit_plot_data(cols, fits, args.out, meta={k: meta[k] for k in ("config_sha256", "seed") if k in meta})
    print(f"wrote {args.out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="schedsim", description="Random reinforcement schedule simulator")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve-tp", help="find cycle length T and probability p for a size")
    p.add_argument("--size", type=float, required=True, help="schedule size, seconds")
    p.add_argument("--dt", type=float, default=0.005)
    p.add_argument("--tmax", type=float, default=1.0)
    p.add_argument("--p-resolution", type=float, default=None)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_solve_tp)

    p = sub.add_parser("simulate", help="run a rate sweep from a config file")
    p.add_argument("--config", required=True)
    p.add_argument("--out", help="output directory (overrides [output] dir)")
    p.add_argument("--force", action="store_true", help="accept explicit T/p outside tolerance")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("fit", help="fit feedback functions to a sweep")
    p.add_argument("--data", required=True)
    p.add_argument("--family", choices=sorted(FAMILY_SETS), default="all")
    p.add_argument("--size", type=float, help="nominal size, seconds (default: from sweep header)")
    p.add_argument("--bmax", type=float, help="Rachlin normalizing rate")
    p.add_argument("--drop-zero", action="store_true", help="exclude B = 0 rows")
    p.add_argument("--out", default="fits.json")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("predict", help="evaluate a feedback function")
    p.add_argument("target", nargs="?", choices=("curve", "rdrl-points"), default="curve")
    p.add_argument("--model", choices=[f.value for f in Family])
    p.add_argument("--size", type=float, required=True)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--at", type=float)
    g.add_argument("--grid", default="0:200:5")
    p.add_argument("--param", action="append", help="override a parameter, name=value")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("break-run", help="compare bursty responding with its effective-rate twin")
    p.add_argument("--config", required=True)
    p.add_argument("--out")
    p.add_argument("--force", action="store_true")
    p.set_defaults(func=cmd_break_run)

    p = sub.add_parser("report", help="write tidy plot data for a sweep and its fits")
    p.add_argument("--data", required=True)
    p.add_argument("--fits")
    p.add_argument("--out", default="plot.csv")
    p.set_defaults(func=cmd_report)
    return ap


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except InfeasibleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except (ConfigurationError, DegenerateFitError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except Exception as exc:  # noqa: BLE001
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
