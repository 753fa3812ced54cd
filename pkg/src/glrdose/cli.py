"""Command-line interface.

Subcommands:
  glr             evidence for one (n, x) outcome
  glr-table       evidence for a whole outcome grid
  decision-table  pre-tabulated transitions for a design
  effective-k     evidence cut-points of the classical interval designs
  simulate        Monte Carlo operating characteristics
  figure          data series for the standard figures (optionally rendered)
  serve           run the trial-conduct HTTP service

Tables print to stdout in text, CSV or JSON; `--out` redirects to a file and
`--out-dir` (simulate, figure) writes CSV files plus rendered PNG figures.
The default simulation seed comes from GLRDOSE_SEED when set.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .engine import DesignKind, DesignSpec
from .reports import (
    OutputTable,
    decision_table,
    effective_k_table,
    glr_report,
    glr_table,
    log_glr_curve_data,
    scenario_sample_data,
    study_grid_table,
)

SEED_ENV_VAR = "GLRDOSE_SEED"

_DESIGN_CHOICES = [k.value for k in DesignKind]


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV_VAR)
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise SystemExit(f"{SEED_ENV_VAR} must be an integer, got {raw!r}")


def _emit(table: OutputTable, args: argparse.Namespace) -> None:
    text = table.render(args.format)
    if getattr(args, "out", None):
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _add_output_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--format", choices=("text", "csv", "json"), default="text",
        help="output format (default: text)",
    )
    parser.add_argument("--out", help="write the table to a file instead of stdout")


def _precision(args: argparse.Namespace, default: int) -> int:
    value = getattr(args, "precision", None)
    return default if value is None else value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="glrdose",
        description="Likelihood-evidence toolkit for dose-finding interval designs",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("glr", help="evidence for one (n, x) outcome")
    p.add_argument("--n", type=int, required=True, help="patients treated at the dose")
    p.add_argument("--x", type=int, required=True, help="DLT events observed")
    p.add_argument("--phi", type=float, required=True, help="target DLT rate")
    p.add_argument("--k1", type=float, help="evidence required to escalate")
    p.add_argument("--k2", type=float, help="evidence required to de-escalate")
    p.add_argument("--precision", type=int, help="display decimals (default 2)")
    _add_output_flags(p)

    p = sub.add_parser("glr-table", help="evidence for a whole outcome grid")
    p.add_argument("--phi", type=float, required=True)
    p.add_argument("--n-min", type=int, default=3)
    p.add_argument("--n-max", type=int, default=6)
    p.add_argument("--precision", type=int)
    _add_output_flags(p)

    p = sub.add_parser("decision-table", help="pre-tabulated transitions")
    p.add_argument("--phi", type=float, required=True)
    p.add_argument("--k1", type=float, required=True)
    p.add_argument("--k2", type=float, required=True)
    p.add_argument("--n-max", type=int, default=12)
    _add_output_flags(p)

    p = sub.add_parser("effective-k", help="evidence cut-points of interval designs")
    p.add_argument(
        "--design",
        choices=("boin", "teqr", "mtpi", "i3plus3", "3plus3", "all"),
        default="all",
    )
    p.add_argument("--phi", type=float, required=True)
    p.add_argument("--n", type=int, nargs="+", default=[3, 4, 5, 6])
    p.add_argument("--precision", type=int)
    _add_output_flags(p)

    p = sub.add_parser("simulate", help="Monte Carlo operating characteristics")
    p.add_argument("--config", help="JSON study-grid file (see README)")
    p.add_argument("--design", choices=_DESIGN_CHOICES, help="single design to run")
    p.add_argument("--k1", type=float)
    p.add_argument("--k2", type=float)
    p.add_argument("--phi", type=float, nargs="+")
    p.add_argument("--doses", type=int, nargs="+", help="number of dose levels")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int)
    p.add_argument("--cohort-size", type=int, default=3)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--precision", type=int)
    p.add_argument("--out-dir", help="write metrics.csv and a summary figure here")
    _add_output_flags(p)

    p = sub.add_parser("figure", help="figure data series (CSV), optionally rendered")
    p.add_argument("which", choices=("log-glr-curves", "scenario-sample"))
    p.add_argument("--phi", type=float, default=0.25)
    p.add_argument("--n", type=int, nargs="+", default=[3, 6], help="curve sample sizes")
    p.add_argument("--points", type=int, default=201)
    p.add_argument("--doses", type=int, default=6)
    p.add_argument("--sets", type=int, default=10)
    p.add_argument("--seed", type=int)
    p.add_argument("--out-dir", help="write the CSV and a rendered PNG here")
    _add_output_flags(p)

    p = sub.add_parser("serve", help="run the trial-conduct HTTP service")
    p.add_argument("--store-dir", required=True, help="event-log directory")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8008)

    return parser


def _designs_from_args(args: argparse.Namespace) -> list[DesignSpec]:
    kind = DesignKind(args.design)
    if kind in (DesignKind.GLR_SD, DesignKind.GLR_ISO):
        if args.k1 is None or args.k2 is None:
            raise ValueError(f"{kind.value} requires --k1 and --k2")
        return [DesignSpec(kind, k1=args.k1, k2=args.k2)]
    return [DesignSpec(kind)]


def _designs_from_config(raw: dict) -> list[DesignSpec]:
    designs = raw.get("designs")
    if not designs:
        raise ValueError("config must list at least one design")
    return [DesignSpec.from_dict(d) for d in designs]


def _cmd_simulate(args: argparse.Namespace) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    if args.config:
        raw = json.loads(Path(args.config).read_text())
        designs = _designs_from_config(raw)
        doses = raw.get("doses", [6])
        phis = raw.get("phi", [0.25])
        trials = raw.get("trials", args.trials)
        seed = raw.get("seed", seed)
        cohort = raw.get("cohort_size", args.cohort_size)
    else:
        if args.design is None:
            raise ValueError("pass --design or --config")
        designs = _designs_from_args(args)
        doses = args.doses or [6]
        phis = args.phi or [0.25]
        trials = args.trials
        cohort = args.cohort_size
    if trials < 1:
        raise ValueError(f"need at least one trial, got {trials}")
    table = study_grid_table(
        designs,
        doses,
        phis,
        trials,
        seed=seed,
        cohort_size=cohort,
        n_jobs=args.jobs,
        decimals=_precision(args, 1),
    )
    if args.out_dir:
        out_dir = Path(args.out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / "metrics.csv").write_text(table.to_csv())
        from .plots import save_study_metrics

        save_study_metrics(table, str(out_dir / "metrics.png"))
        print(f"wrote {out_dir / 'metrics.csv'} and {out_dir / 'metrics.png'}")
    else:
        _emit(table, args)
    return 0


def _cmd_figure(args: argparse.Namespace) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    if args.which == "log-glr-curves":
        table = log_glr_curve_data(phi=args.phi, ns=tuple(args.n), points=args.points)
        stem = "log_glr_curves"
    else:
        table = scenario_sample_data(
            num_doses=args.doses, phi=args.phi, n_sets=args.sets, seed=seed
        )
        stem = "scenario_sample"
    if args.out_dir:
        out_dir = Path(args.out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        csv_path = out_dir / f"{stem}.csv"
        png_path = out_dir / f"{stem}.png"
        csv_path.write_text(table.to_csv())
        from . import plots

        if args.which == "log-glr-curves":
            plots.save_log_glr_curves(table, str(png_path), phi=args.phi)
        else:
            plots.save_scenario_sample(table, str(png_path), phi=args.phi)
        print(f"wrote {csv_path} and {png_path}")
    else:
        _emit(table, args)
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(args.store_dir)
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "glr":
            _emit(
                glr_report(
                    args.n, args.x, args.phi, args.k1, args.k2,
                    decimals=_precision(args, 2),
                ),
                args,
            )
            return 0
        if args.command == "glr-table":
            _emit(
                glr_table(args.phi, args.n_min, args.n_max, decimals=_precision(args, 2)),
                args,
            )
            return 0
        if args.command == "decision-table":
            _emit(decision_table(None, args.phi, args.n_max, k1=args.k1, k2=args.k2), args)
            return 0
        if args.command == "effective-k":
            _emit(
                effective_k_table(
                    args.design, args.phi, tuple(args.n), decimals=_precision(args, 2)
                ),
                args,
            )
            return 0
        if args.command == "simulate":
            return _cmd_simulate(args)
        if args.command == "figure":
            return _cmd_figure(args)
        if args.command == "serve":
            return _cmd_serve(args)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    raise AssertionError(f"unhandled command {args.command}")


if __name__ == "__main__":
    sys.exit(main())
