"""Command-line entry point.

All rates are given in units of lambda0 (``--omega 40`` means 40*lambda0).
Exit status: 0 on success, 1 for usage or config errors, 2 for numerical
or I/O failures.
"""
from __future__ import annotations

import argparse
import logging
import math
import sys
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .errors import DomainError, NumericalError, ValidationError
from .model import PhysicalParams, embed_atom_with_vacuum
from .nonmarkov import blp_measure, canonical_pair, equatorial_pair, evolve_pair, maximize_over_pairs
from .oracle import TimeGrid, compare_closed_form
from .protocol import (
    InitialPreparation,
    MeasurementStrengths,
    ProtocolConfig,
    apply_weak_measurement,
    coherence_l1,
    coherence_rel_entropy,
    prepare_initial,
    run_protocol,
)
from .sweep import SeriesTable, SweepError, figure_spec, parse_config, run_sweep, write_csv

log = logging.getLogger("cavitycoh")

EXIT_USAGE = 1
EXIT_FAILURE = 2
VALIDATE_TOL = 1e-6
VALIDATE_SETS = [(1.0, 5.0), (1.0, 3.0), (10.0, 3.0), (1.0, 0.1)]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_common(p, *, t_max, steps):
    p.add_argument("--omega", type=float, default=None, help="atom-cavity coupling")
    p.add_argument("--lambda", dest="lam", type=float, default=None, help="spectral width")
    p.add_argument("--theta", type=float, default=math.pi / 2, help="initial polar angle")
    p.add_argument("--p1", type=float, default=0.0, help="weak-measurement strength")
    p.add_argument("--p2", type=float, default=0.0, help="reversal strength")
    p.add_argument("--t-max", type=float, default=t_max)
    p.add_argument("--steps", type=int, default=steps)
    p.add_argument("--normalize", action="store_true", help="renormalize after measurement")
    p.add_argument("--omega0", type=float, default=100.0, help="atomic frequency (no effect on outputs)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", default=None, help="output CSV path (default: stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cavitycoh", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("simulate", help="single trajectory of the protocol")
    _add_common(p, t_max=10.0, steps=1000)

    p = sub.add_parser("figure", help="reproduce one of the figure sweeps")
    p.add_argument("number", type=int, choices=range(1, 8))
    _add_common(p, t_max=None, steps=None)

    p = sub.add_parser("sweep", help="generic sweep from a config file")
    p.add_argument("--config", required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", default=None)

    p = sub.add_parser("nonmarkov", help="trace-distance non-Markovianity")
    _add_common(p, t_max=50.0, steps=50000)
    p.add_argument("--samples", type=int, default=200, help="state pairs to try")

    p = sub.add_parser("validate", help="closed form vs RK4 master-equation integration")
    _add_common(p, t_max=10.0, steps=100000)
    return parser


def _params(args, omega=1.0, lam=5.0):
    omega = omega if args.omega is None else args.omega
    lam = lam if args.lam is None else args.lam
    return PhysicalParams(lambda0=1.0, lam=lam, omega=omega, omega0=args.omega0)


def _emit(table: SeriesTable, out):
    if out is None:
        write_csv(table, sys.stdout)
    else:
        write_csv(table, out)
        log.info("wrote %d rows to %s", len(table.rows), out)


def cmd_simulate(args):
    cfg = ProtocolConfig(
        params=_params(args),
        prep=InitialPreparation(args.theta),
        strengths=MeasurementStrengths(args.p1, args.p2),
        normalize=args.normalize,
    )
    times = TimeGrid(0.0, args.t_max, args.steps).times
    states = run_protocol(cfg, times)
    columns = ["t", "rho_ee", "rho_gg", "re_rho_eg", "im_rho_eg", "c_l1", "c_rel", "trace"]
    rows = []
    for t, rho in zip(times, states):
        tr = float(np.real(np.trace(rho)))
        c_rel = coherence_rel_entropy(rho) if tr > 0 else 0.0
        rows.append([
            t, rho[0, 0].real, rho[1, 1].real, rho[0, 1].real, rho[0, 1].imag,
            float(coherence_l1(rho)), c_rel, tr,
        ])
    _emit(SeriesTable(columns, rows), args.out)


def cmd_figure(args):
    spec = figure_spec(args.number)
    # explicit flags override the preset's fixed values where they apply
    overrides = {"omega0": args.omega0}
    if args.omega is not None:
        overrides["omega"] = args.omega
    if args.lam is not None:
        overrides["lambda"] = args.lam
    if args.normalize:
        overrides["normalize"] = 1.0
    if args.t_max is not None and spec.metric == "N":
        overrides["t"] = args.t_max
    if args.steps is not None and spec.metric == "N":
        overrides["steps"] = float(args.steps)
    axis_names = {name for name, _ in spec.axes()}
    spec.fixed.update({k: v for k, v in overrides.items() if k not in axis_names})
    spec.validate()
    _emit(run_sweep(spec, jobs=args.jobs), args.out)


def cmd_sweep(args):
    try:
        spec = parse_config(args.config)
    except OSError as exc:
        raise UsageError(f"cannot read config {args.config}: {exc.strerror}") from None
    _emit(run_sweep(spec, jobs=args.jobs), args.out)


def cmd_nonmarkov(args):
    params = _params(args, omega=1.0, lam=0.1)
    grid = TimeGrid(0.0, args.t_max, args.steps)
    canon = blp_measure(params, canonical_pair(), grid)
    equat = blp_measure(params, equatorial_pair(), grid)
    best = maximize_over_pairs(params, grid, args.samples, args.seed)
    print(f"canonical pair (e, g): N = {canon.n_value:.9f}")
    print(f"equatorial pair:       N = {equat.n_value:.9f}")
    print(f"best of {args.samples} pairs: N = {best.n_value:.9f} (pair index {best.index})")
    if canon.horizon_limited:
        print(f"warning: oscillations not yet decayed at t = {args.t_max:g}; N is horizon-limited")
    if args.out is not None:
        series = evolve_pair(params, best.pair, grid)
        _emit(SeriesTable(["t", "D"], [[t, d] for t, d in zip(grid.times, series.d)]), args.out)


def cmd_validate(args):
    if args.omega is None and args.lam is None:
        sets = VALIDATE_SETS
    else:
        p = _params(args)
        sets = [(p.omega, p.lam)]
    grid = TimeGrid(0.0, args.t_max, args.steps)
    rho = apply_weak_measurement(prepare_initial(InitialPreparation(args.theta)), args.p1)
    r0 = embed_atom_with_vacuum(rho)

    def one(pair):
        omega, lam = pair
        params = PhysicalParams(lambda0=1.0, lam=lam, omega=omega, omega0=args.omega0)
        start = time.perf_counter()
        dev = compare_closed_form(params, r0, grid)
        return dev, time.perf_counter() - start

    with ThreadPoolExecutor(max_workers=max(args.jobs, 1)) as pool:
        results = list(pool.map(one, sets))
    worst = 0.0
    for (omega, lam), (dev, elapsed) in zip(sets, results):
        status = "ok" if dev <= VALIDATE_TOL else "FAIL"
        print(f"omega={omega:g} lambda={lam:g} dt={grid.dt:.3g}: max deviation {dev:.3e} [{status}] ({elapsed:.1f}s)")
        worst = max(worst, dev)
    print(f"max deviation {worst:.3e} (tolerance {VALIDATE_TOL:g})")
    return 0 if worst <= VALIDATE_TOL else EXIT_FAILURE


COMMANDS = {
    "simulate": cmd_simulate,
    "figure": cmd_figure,
    "sweep": cmd_sweep,
    "nonmarkov": cmd_nonmarkov,
    "validate": cmd_validate,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s: %(message)s",
    )
    try:
        return COMMANDS[args.command](args) or 0
    except (UsageError, SweepError, DomainError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    except OSError as exc:
        print(f"I/O error: {exc.filename or ''}: {exc.strerror or exc}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
