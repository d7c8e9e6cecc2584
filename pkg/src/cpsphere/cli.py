"""Command-line front end.

Subcommands: ``potential`` (one scenario), ``sweep`` (parameter sweep to
CSV), ``polarizability`` (excess-response curves), ``verify`` (identity
suite), ``print-config`` (fully defaulted configuration).

Exit codes: 0 success, 1 verification failure, 2 configuration error,
3 physics-validity error, 4 quadrature failure.  CSV output is
deterministic for a fixed config and version and is written to a temporary
file first, so failures never leave partial output behind.
"""

from __future__ import annotations

import argparse
import os
import sys
import tempfile
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__
from .config import RunConfig, load_config, render_config, scenario_with
from .errors import (ConfigError, CPSphereError, QuadratureError,
                     ValidityError)
from .potential import CHANNELS, PotentialResult, potential_total
from .scatterer import (SphereAssembly, cavity_excess, excess_full_sphere,
                        free_space_sphere, sphere_in_cavity_excess)
from .verify import format_report, run_verification, summary_json

SWEEP_COLUMNS = ("r_AS", "q", "R_C", "U_ee", "U_em", "U_me", "U_mm",
                 "U_total", "quad_error_max")


def _fmt(value: float) -> str:
    return format(float(value), ".17g")


def _metadata_lines(cfg: RunConfig) -> list[str]:
    return [f"# cpsphere {__version__}",
            f"# config_sha256: {cfg.sha256}",
            f"# units: {cfg.units}"]


def _write_csv(path: str, header_lines: list[str], columns: tuple,
               rows: list[tuple]) -> None:
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".cpsphere-", suffix=".csv")
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            for line in header_lines:
                fh.write(line + "\n")
            fh.write(",".join(columns) + "\n")
            for row in rows:
                fh.write(",".join(_fmt(v) for v in row) + "\n")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _geometry_columns(scenario) -> tuple:
    partner = scenario.partner
    if isinstance(partner, SphereAssembly):
        return partner.q, partner.outer_radius
    return 1.0, 0.0  # atom partner carries no radii


def _result_row(cfg: RunConfig, scenario, result: PotentialResult) -> tuple:
    conv = cfg.units_converter
    q, r_c = _geometry_columns(scenario)
    sep = scenario.separation
    channels = {ch: result.channels.get(ch, 0.0) for ch in CHANNELS}
    total = result.total
    err = result.error_max
    if conv is not None:
        sep = conv.length_from_reduced(sep)
        r_c = conv.length_from_reduced(r_c)
        channels = {ch: conv.energy_from_reduced(v) for ch, v in channels.items()}
        total = conv.energy_from_reduced(total)
        err = conv.energy_from_reduced(err)
    return (sep, q, r_c, channels["ee"], channels["em"], channels["me"],
            channels["mm"], total, err)


def _load_checked(args) -> RunConfig:
    cfg = load_config(args.config)
    expected = getattr(args, "units", None)
    if expected is not None and expected != cfg.units:
        raise ConfigError(f"--units {expected} does not match the config's "
                          f"unit system {cfg.units!r}; set `units` in the "
                          "config file")
    return cfg


def cmd_potential(args) -> int:
    cfg = _load_checked(args)
    result = potential_total(cfg.scenario, cfg.quadrature)
    row = _result_row(cfg, cfg.scenario, result)
    unit = "hbar*omega_ref" if cfg.units == "reduced" else "J"
    for ch in CHANNELS:
        if ch in result.channels:
            value = row[3 + CHANNELS.index(ch)]
            print(f"U_{ch}     = {_fmt(value)} [{unit}]")
    print(f"U_total  = {_fmt(row[7])} [{unit}]")
    print(f"max quadrature error estimate = {_fmt(row[8])}")
    for note in result.warnings:
        print(f"warning: {note}", file=sys.stderr)
    if args.output:
        _write_csv(args.output, _metadata_lines(cfg), SWEEP_COLUMNS, [row])
    return 0


def _sweep_scenarios(cfg: RunConfig) -> list:
    sweep = cfg.sweep
    if sweep is None:
        raise ConfigError("sweep: section required for the sweep command")
    key = {"r_AS": "separation", "q": "q", "R_C": "cavity_radius"}[sweep.parameter]
    return [scenario_with(cfg, **{key: float(v)}) for v in sweep.grid()]


def cmd_sweep(args) -> int:
    if args.jobs < 1:
        raise ConfigError("--jobs must be >= 1")
    cfg = _load_checked(args)
    scenarios = _sweep_scenarios(cfg)

    def compute(scenario) -> tuple:
        return _result_row(cfg, scenario,
                           potential_total(scenario, cfg.quadrature))

    if args.jobs > 1:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(compute, scenarios))
    else:
        rows = [compute(s) for s in scenarios]
    _write_csv(args.output, _metadata_lines(cfg), SWEEP_COLUMNS, rows)
    print(f"wrote {len(rows)} rows to {args.output}")
    return 0


def cmd_polarizability(args) -> int:
    cfg = _load_checked(args)
    scenario = cfg.scenario
    partner = scenario.partner
    if not isinstance(partner, SphereAssembly):
        raise ConfigError("polarizability curves need a sphere partner")
    if args.xi_spacing == "log":
        if args.xi_from <= 0.0:
            raise ConfigError("--xi-from must be > 0 for log spacing")
        grid = np.geomspace(args.xi_from, args.xi_to, args.xi_steps)
    else:
        grid = np.linspace(args.xi_from, args.xi_to, args.xi_steps)
    conv = cfg.units_converter
    if conv is not None:
        grid = np.array([conv.frequency_to_reduced(v) for v in grid])

    rows = []
    rc = partner.outer_radius
    for xi in grid:
        eps = scenario.host_eps.at_imag(float(xi))
        mu = scenario.host_mu.at_imag(float(xi))
        if partner.cavity_radius is not None:
            star = sphere_in_cavity_excess(partner, eps, mu, float(xi))
        else:
            star = excess_full_sphere(partner, eps, mu, float(xi))
        free = free_space_sphere(partner, float(xi))
        cav = cavity_excess(rc, eps, mu)
        rows.append((float(xi), star.alpha, star.beta, free.alpha, cav.alpha))
    columns = ("xi", "alpha_star", "beta_star", "alpha_free", "alpha_cavity")
    if args.output:
        _write_csv(args.output, _metadata_lines(cfg), columns, rows)
        print(f"wrote {len(rows)} rows to {args.output}")
    else:
        print(",".join(columns))
        for row in rows:
            print(",".join(_fmt(v) for v in row))
    return 0


def cmd_verify(args) -> int:
    results = run_verification(only=args.only, tolerance=args.tolerance)
    print(format_report(results))
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(summary_json(results) + "\n")
    return 0 if all(r.passed for r in results) else 1


def cmd_print_config(args) -> int:
    doc = None
    if args.config:
        doc = load_config(args.config).document
    sys.stdout.write(render_config(doc))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cpsphere",
        description="Dispersion potentials of an atom facing a small "
                    "magnetodielectric sphere in a magnetoelectric host")
    parser.add_argument("--version", action="version",
                        version=f"cpsphere {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("potential", help="compute one scenario")
    p.add_argument("--config", required=True)
    p.add_argument("--output", help="optional single-row CSV")
    p.add_argument("--units", choices=("reduced", "SI"))
    p.set_defaults(func=cmd_potential)

    p = sub.add_parser("sweep", help="run the configured parameter sweep")
    p.add_argument("--config", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--units", choices=("reduced", "SI"))
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("polarizability",
                       help="excess-response curves over a frequency grid")
    p.add_argument("--config", required=True)
    p.add_argument("--output")
    p.add_argument("--xi-from", type=float, default=0.0)
    p.add_argument("--xi-to", type=float, default=10.0)
    p.add_argument("--xi-steps", type=int, default=101)
    p.add_argument("--xi-spacing", choices=("linear", "log"), default="linear")
    p.add_argument("--units", choices=("reduced", "SI"))
    p.set_defaults(func=cmd_polarizability)

    p = sub.add_parser("verify", help="run the identity verification suite")
    p.add_argument("--tolerance", type=float,
                   help="override every check's tolerance")
    p.add_argument("--only", help="run the checks whose names contain this token")
    p.add_argument("--output", help="write the machine-readable JSON summary")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("print-config",
                       help="print the configuration with all defaults explicit")
    p.add_argument("--config")
    p.set_defaults(func=cmd_print_config)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except ValidityError as exc:
        print(f"validity error: {exc}", file=sys.stderr)
        return 3
    except QuadratureError as exc:
        print(f"quadrature failure: {exc}", file=sys.stderr)
        return 4
    except CPSphereError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
