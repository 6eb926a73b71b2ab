"""Command line front end.

Every subcommand reads one run configuration (``--config`` plus ``--set key=value`` overrides), writes its
artifacts as ``<stem>-<config hash>.<fmt>`` into the output directory and returns

    0  on success,
    2  on usage, configuration or input errors (nothing is written when the configuration is invalid),
    3  when a solve did not reach its tolerance (artifacts are still written).

Example:
    tfdw --config atom.json minimize
    tfdw --config atom.json --set solve.m=0.5 --out runs diagnose
    tfdw --config atom.json --jobs 4 --resume curve
"""

import argparse
import sys
from pathlib import Path

from .constants import EXIT_OK, EXIT_CONFIG, EXIT_NOT_CONVERGED, M_VALUES
from .curves.asymptotics import slope_limit, small_m_slope
from .curves.binding import binding_check, gap_curve, per_mass_check, split_pairs
from .curves.curve import complete_splits, compute_curve
from .curves.export import CSV, JSON, artifact_path, export, load_curve, write_dat, write_frame, write_json
from .diagnostics.escape import escape_indicator
from .diagnostics.report import build_report
from .energy.functional import energy
from .energy.potential import NoPotential
from .errors import TfdwError, SolverFailure
from .grid.cartesian import BoxGrid
from .grid.radial import RadialFunction
from .grid.state_file import load_state, save_state
from .solver.gagliardo_nirenberg import gn_quotient_optimize
from .solver.minimize import SolveConfig, minimize_mass_constrained
from .utils import log
from .utils.config import RunConfig, config_hash

LOGGED_MODULES = ("radial", "cartesian", "functional", "descent", "minimize", "gagliardo_nirenberg", "radius",
                  "escape", "report", "curve", "binding", "export", "files", "cli")
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")


def add_default_args(parser):
    """Adds the options shared by every subcommand.

    Args:
        parser (argparse.ArgumentParser)

    Return:
        argparse.ArgumentParser
    """
    parser.add_argument('-c', '--config', type=str, default=None, help='run configuration (JSON or YAML)')
    parser.add_argument('-s', '--set', dest='overrides', action='append', default=[], metavar='KEY=VALUE',
                        help='override a configuration key by dotted path, e.g. solve.m=0.5 (repeatable)')
    parser.add_argument('-o', '--out', type=str, default=None, help='output directory (overrides TFDW_OUT)')
    parser.add_argument('-j', '--jobs', type=int, default=1, help='worker threads for curve sweeps')
    parser.add_argument('-r', '--resume', action='store_true', help='reuse samples of an existing curve file')
    parser.add_argument('--log-file', type=str, default=None, help='log file (stderr if omitted)')
    parser.add_argument('--log-level', type=str, default='WARNING', choices=LOG_LEVELS, help='logging level')
    return parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='tfdw', description='TFDW energy laboratory')
    add_default_args(parser)
    commands = parser.add_subparsers(dest='command', required=True)

    p = commands.add_parser('energy', help='energy breakdown of a state file')
    p.add_argument('state', type=str, help='state file written by minimize')
    p.set_defaults(run=cmd_energy)

    p = commands.add_parser('minimize', help='mass-constrained minimization at solve.m')
    p.set_defaults(run=cmd_minimize)

    p = commands.add_parser('curve', help='energy curve over curve.m_values')
    p.set_defaults(run=cmd_curve)

    p = commands.add_parser('binding', help='binding inequality and gap checks on two curves')
    p.add_argument('--potential-curve', type=str, default=None, help='curve file of I_V')
    p.add_argument('--free-curve', type=str, default=None, help='curve file of I~_0')
    p.set_defaults(run=cmd_binding)

    p = commands.add_parser('diagnose', help='localization report of a minimizer')
    p.add_argument('--state', type=str, default=None, help='state to diagnose instead of solving')
    p.set_defaults(run=cmd_diagnose)

    p = commands.add_parser('asymptotics', help='small-mass slope of the free curve')
    p.set_defaults(run=cmd_asymptotics)
    return parser


def _status(converged: bool) -> int:
    return EXIT_OK if converged else EXIT_NOT_CONVERGED


def cmd_energy(config: RunConfig, args, out: Path) -> int:
    u = load_state(args.state)
    terms = energy(u, config.potential, config.constants)
    for name, value in terms.to_dict().items():
        print(f"{name:14} {value: .12e}")
    write_json({"config_hash": config.hash, "state": str(args.state), "energy": terms.to_dict()},
               artifact_path(out, "energy", config.hash, JSON))
    return EXIT_OK


def cmd_minimize(config: RunConfig, args, out: Path) -> int:
    result = minimize_mass_constrained(config.potential, config.solve, config.constants, config.grid, config.box)
    result.u.meta["config_hash"] = config.hash
    save_state(result.u, artifact_path(out, "state", config.hash, JSON))
    write_json({"config_hash": config.hash, **result.summary()}, artifact_path(out, "minimize", config.hash, JSON))
    if isinstance(result.u, RadialFunction):
        write_dat(artifact_path(out, "state", config.hash, "dat"), result.grid.nodes, result.u.values,
                  header=f"{config.hash} r u(r)")
    print(f"m = {result.m:g}  energy = {result.energy:.12e}  residual = {result.residual:.3e}  "
          f"converged = {result.converged}")
    return _status(result.converged)


def _write_curve(curve, out: Path, digest: str) -> None:
    export(curve, artifact_path(out, "curve", digest, CSV), CSV)
    export(curve, artifact_path(out, "curve", digest, JSON), JSON)
    write_dat(artifact_path(out, "curve", digest, "dat"), curve.masses, curve.energies,
              header=f"{digest} m {curve.label}(m)")


def cmd_curve(config: RunConfig, args, out: Path) -> int:
    path = artifact_path(out, "curve", config.hash, JSON)
    existing = load_curve(path) if args.resume and path.exists() else None
    free_path = artifact_path(out, "curve", config_hash(config.constants, NoPotential(), config.grid, config.box),
                              JSON)
    free = None
    if not isinstance(config.potential, NoPotential) and free_path.exists():
        free = load_curve(free_path)
        log.logger.info(f"completing splits against {free_path}")
    curve = compute_curve(config.potential, config.curve[M_VALUES], config.solve, config.constants, config.grid,
                          config.box, jobs=args.jobs, warm_start=config.curve["warm_start"], existing=existing,
                          progress=sys.stderr.isatty(), free=free)
    _write_curve(curve, out, config.hash)
    for s in curve.samples:
        source = "solve" if s.split is None else f"split m' = {s.split:g}"
        print(f"m = {s.m:<10g} {curve.label} = {s.energy: .12e}  residual = {s.residual:.3e}  ({source})")
    return _status(all(s.settled for s in curve.samples))


def _curve_file(explicit, configured, out: Path, digest: str) -> Path:
    return Path(explicit or configured or artifact_path(out, "curve", digest, JSON))


def cmd_binding(config: RunConfig, args, out: Path) -> int:
    free_hash = config_hash(config.constants, NoPotential(), config.grid, config.box)
    curve_v = load_curve(_curve_file(args.potential_curve, config.binding["potential_curve"], out, config.hash))
    curve_0 = load_curve(_curve_file(args.free_curve, config.binding["free_curve"], out, free_hash))
    if curve_v.config_hash != config.hash or curve_0.config_hash != free_hash:
        raise TfdwError("curve files were computed with another configuration; refusing to mix them")
    curve_0 = complete_splits(curve_0)
    curve_v = curve_0 if isinstance(curve_v.potential, NoPotential) else complete_splits(curve_v, curve_0)

    pairs = config.binding["pairs"] or split_pairs(curve_v.masses)
    residuals = binding_check(curve_v, curve_0, pairs)
    doc = {"config_hash": config.hash, "free_hash": free_hash,
           "residuals": [{"m": r.m, "m_prime": r.m_prime, "residual": r.residual} for r in residuals],
           "per_mass": [list(row) for row in per_mass_check(curve_0)],
           "splits": {"free": [[s.m, s.split] for s in curve_0.samples if s.split is not None],
                      "potential": [[s.m, s.split] for s in curve_v.samples if s.split is not None]}}
    if curve_v.potential.total_charge() > 0:
        gaps = gap_curve(curve_v, curve_0)
        doc["gap"] = [list(row) for row in gaps]
        write_dat(artifact_path(out, "gap", config.hash, "dat"), [g[0] for g in gaps], [g[2] for g in gaps],
                  header=f"{config.hash} m normalized_gap")
    write_json(doc, artifact_path(out, "binding", config.hash, JSON))
    write_dat(artifact_path(out, "binding", config.hash, "dat"), [r.m for r in residuals],
              [r.residual for r in residuals], header=f"{config.hash} m residual")

    worst = min(residuals, key=lambda r: r.residual, default=None)
    if worst is not None:
        print(f"{len(residuals)} split(s); smallest residual {worst.residual:.3e} at (m, m') = "
              f"({worst.m:g}, {worst.m_prime:g})")
    return EXIT_OK


def _escape(config: RunConfig, extents) -> dict | None:
    if len(extents) < 2:
        return None
    cfg = SolveConfig(**{**config.solve.to_dict(), "auto_extent": False})
    results = []
    for extent in extents:
        with log.stage(f"r_max={extent:g}"):
            if config.potential.needs_box:
                box = BoxGrid(length=2 * float(extent), n=config.box.n)
                results.append(minimize_mass_constrained(config.potential, cfg, config.constants, box=box))
            else:
                grid = config.grid.with_extent(float(extent))
                results.append(minimize_mass_constrained(config.potential, cfg, config.constants, grid=grid))
    return escape_indicator(results).to_dict()


def cmd_diagnose(config: RunConfig, args, out: Path) -> int:
    converged = True
    if args.state:
        u = load_state(args.state)
    else:
        result = minimize_mass_constrained(config.potential, config.solve, config.constants, config.grid,
                                           config.box)
        u, converged = result.u, result.converged
    report = build_report(u, config.potential, config.constants, radii=config.diagnose["radii"],
                          concentration_radii=config.diagnose["concentration_radii"])
    doc = {"config_hash": config.hash, "report": report.to_dict(),
           "escape": _escape(config, config.diagnose["extents"])}
    write_json(doc, artifact_path(out, "diagnose", config.hash, JSON))
    export(report, artifact_path(out, "concentration", config.hash, CSV), CSV)
    if report.concentration:
        radii, masses = zip(*report.concentration)
        write_dat(artifact_path(out, "concentration", config.hash, "dat"), radii, masses,
                  header=f"{config.hash} R M_R")
    print(f"m = {report.m:g}  R_m = {report.R_m:.6g}  r_m = {report.r_m}")
    return _status(converged)


def cmd_asymptotics(config: RunConfig, args, out: Path) -> int:
    gn = gn_quotient_optimize(config.solve, config.grid)
    curve = compute_curve(NoPotential(), config.asymptotics[M_VALUES], config.solve, config.constants,
                          config.grid, config.box, jobs=args.jobs, progress=sys.stderr.isatty())
    table = small_m_slope(curve, gn.S, config.constants)
    doc = {"config_hash": config.hash, "S": gn.S, "gn_converged": gn.converged,
           "limit": slope_limit(gn.S, config.constants), "rows": table.to_dict(orient="records")}
    write_json(doc, artifact_path(out, "asymptotics", config.hash, JSON))
    write_frame(table, artifact_path(out, "asymptotics", config.hash, CSV))
    write_dat(artifact_path(out, "asymptotics", config.hash, "dat"), table["m"], table["ratio"],
              header=f"{config.hash} m I_0(m)/m^(5/3)")
    print(f"S = {gn.S:.10g}  limit = {doc['limit']:.10g}")
    return _status(gn.converged and all(s.converged for s in curve.samples))


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_CONFIG

    try:
        config = RunConfig.load(args.config, args.overrides)
        if args.jobs < 1:
            raise TfdwError("--jobs must be at least 1")
    except TfdwError as e:
        print(f"tfdw: configuration error: {e}", file=sys.stderr)
        return EXIT_CONFIG

    out = config.output_dir(args.out)
    try:
        log.set_logger("tfdw", run=config.hash, logfile=args.log_file)
        log.set_logger_level(args.log_level)
        for module in LOGGED_MODULES:
            log.track_module(module)
        log.logger.info(f"{args.command} into {out}")
        return args.run(config, args, out)
    except SolverFailure as e:
        print(f"tfdw: solver failure: {e}", file=sys.stderr)
        return EXIT_NOT_CONVERGED
    except (TfdwError, OSError) as e:
        print(f"tfdw: {e}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
