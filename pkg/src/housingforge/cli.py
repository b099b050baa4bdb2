"""Command-line front end: parse, plan, check, mesh and report.

Exit status: 0 clean, 2 design-rule errors (artifacts still written),
1 hard failure (unreadable input, infeasible plan, broken mesh).
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

from .bolts import default_calibration, format_plan, load_calibration, plan_bolts
from .cavity import PROFILES
from .drc import assembly_report, format_violations, has_errors, run_drc
from .errors import FormatSyntaxError, HousingForgeError
from .ingest import SourceFormat, default_library, load_library, parse_board, save_library
from .mesh import HousingConfig, build_housing, emit_stl, mesh_diagnostics
from .reuse import diff_reuse, load_ledger, record_cycle_file

EXIT_OK, EXIT_FAILURE, EXIT_RULES = 0, 1, 2
LIBRARY_ENV = "HOUSINGFORGE_LIBRARY"

log = logging.getLogger("housingforge")


class _Failure(Exception):
    pass


def _read(path: str) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise _Failure(f"cannot read {path}: {exc.strerror or exc}") from None


def _library(args):
    path = getattr(args, "library", None) or os.environ.get(LIBRARY_ENV)
    if not path:
        return default_library()
    try:
        return load_library(_read(path))
    except FormatSyntaxError as exc:
        exc.filename = path
        raise


def _board(path: str, lib):
    data = _read(path)
    warnings: list[str] = []
    try:
        return parse_board(data, SourceFormat.for_path(path), lib, name=Path(path).stem, warnings=warnings)
    except FormatSyntaxError as exc:
        exc.filename = path
        raise


def _calibration(args):
    if not args.calibration:
        return default_calibration()
    try:
        return load_calibration(_read(args.calibration))
    except FormatSyntaxError as exc:
        exc.filename = args.calibration
        raise


def _config(args) -> HousingConfig:
    try:
        return HousingConfig(args.thickness, args.bolt_diameter, profile=PROFILES[args.profile])
    except ValueError as exc:
        raise _Failure(str(exc)) from None


def _plan(args, board, lib, cfg):
    return plan_bolts(board, lib, cfg.thickness, _calibration(args), bolt_diameter=cfg.bolt_diameter)


def cmd_generate(args) -> int:
    lib = _library(args)
    board = _board(args.input, lib)
    cfg = _config(args)
    cal = _calibration(args)
    plan = plan_bolts(board, lib, cfg.thickness, cal, bolt_diameter=cfg.bolt_diameter)
    violations = run_drc(board, plan, cfg, cal=cal)
    mesh = build_housing(board, plan, lib, cfg, degrade=True)
    diag = mesh_diagnostics(mesh)
    notes = [f"mesh: {diag.summary()}"]
    if has_errors(violations):
        notes.append("design-rule errors present; cavities that cannot carry tabs were cut as plain pockets")
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    name = board.name
    artifacts = {
        f"{name}-housing.stl": emit_stl(mesh, ascii=args.ascii_stl, name=name),
        f"{name}-plan.txt": format_plan(plan).encode(),
        f"{name}-drc.txt": format_violations(violations, args.format).encode(),
        f"{name}-report.txt": assembly_report(board, plan, notes).text().encode(),
    }
    for fname, data in artifacts.items():
        (out / fname).write_bytes(data)
        print(out / fname)
    if has_errors(violations):
        print(f"{name}: design-rule errors, see {name}-drc.txt", file=sys.stderr)
        return EXIT_RULES
    return EXIT_OK


def cmd_plan_bolts(args) -> int:
    lib = _library(args)
    board = _board(args.input, lib)
    sys.stdout.write(format_plan(_plan(args, board, lib, _config(args))))
    return EXIT_OK


def cmd_check(args) -> int:
    lib = _library(args)
    board = _board(args.input, lib)
    cfg = _config(args)
    cal = _calibration(args)
    plan = plan_bolts(board, lib, cfg.thickness, cal, bolt_diameter=cfg.bolt_diameter)
    violations = run_drc(board, plan, cfg, cal=cal)
    sys.stdout.write(format_violations(violations, args.format))
    return EXIT_RULES if has_errors(violations) else EXIT_OK


def cmd_diff_reuse(args) -> int:
    lib = _library(args)
    report = diff_reuse(_board(args.old, lib), _board(args.new, lib))
    sys.stdout.write(report.tsv() if args.format == "tsv" else report.text())
    return EXIT_OK


def cmd_library(args) -> int:
    lib = _library(args)
    if args.dump:
        sys.stdout.write(save_library(lib).decode())
        return EXIT_OK
    for spec in lib:
        bolts = f" bolts={len(spec.bolt_offsets)}" if spec.bolt_offsets else ""
        print(f"{spec.name}\t{spec.cls.value}\t{spec.length:g} x {spec.width:g} x {spec.thickness:g}{bolts}")
    return EXIT_OK


def cmd_cycles(args) -> int:
    if args.housing is None:
        for hid, n in sorted(load_ledger(args.ledger).counts.items()):
            print(f"{hid}\t{n}")
        return EXIT_OK
    ledger, warning = record_cycle_file(args.ledger, args.housing)
    print(f"{args.housing}: {ledger.count(args.housing)} cycle(s)")
    if warning is not None:
        print(f"warning: {warning}", file=sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--library", help=f"package library file (default: ${LIBRARY_ENV} or built-in)")
    common.add_argument("--format", choices=("text", "tsv"), default="text")

    design = argparse.ArgumentParser(add_help=False)
    design.add_argument("--input", required=True, help="board file (.kicad_pcb or native boardspec)")
    design.add_argument("--calibration", help="spancal v1 file (default: uncalibrated 9 t model)")
    design.add_argument("--thickness", type=float, default=3.0, help="housing thickness, mm [1, 5]")
    design.add_argument("--profile", choices=sorted(PROFILES), default="resin")
    design.add_argument("--bolt-diameter", type=float, default=1.0, help="mm, at least 1.0")

    parser = argparse.ArgumentParser(prog="housingforge", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", parents=[common, design], help="write housing STL, plan, DRC and report")
    g.add_argument("--out-dir", default=".")
    g.add_argument("--ascii-stl", action="store_true")
    g.set_defaults(func=cmd_generate)

    p = sub.add_parser("plan-bolts", parents=[common, design], help="print the bolt plan")
    p.set_defaults(func=cmd_plan_bolts)

    c = sub.add_parser("check", parents=[common, design], help="run design-rule checks")
    c.set_defaults(func=cmd_check)

    d = sub.add_parser("diff-reuse", parents=[common], help="count parts reusable between two boards")
    d.add_argument("old")
    d.add_argument("new")
    d.set_defaults(func=cmd_diff_reuse)

    lb = sub.add_parser("library", parents=[common], help="list or dump the package library")
    lb.add_argument("--dump", action="store_true", help="print packlib v1 text")
    lb.set_defaults(func=cmd_library)

    cy = sub.add_parser("cycles", help="record or list housing assembly cycles")
    cy.add_argument("--ledger", required=True, help="reuse-ledger v1 file")
    cy.add_argument("housing", nargs="?", help="housing id to record one more assembly for")
    cy.set_defaults(func=cmd_cycles)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR, format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except FormatSyntaxError as exc:
        print(f"error: {exc}", file=sys.stderr)
    except HousingForgeError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
    except _Failure as exc:
        print(f"error: {exc}", file=sys.stderr)
    return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
