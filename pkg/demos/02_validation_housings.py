"""One housing per IC family, written as STL files you can open in a slicer.

Each validation board carries one IC (SOIC, TSSOP, TQFP, QFN or BGA) with
five 0805 resistors and five 1206 LEDs. The housing gets press bars over
leaded packages, a negative pocket over bottom-pad packages, flexible tabs
for the chips, and an isolation groove around each IC.

Run:  python demos/02_validation_housings.py [out_dir]
"""

from __future__ import annotations

import sys
from pathlib import Path

from housingforge import build_housing, default_library, emit_stl, mesh_diagnostics, plan_bolts, run_drc
from housingforge.cavity import cavity_for
from housingforge.fixtures import VALIDATION_PACKAGES, validation_board


def main(out_dir: str = "demo-out") -> None:
    lib = default_library()
    out = Path(out_dir)
    out.mkdir(exist_ok=True)
    for pkg in VALIDATION_PACKAGES:
        board = validation_board(pkg)
        cav = cavity_for(board.component("U1"))
        plan = plan_bolts(board, lib)
        mesh = build_housing(board, plan, lib)
        rep = mesh_diagnostics(mesh)
        path = out / f"{board.name}.stl"
        path.write_bytes(emit_stl(mesh, name=board.name))
        print(f"{pkg:9s} cavity={cav.kind.value:15s} bars={len(cav.inserts)} "
              f"holes={len(plan.holes):2d} DRC={len(run_drc(board, plan))} -> {path}")
        print(f"          {rep.summary()}")


if __name__ == "__main__":
    main(*sys.argv[1:2])
