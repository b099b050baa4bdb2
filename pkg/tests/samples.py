"""Seed inputs shared by the parser tests and the fuzz campaign."""

from __future__ import annotations

from housingforge.bolts import default_calibration, save_calibration
from housingforge.fixtures import all_fixtures
from housingforge.ingest import default_library, save_library, serialize_board
from housingforge.reuse import CycleLedger, dump_ledger


def kicad_text(board, footprint_names=None) -> str:
    """Write a board as a small KiCad s-expression file (y flipped to KiCad's downward axis)."""
    names = footprint_names or {}
    out = ['(kicad_pcb (version 20221018) (generator "pcbnew")',
           f"  (general (thickness {board.thickness}))",
           '  (layers (0 "F.Cu" signal) (31 "B.Cu" signal) (44 "Edge.Cuts" user))',
           '  (setup (pad_to_mask_clearance 0))']
    nets = sorted(board.nets())
    out.append('  (net 0 "")')
    out += [f'  (net {i + 1} "{n}")' for i, n in enumerate(nets)]
    ring = board.outline.outer
    for a, b in zip(ring, ring[1:] + ring[:1]):
        out.append(f'  (gr_line (start {a.x} {-a.y}) (end {b.x} {-b.y}) (layer "Edge.Cuts") (width 0.1))')
    out.append('  (gr_text "rev A" (at 1 1) (layer "F.SilkS"))')
    for c in board.components:
        fp = names.get(c.package.name, c.package.aliases[0] if c.package.aliases else c.package.name)
        p = c.placement.position
        out.append(f'  (footprint "Lib:{fp}" (layer "F.Cu") (at {p.x} {-p.y} {c.placement.rotation})')
        out.append(f'    (property "Reference" "{c.ref}")')
        out.append(f'    (property "Value" "{c.part_number}")')
        for pad in c.package.pads:
            net = c.nets.get(pad.name)
            net_s = f' (net {nets.index(net) + 1} "{net}")' if net else ""
            out.append(f'    (pad "{pad.name}" smd rect (at {pad.x} {-pad.y}) (size {pad.w} {pad.h}) '
                       f'(layers "F.Cu"){net_s})')
        out.append("  )")
    out.append(")")
    return "\n".join(out) + "\n"


def seed_corpus() -> dict[str, list[bytes]]:
    boards = list(all_fixtures().values())
    return {
        "native": [serialize_board(b) for b in boards],
        "kicad": [kicad_text(b).encode() for b in boards if b.components],
        "library": [save_library(default_library())],
        "calibration": [save_calibration(default_calibration())],
        "ledger": [dump_ledger(CycleLedger({"timer-v1": 3, "bot 2": 6}))],
    }
