"""Board ingestion: native ``boardspec v1`` text and a KiCad ``.kicad_pcb`` subset."""

from __future__ import annotations

import enum
import logging
import math
from pathlib import Path

import shapely

from ..errors import (
    ComponentOutsideOutline,
    DegenerateOutline,
    DuplicateRefDes,
    InvariantViolation,
    MissingOutline,
    UnknownPackage,
)
from ..geometry import Point2, Polygon2, signed_area
from ..model import BoardDesign, ComponentInstance, FreePad, Placement
from . import sexpr
from .library import LibraryFile
from .textfmt import decode, fmt, lines, quote, read_header

log = logging.getLogger(__name__)

BOARD_VERSION = "v1"
MAX_COORD = 1.0e6  # mm; keeps geometry well inside float precision


class SourceFormat(enum.Enum):
    KICAD_PCB_SUBSET = "kicad"
    NATIVE_BOARD = "native"

    @classmethod
    def for_path(cls, path: str | Path) -> "SourceFormat":
        return cls.KICAD_PCB_SUBSET if str(path).endswith(".kicad_pcb") else cls.NATIVE_BOARD


def parse_board(data: bytes | str, fmt_: SourceFormat, lib: LibraryFile, *, name: str = "board",
                warnings: list[str] | None = None) -> BoardDesign:
    """Parse board bytes into a validated :class:`BoardDesign`.

    Raises:
        FormatSyntaxError: malformed input, with line/column.
        UnknownPackage: a footprint is missing from ``lib``.
        MissingOutline / DegenerateOutline: no usable board-edge polygon.
        ComponentOutsideOutline, DuplicateRefDes, InvariantViolation.
    """
    sink = warnings if warnings is not None else []
    if fmt_ is SourceFormat.NATIVE_BOARD:
        board = _read_native(decode(data), lib)
    else:
        board = _read_kicad(decode(data), lib, name, sink)
    for w in sink:
        log.info("%s", w)
    return board


# -- validation -------------------------------------------------------------


def _check_outline(outline: Polygon2 | None) -> Polygon2:
    if outline is None:
        raise MissingOutline()
    if not outline.is_simple() or outline.to_shapely().area <= 0.0:
        raise DegenerateOutline("board outline self-intersects or has zero area")
    return outline


def _outline(outer, holes=()) -> Polygon2:
    try:
        return Polygon2.from_points(outer, holes)
    except ValueError:
        raise DegenerateOutline("board outline needs at least 3 vertices") from None


def build_board(name: str, outline: Polygon2 | None, thickness: float, components, free_pads=()) -> BoardDesign:
    """Assemble a BoardDesign after checking the outline and every placement."""
    if outline is not None:
        coords = [v for ring in (outline.outer, *outline.holes) for p in ring for v in p]
        coords += [v for c in components for v in c.placement.position]
        if any(abs(v) > MAX_COORD for v in coords):
            raise InvariantViolation("board", f"coordinates beyond +-{MAX_COORD} mm")
    outline = _check_outline(outline)
    if not (thickness > 0.0):
        raise InvariantViolation("board", f"thickness must be positive, got {thickness}")
    seen = set()
    region = outline.to_shapely().buffer(1e-9)
    shapely.prepare(region)
    for comp in components:
        if comp.ref in seen:
            raise DuplicateRefDes(comp.ref)
        seen.add(comp.ref)
        pts = comp.footprint_points()
        if not region.covers(shapely.MultiPoint([tuple(p) for p in pts])):
            raise ComponentOutsideOutline(comp.ref)
    return BoardDesign(name, outline, float(thickness), tuple(components), tuple(free_pads))


# -- native -----------------------------------------------------------------


def _read_native(text: str, lib: LibraryFile) -> BoardDesign:
    it = lines(text)
    read_header(it, "boardspec", BOARD_VERSION)
    name = "board"
    thickness = 1.6
    outer = None
    cutouts = []
    comps: dict[str, dict] = {}
    order: list[str] = []
    free: list[FreePad] = []
    for ln in it:
        kw = ln.tokens[0]
        if kw == "name":
            ln.expect_len(2)
            name = ln.token(1)
        elif kw == "thickness":
            ln.expect_len(2)
            thickness = ln.number(1)
        elif kw in ("outline", "cutout"):
            if len(ln.tokens) % 2 != 1:
                raise ln.error(f"{kw} takes x y pairs")
            pts = [(ln.number(i), ln.number(i + 1)) for i in range(1, len(ln.tokens), 2)]
            if kw == "outline":
                if outer is not None:
                    raise ln.error("duplicate outline")
                outer = pts
            else:
                cutouts.append(pts)
        elif kw == "component":
            ln.expect_len(8)
            ref, pkg_name = ln.token(1), ln.token(2)
            if ref in comps:
                raise DuplicateRefDes(ref)
            if ln.token(6) != "top":
                raise InvariantViolation(ref, "only top-side components are supported")
            spec = lib.resolve(pkg_name)
            if spec is None:
                raise UnknownPackage(ref, pkg_name)
            comps[ref] = {"spec": spec, "pos": Point2(ln.number(3), ln.number(4)), "rot": ln.number(5),
                          "part": ln.token(7), "nets": {}}
            order.append(ref)
        elif kw == "net":
            ln.expect_len(4)
            ref = ln.token(1)
            if ref not in comps:
                raise ln.error(f"net for undeclared component {ref!r}", 1)
            if comps[ref]["spec"].pad(ln.token(2)) is None:
                raise ln.error(f"{ref} has no pad {ln.token(2)!r}", 2)
            comps[ref]["nets"][ln.token(2)] = ln.token(3)
        elif kw == "pad":
            ln.expect_len(7)
            free.append(FreePad(ln.token(1), ln.number(2), ln.number(3), ln.number(4), ln.number(5), ln.token(6)))
            if not (free[-1].w > 0 and free[-1].h > 0):
                raise ln.error("pad size must be positive", 4)
        else:
            raise ln.error(f"unknown section {kw!r}", 0)
    if outer is None:
        raise MissingOutline()
    components = [
        ComponentInstance(ref, c["spec"], Placement(c["pos"], c["rot"]), c["part"], c["nets"])
        for ref, c in ((r, comps[r]) for r in order)
    ]
    return build_board(name, _outline(outer, cutouts), thickness, components, free)


def serialize_board(board: BoardDesign) -> bytes:
    """Emit native ``boardspec v1`` text; floats use shortest round-trip repr."""
    out = [f"boardspec {BOARD_VERSION}", f"name {quote(board.name)}", f"thickness {fmt(board.thickness)}"]
    out.append("outline " + " ".join(f"{fmt(p.x)} {fmt(p.y)}" for p in board.outline.outer))
    for h in board.outline.holes:
        out.append("cutout " + " ".join(f"{fmt(p.x)} {fmt(p.y)}" for p in h))
    for c in board.components:
        pos = c.placement.position
        out.append(f"component {quote(c.ref)} {quote(c.package.name)} {fmt(pos.x)} {fmt(pos.y)} "
                   f"{fmt(c.placement.rotation)} {c.placement.side} {quote(c.part_number)}")
        for pad, net in c.nets.items():
            out.append(f"net {quote(c.ref)} {quote(pad)} {quote(net)}")
    for p in board.free_pads:
        out.append(f"pad {quote(p.name)} {fmt(p.x)} {fmt(p.y)} {fmt(p.w)} {fmt(p.h)} {quote(p.net)}")
    return ("\n".join(out) + "\n").encode("utf-8")


# -- KiCad subset -----------------------------------------------------------


def _num(node, idx: int, what: str) -> float:
    tok = node[idx] if idx < len(node) else node
    try:
        v = float(node[idx])
    except (IndexError, ValueError, TypeError):
        raise sexpr.error(tok, f"expected number in {what}") from None
    if not math.isfinite(v):
        raise sexpr.error(tok, f"non-finite number in {what}")
    return v


def _xy(node, what: str, parent) -> tuple[float, float]:
    if node is None:
        raise sexpr.error(parent, f"missing coordinates in {what}")
    return _num(node, 1, what), -_num(node, 2, what)  # KiCad y points down


def _layer(node) -> str | None:
    lay = sexpr.child(node, "layer")
    if lay is None or len(lay) < 2:
        return None
    return str(lay[1])


def _edge_segments(root, warnings: list[str]) -> tuple[list, list]:
    segs, polys = [], []
    for node in root[1:]:
        h = sexpr.head(node)
        if h not in ("gr_line", "gr_rect", "gr_poly", "gr_arc", "gr_circle"):
            continue
        if _layer(node) != "Edge.Cuts":
            continue
        if h == "gr_line":
            segs.append((_xy(sexpr.child(node, "start"), h, node), _xy(sexpr.child(node, "end"), h, node)))
        elif h == "gr_rect":
            (x0, y0), (x1, y1) = _xy(sexpr.child(node, "start"), h, node), _xy(sexpr.child(node, "end"), h, node)
            polys.append([(x0, y0), (x1, y0), (x1, y1), (x0, y1)])
        elif h == "gr_poly":
            pts = sexpr.child(node, "pts")
            if pts is None:
                raise sexpr.error(node, "gr_poly without pts")
            polys.append([_xy(p, h, pts) for p in sexpr.children(pts, "xy")])
        else:
            warnings.append(f"skipped {h} on Edge.Cuts (arcs are not supported)")
    return segs, polys


def _chain(segs: list, digits: int = 6) -> list[list[tuple[float, float]]]:
    """Join board-edge segments into closed rings, matching ends on a 10^-digits mm grid."""

    def key(p):  # rounding in place, not via p / tol, so huge finite coordinates cannot overflow
        return (round(p[0], digits), round(p[1], digits))

    remaining = [s for s in segs if key(s[0]) != key(s[1])]
    rings = []
    while remaining:
        a, b = remaining.pop(0)
        ring = [a, b]
        closed = False
        while True:
            if key(ring[-1]) == key(ring[0]):
                closed = True
                ring.pop()
                break
            for i, (p, q) in enumerate(remaining):
                if key(p) == key(ring[-1]):
                    ring.append(q)
                    remaining.pop(i)
                    break
                if key(q) == key(ring[-1]):
                    ring.append(p)
                    remaining.pop(i)
                    break
            else:
                break
        if not closed:
            raise DegenerateOutline("board edge segments do not form a closed ring")
        rings.append(ring)
    return rings


def _footprint_fields(fp) -> tuple[str, str]:
    ref, part, value = "", "", ""
    for node in fp[1:]:
        h = sexpr.head(node)
        if h == "fp_text" and len(node) >= 3 and str(node[1]) == "reference":
            ref = str(node[2])
        elif h == "property" and len(node) >= 3:
            key = str(node[1]).lower()
            if key == "reference":
                ref = str(node[2])
            elif key in ("mpn", "partnumber", "part number", "manufacturer_part_number"):
                part = str(node[2])
            elif key == "value":
                value = str(node[2])
        elif h == "fp_text" and len(node) >= 3 and str(node[1]) == "value" and not value:
            value = str(node[2])
    return ref, part or value


def _read_kicad(text: str, lib: LibraryFile, name: str, warnings: list[str]) -> BoardDesign:
    root = sexpr.parse(text)
    if sexpr.head(root) != "kicad_pcb":
        raise sexpr.error(root, "not a kicad_pcb file")
    thickness = 1.6
    general = sexpr.child(root, "general")
    if general is not None and sexpr.child(general, "thickness") is not None:
        thickness = _num(sexpr.child(general, "thickness"), 1, "general thickness")

    segs, polys = _edge_segments(root, warnings)
    rings = polys + _chain(segs)
    rings = [r for r in rings if len(r) >= 3]
    if not rings and (segs or polys):
        raise DegenerateOutline("board outline needs at least 3 vertices")
    outline = None
    if rings:
        rings.sort(key=lambda r: -abs(signed_area([Point2(*p) for p in r])))
        outline = _outline(rings[0], rings[1:])

    components = []
    known = {"version", "generator", "generator_version", "general", "paper", "layers", "setup", "net",
             "footprint", "module", "gr_line", "gr_rect", "gr_poly", "gr_arc", "gr_circle"}
    skipped: set[str] = set()
    for node in root[1:]:
        h = sexpr.head(node)
        if h not in known:
            skipped.add(str(h))
        if h not in ("footprint", "module"):
            continue
        if len(node) < 2:
            raise sexpr.error(node, f"{h} without a footprint name")
        fp_name = str(node[1])
        ref, part = _footprint_fields(node)
        if not ref:
            raise sexpr.error(node, f"footprint {fp_name!r} has no reference")
        layer = _layer(node)
        if layer not in (None, "F.Cu"):
            raise InvariantViolation(ref, f"bottom-side placement ({layer}) is not supported")
        spec = lib.resolve(fp_name)
        if spec is None:
            raise UnknownPackage(ref, fp_name)
        at = sexpr.child(node, "at")
        if at is None:
            raise sexpr.error(node, f"footprint {ref} has no (at ...)")
        x, y = _xy(at, "footprint at", node)
        rot = _num(at, 3, "footprint rotation") if len(at) > 3 else 0.0
        nets = {}
        for pad in sexpr.children(node, "pad"):
            if len(pad) < 2:
                continue
            pad_name = str(pad[1])
            net = sexpr.child(pad, "net")
            if net is not None and len(net) >= 3:
                if spec.pad(pad_name) is None:
                    warnings.append(f"{ref}: pad {pad_name} not in package {spec.name}; net ignored")
                    continue
                nets[pad_name] = str(net[2])
        components.append(ComponentInstance(ref, spec, Placement(Point2(x, y), rot % 360.0), part, nets))
    for h in sorted(skipped):
        warnings.append(f"skipped section {h!r}")
    return build_board(name, outline, thickness, components)
