"""Parametric cavity solids per package class.

Every cavity is described in 2.5-D: plan-view footprints in the board frame
with heights measured up from the board surface (z = 0). A ``Pocket`` is a
void from the board up to its depth; an ``Insert`` puts housing material back
inside a pocket from a (possibly sloped) underside up to the housing top;
a ``GrooveRing`` carves the housing from the top, leaving a thin web.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import MissingCavityModel, PackageTooSmall, UnsupportedOnProfile
from .geometry import Point2, rotate
from .model import ComponentInstance, PackageClass, PackageSpec, PadRect

TAB_ANGLE = 30.0  # degrees below horizontal
TAB_WIDTH_RATIO = 0.6
TAB_LENGTH_RATIO = 0.45
TAB_HEIGHT_OFFSET = 0.1  # mm above rated component thickness
TAB_INTERFERENCE = 0.1  # undeformed tab tip below rated component top

FIT_CLEARANCE = 0.1  # lateral, per side
PRESS_BAR_OVERHANG = 0.1  # per side across the pin row
GROOVE_WIDTH = 1.0
GROOVE_WEB = 0.3
MIN_WALL = 0.8

# smallest two-terminal footprint that still prints working tabs (0603, rated)
MIN_TAB_PACKAGE = (1.55, 0.80)

_EPS = 1e-9

Affine = tuple[float, float, float]  # z = a + b*x + c*y


@dataclass(frozen=True)
class MaterialProfile:
    name: str
    min_tab_feature: float | None  # None: tabs cannot be produced
    min_wall: float

    @property
    def supports_tabs(self) -> bool:
        return self.min_tab_feature is not None


RESIN = MaterialProfile("Resin", 0.3, 0.3)
FDM_PLA = MaterialProfile("FdmPla", None, 0.4)
CNC_MDF = MaterialProfile("CncMdf", None, 1.0)

PROFILES = {"resin": RESIN, "fdm-pla": FDM_PLA, "cnc-mdf": CNC_MDF}


@dataclass(frozen=True)
class TabSpec:
    thickness: float  # T
    alpha: float  # slope, degrees
    width: float  # W
    length: float  # L, measured along the slope
    height: float  # H, cavity ceiling above the board


def tab_dims(pkg: PackageSpec) -> TabSpec:
    """Flexible-tab dimensions from the rated body of a two-terminal package."""
    if pkg.cls is not PackageClass.TWO_TERMINAL:
        raise ValueError(f"{pkg.name} is not a two-terminal package")
    min_l, min_w = MIN_TAB_PACKAGE
    if pkg.length < min_l - _EPS or pkg.width < min_w - _EPS:
        raise PackageTooSmall(pkg.name)
    t, w, l = pkg.thickness, pkg.width, pkg.length
    return TabSpec(thickness=t, alpha=TAB_ANGLE, width=TAB_WIDTH_RATIO * w,
                   length=TAB_LENGTH_RATIO * l, height=t + TAB_HEIGHT_OFFSET)


def _clip(poly: list[tuple[float, float]], inside, intersect) -> list[tuple[float, float]]:
    out: list[tuple[float, float]] = []
    n = len(poly)
    for i in range(n):
        cur, nxt = poly[i], poly[(i + 1) % n]
        if inside(cur):
            out.append(cur)
            if not inside(nxt):
                out.append(intersect(cur, nxt))
        elif inside(nxt):
            out.append(intersect(cur, nxt))
    return out


@dataclass(frozen=True)
class TabSection:
    """Cross-section of one tab in (u, z): u runs inward from the end wall."""

    polygon: tuple[tuple[float, float], ...]
    root: float  # u where the underside meets the ceiling
    reach: float  # u of the tip
    apex: float  # tip height above the board
    slope: float  # dz/du of the underside (negative)


def tab_section(spec: TabSpec, rated_t: float) -> TabSection:
    """Tab plate clipped to the cavity: underside at ``alpha``, tip 0.1 mm into the rated body."""
    k = math.tan(math.radians(spec.alpha))
    reach = spec.length * math.cos(math.radians(spec.alpha))
    apex = rated_t - TAB_INTERFERENCE
    rise = spec.thickness / math.cos(math.radians(spec.alpha))
    # full plate: underside from wall to tip, upper face offset by the plate thickness
    plate = [(0.0, apex + reach * k), (reach, apex), (reach, apex + rise), (0.0, apex + reach * k + rise)]
    ceiling = spec.height

    def below(p):
        return p[1] <= ceiling + _EPS

    def cut(a, b):
        s = (ceiling - a[1]) / (b[1] - a[1])
        return (a[0] + s * (b[0] - a[0]), ceiling)

    clipped = _clip(plate, below, cut)
    root = max(0.0, reach - (ceiling - apex) / k)
    return TabSection(tuple(clipped), root, reach, apex, -k)


class CavityKind(enum.Enum):
    TWO_TERMINAL = "two-terminal"
    PRESS_BAR = "press-bar"
    NEGATIVE_POCKET = "negative-pocket"
    CUSTOM = "custom"


@dataclass(frozen=True)
class Pocket:
    footprint: tuple[Point2, ...]
    depth: float


@dataclass(frozen=True)
class Insert:
    """Material left standing inside a pocket: a press bar or a tab."""

    kind: str  # "press-bar" | "tab"
    footprint: tuple[Point2, ...]
    underside: Affine
    apex: float  # lowest point above the board


@dataclass(frozen=True)
class GrooveRing:
    outer: tuple[Point2, ...]
    inner: tuple[Point2, ...]
    width: float
    web: float


@dataclass(frozen=True)
class CavitySolid:
    ref: str
    kind: CavityKind
    pockets: tuple[Pocket, ...]
    inserts: tuple[Insert, ...] = ()
    groove: GrooveRing | None = None
    pin_rows: tuple[tuple[Point2, ...], ...] = ()  # board frame, press-bar kinds only
    tabs: tuple[TabSpec, ...] = ()
    raised_pad_required: bool = False
    degraded: bool = False  # tabs omitted because they cannot be built

    @property
    def max_depth(self) -> float:
        return max(p.depth for p in self.pockets)

    def outline_points(self) -> list[Point2]:
        pts = [q for p in self.pockets for q in p.footprint]
        if self.groove is not None:
            pts.extend(self.groove.outer)
        return pts


def _local_rect(comp: ComponentInstance, x0: float, y0: float, x1: float, y1: float) -> tuple[Point2, ...]:
    return tuple(comp.to_board([(x0, y0), (x1, y0), (x1, y1), (x0, y1)]))


def _bbox(rects) -> tuple[float, float, float, float]:
    xs0, ys0, xs1, ys1 = zip(*rects)
    return min(xs0), min(ys0), max(xs1), max(ys1)


def pin_rows(pkg: PackageSpec) -> list[tuple[str, tuple[float, float, float, float]]]:
    """Group extended-pin leads by body side; returns (side, local bbox) per row."""
    hl, hw = pkg.length / 2.0, pkg.width / 2.0
    rows: dict[str, list[PadRect]] = {}
    for p in pkg.pads:
        if p.y < -hw:
            side = "S"
        elif p.y > hw:
            side = "N"
        elif p.x > hl:
            side = "E"
        elif p.x < -hl:
            side = "W"
        else:
            raise ValueError(f"{pkg.name}: lead {p.name} lies under the body")
        rows.setdefault(side, []).append(p)
    out = []
    for side in ("S", "E", "N", "W"):
        if side in rows:
            out.append((side, _bbox([(p.x - p.w / 2, p.y - p.h / 2, p.x + p.w / 2, p.y + p.h / 2) for p in rows[side]])))
    return out


def _press_bar(pkg: PackageSpec, side: str, rect) -> tuple[float, float, float, float]:
    x0, y0, x1, y1 = rect
    hl, hw = pkg.length / 2.0, pkg.width / 2.0
    o = PRESS_BAR_OVERHANG
    # widen across the row, never over the plastic body
    if side == "S":
        return x0, y0 - o, x1, min(y1 + o, -hw)
    if side == "N":
        return x0, max(y0 - o, hw), x1, y1 + o
    if side == "E":
        return max(x0 - o, hl), y0, x1 + o, y1
    return x0 - o, y0, min(x1 + o, -hl), y1


def _groove(comp: ComponentInstance, pocket_local, bolt_diameter: float) -> GrooveRing:
    r = bolt_diameter / 2.0
    rects = [pocket_local] + [(b.x - r, b.y - r, b.x + r, b.y + r) for b in comp.package.bolt_offsets]
    x0, y0, x1, y1 = _bbox(rects)
    m = MIN_WALL
    inner = (x0 - m, y0 - m, x1 + m, y1 + m)
    g = GROOVE_WIDTH
    outer = (inner[0] - g, inner[1] - g, inner[2] + g, inner[3] + g)
    return GrooveRing(_local_rect(comp, *outer), _local_rect(comp, *inner), GROOVE_WIDTH, GROOVE_WEB)


def _tab_inserts(comp: ComponentInstance, spec: TabSpec, half_len: float) -> list[Insert]:
    sec = tab_section(spec, comp.package.thickness)
    ex = rotate(Point2(1.0, 0.0), comp.placement.rotation)
    cx, cy = comp.center
    k = -sec.slope
    hw = spec.width / 2.0
    out = []
    for sign in (1.0, -1.0):
        # local x of the wall is sign*half_len; u = half_len - sign*x_local
        # z(u) = apex + (reach - u) * k  =>  z = apex + (reach - half_len) * k + sign * k * x_local
        a = sec.apex + (sec.reach - half_len) * k
        b, c = sign * k * ex.x, sign * k * ex.y
        a -= b * cx + c * cy
        xa, xb = sign * (half_len - sec.reach), sign * (half_len - sec.root)
        fp = _local_rect(comp, min(xa, xb), -hw, max(xa, xb), hw)
        out.append(Insert("tab", fp, (a, b, c), sec.apex))
    return out


def cavity_for(comp: ComponentInstance, profile: MaterialProfile = RESIN, *,
               bolt_diameter: float = 1.0, degrade: bool = False) -> CavitySolid:
    """Cavity solid for one placed component, in board coordinates.

    With ``degrade=True`` two-terminal parts that cannot carry tabs (too small,
    or a profile without tab support) get a plain box pocket instead of an error;
    the result is flagged ``degraded`` so reports can say so.
    """
    pkg = comp.package
    l, w, t = pkg.length, pkg.width, pkg.thickness
    c = FIT_CLEARANCE

    if pkg.cls is PackageClass.TWO_TERMINAL:
        hl, hw = l / 2.0 + c, w / 2.0 + c
        try:
            spec = tab_dims(pkg)
            if not profile.supports_tabs:
                raise UnsupportedOnProfile(comp.ref, profile.name)
        except (PackageTooSmall, UnsupportedOnProfile):
            if not degrade:
                raise
            pocket = Pocket(_local_rect(comp, -hl, -hw, hl, hw), t + TAB_HEIGHT_OFFSET)
            return CavitySolid(comp.ref, CavityKind.TWO_TERMINAL, (pocket,), degraded=True)
        pocket = Pocket(_local_rect(comp, -hl, -hw, hl, hw), spec.height)
        return CavitySolid(comp.ref, CavityKind.TWO_TERMINAL, (pocket,),
                           inserts=tuple(_tab_inserts(comp, spec, hl)), tabs=(spec, spec))

    if pkg.cls is PackageClass.IC_EXTENDED_PIN:
        rows = pin_rows(pkg)
        bars = [_press_bar(pkg, side, rect) for side, rect in rows]
        bx0, by0, bx1, by1 = _bbox(bars + [(-l / 2, -w / 2, l / 2, w / 2)])
        local = (bx0 - c, by0 - c, bx1 + c, by1 + c)
        pocket = Pocket(_local_rect(comp, *local), t + c)
        inserts = tuple(Insert("press-bar", _local_rect(comp, *bar), (pkg.pin_height, 0.0, 0.0), pkg.pin_height)
                        for bar in bars)
        return CavitySolid(comp.ref, CavityKind.PRESS_BAR, (pocket,), inserts=inserts,
                           groove=_groove(comp, local, bolt_diameter),
                           pin_rows=tuple(_local_rect(comp, *rect) for _, rect in rows))

    if pkg.cls is PackageClass.IC_BOTTOM_PAD:
        local = (-l / 2 - c, -w / 2 - c, l / 2 + c, w / 2 + c)
        pocket = Pocket(_local_rect(comp, *local), t)
        return CavitySolid(comp.ref, CavityKind.NEGATIVE_POCKET, (pocket,),
                           groove=_groove(comp, local, bolt_diameter),
                           raised_pad_required=pkg.raised_pad_required)

    if not pkg.custom_solid:
        raise MissingCavityModel(comp.ref)
    pockets = tuple(Pocket(tuple(comp.to_board(p.points)), p.depth) for p in pkg.custom_solid)
    return CavitySolid(comp.ref, CavityKind.CUSTOM, pockets)
