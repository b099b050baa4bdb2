"""Design-rule checks and the assembly report.

Limits come from what was validated on real housings: 0603 as the smallest
tabbed chip, 0.6 mm pin pitch, 0.0625 mm^2 contact pads, the thickness-dependent
bolt span, and a 0.6 mm ceiling over shallow cavities. Pitch and pad-area
limits are validated minima rather than measured failure points, so those two
rules only warn.
"""

from __future__ import annotations

import enum
import math
from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations

import shapely
from shapely.geometry import Point
from shapely.ops import unary_union

from .bolts import BoltPlan, HoleOrigin, SpanCalibration, certificate_span, default_calibration, max_span
from .cavity import MIN_TAB_PACKAGE, MIN_WALL, cavity_for
from .errors import UnknownNet
from .mesh import HousingConfig
from .model import BoardDesign, PackageClass

MIN_PITCH = 0.6
MIN_PAD_AREA = 0.0625
MIN_CEILING = 0.6
CONTACT_RESISTANCE_MEAN = 0.46  # ohm per pressed contact
CONTACT_RESISTANCE_SIGMA = 0.139
BOLT_TORQUE = 0.01  # N*m, hand-tightened

_EPS = 1e-9


class Severity(enum.Enum):
    ERROR = "Error"
    WARNING = "Warning"
    INFO = "Info"


@dataclass(frozen=True)
class RuleViolation:
    rule_id: str
    severity: Severity
    subject: str
    message: str
    measured: float
    limit: float

    def text(self) -> str:
        return (f"{self.rule_id} {self.severity.value} {self.subject}: {self.message} "
                f"(measured {_num(self.measured)}, limit {_num(self.limit)})")

    def tsv(self) -> str:
        return "\t".join([self.rule_id, self.severity.value, self.subject, _num(self.measured),
                          _num(self.limit), self.message])


def _num(v: float) -> str:
    return "inf" if math.isinf(v) else f"{v:.4g}"


def _pitch(pkg) -> float:
    pads = pkg.pads
    if len(pads) < 2:
        return math.inf
    return min(math.hypot(a.x - b.x, a.y - b.y) for a, b in combinations(pads, 2))


def run_drc(board: BoardDesign, plan: BoltPlan | None, cfg: HousingConfig | None = None,
            profile=None, cal: SpanCalibration | None = None) -> list[RuleViolation]:
    """Evaluate rules R1-R8; violations come back sorted by (rule, subject)."""
    cfg = cfg or HousingConfig()
    profile = profile or cfg.profile
    T = cfg.thickness
    out: list[RuleViolation] = []
    add = out.append
    min_l, min_w = MIN_TAB_PACKAGE

    for comp in board.components:
        pkg = comp.package
        if pkg.cls is PackageClass.TWO_TERMINAL:
            if pkg.length < min_l - _EPS or pkg.width < min_w - _EPS:
                add(RuleViolation("R1", Severity.ERROR, comp.ref,
                                  f"{pkg.name} is smaller than 0603; printed tabs cannot hold it",
                                  pkg.length, min_l))
            if not profile.supports_tabs:
                add(RuleViolation("R6", Severity.ERROR, comp.ref,
                                  f"{profile.name} cannot produce the tabs {pkg.name} needs", 0.0, 1.0))
        pitch = _pitch(pkg)
        if pitch < MIN_PITCH - _EPS:
            add(RuleViolation("R2", Severity.WARNING, comp.ref,
                              f"{pkg.name} pin pitch below the validated range", pitch, MIN_PITCH))
        if pkg.pads:
            area = min(p.area for p in pkg.pads)
            if area < MIN_PAD_AREA - 1e-12:
                add(RuleViolation("R3", Severity.WARNING, comp.ref,
                                  f"{pkg.name} contact pad smaller than validated", area, MIN_PAD_AREA))
        if pkg.cls is PackageClass.IC_BOTTOM_PAD and not pkg.raised_pad_required:
            add(RuleViolation("R5", Severity.ERROR, comp.ref,
                              f"{pkg.name} has bottom-only contacts but no raised-pad requirement", 0.0, 1.0))

    cavities = {c.ref: cavity_for(c, profile, bolt_diameter=cfg.bolt_diameter, degrade=True)
                for c in board.components}
    for ref, cav in sorted(cavities.items()):
        for k, p in enumerate(cav.pockets):
            if p.depth < T - _EPS and T - p.depth < MIN_CEILING - _EPS:
                subject = ref if len(cav.pockets) == 1 else f"{ref}/pocket{k}"
                add(RuleViolation("R8", Severity.ERROR, subject,
                                  f"only {T - p.depth:.3g} mm of housing above the cavity", T - p.depth, MIN_CEILING))

    if plan is not None:
        _span_rules(board, plan, T, cal, add)
        _clearance_rules(board, plan, cavities, add)
    return sorted(out, key=lambda v: (int(v.rule_id[1:]), v.subject, v.message))


def _span_rules(board, plan: BoltPlan, T: float, cal, add) -> None:
    limit = max_span(T, cal or default_calibration())
    pts = [h.position for h in plan.holes]
    for comp in sorted(board.components, key=lambda c: c.ref):
        if comp.package.cls is not PackageClass.TWO_TERMINAL:
            continue
        cert = plan.coverage.get(comp.ref)
        if not cert or any(i >= len(pts) for i in cert):
            add(RuleViolation("R4", Severity.ERROR, comp.ref, "no bolt pair brackets this part", math.inf, limit))
            continue
        span = certificate_span([pts[i] for i in cert])
        if span > limit + _EPS:
            add(RuleViolation("R4", Severity.ERROR, comp.ref,
                              f"bolt span {span:.2f} mm exceeds the limit for {T:g} mm housings", span, limit))


def _clearance_rules(board, plan: BoltPlan, cavities, add) -> None:
    shapes = []
    islands = {}
    for comp in board.components:
        cav = cavities[comp.ref]
        shapes.extend(shapely.Polygon(p.footprint) for p in cav.pockets)
        shapes.extend(shapely.Polygon(poly) for _, poly in comp.pad_polygons())
        if cav.groove is not None:
            inner = shapely.Polygon(cav.groove.inner)
            shapes.append(shapely.Polygon(cav.groove.outer).difference(inner))
            islands[comp.ref] = inner
    shapes.extend(shapely.Polygon(p.corners()) for p in board.free_pads)
    keepout = unary_union(shapes) if shapes else None
    for i, h in enumerate(plan.holes):
        pt = Point(h.position)
        r = h.diameter / 2.0
        near = [keepout] if keepout is not None else []
        near += [isl for ref, isl in sorted(islands.items())
                 if not (h.origin is HoleOrigin.IC_PREALLOCATED and ref == h.ref)]
        if not near:
            continue
        clearance = min(g.distance(pt) for g in near) - r
        if clearance < MIN_WALL - 1e-6:
            add(RuleViolation("R7", Severity.ERROR, f"hole{i}",
                              f"bolt hole at ({h.position.x:.2f}, {h.position.y:.2f}) too close to a cavity or pad",
                              clearance, MIN_WALL))


def has_errors(violations) -> bool:
    return any(v.severity is Severity.ERROR for v in violations)


def format_violations(violations, fmt: str = "text") -> str:
    if fmt == "tsv":
        lines = ["rule\tseverity\tsubject\tmeasured\tlimit\tmessage"] + [v.tsv() for v in violations]
    else:
        counts = Counter(v.severity for v in violations)
        lines = [v.text() for v in violations]
        lines.append(f"{counts[Severity.ERROR]} error(s), {counts[Severity.WARNING]} warning(s)")
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------- electrical estimate


def contact_count(board: BoardDesign, net: str) -> int:
    return sum(1 for c in board.components for n in c.nets.values() if n == net)


def estimate_contact_resistance(board: BoardDesign, net: str) -> tuple[float, float]:
    """Added series resistance of a net from pressed contacts: (mean, sigma) in ohms.

    Model estimate: every component pad on the net counts as one contact in series,
    with independent contact resistances, so means add and variances add.
    """
    if net not in board.nets():
        raise UnknownNet(net)
    k = contact_count(board, net)
    return CONTACT_RESISTANCE_MEAN * k, CONTACT_RESISTANCE_SIGMA * math.sqrt(k)


@dataclass(frozen=True)
class AssemblyReport:
    board: str
    bolt_count: int
    bolts_by_class: dict[str, int]
    net_resistance: dict[str, tuple[float, float]]
    calibration_status: str
    thickness: float
    span_limit: float
    torque_note: str = f"Tighten every bolt to about {BOLT_TORQUE} N*m; overtightening warps the housing."
    notes: tuple[str, ...] = field(default_factory=tuple)

    def text(self) -> str:
        out = [f"assembly report: {self.board}",
               f"housing thickness: {self.thickness:g} mm",
               f"span limit: {self.span_limit:g} mm ({self.calibration_status})",
               f"bolts: {self.bolt_count}"]
        out += [f"  {cls}: {n}" for cls, n in sorted(self.bolts_by_class.items())]
        out.append(f"torque: {self.torque_note}")
        out.append("estimated added resistance per net (model: 0.46 ohm mean, 0.139 ohm sigma per contact):")
        out += [f"  {net}: {m:.3f} ohm +- {s:.3f}" for net, (m, s) in sorted(self.net_resistance.items())]
        out += [f"note: {n}" for n in self.notes]
        return "\n".join(out) + "\n"


def assembly_report(board: BoardDesign, plan: BoltPlan, notes=()) -> AssemblyReport:
    by_class: Counter[str] = Counter()
    owners = {c.ref: c.package.cls.value for c in board.components}
    for h in plan.holes:
        if h.origin is HoleOrigin.IC_PREALLOCATED:
            by_class[owners.get(h.ref, "ic")] += 1
        else:
            by_class["two-terminal (shared)"] += 1
    nets = {net: estimate_contact_resistance(board, net) for net in sorted(board.nets())}
    return AssemblyReport(board.name, len(plan.holes), dict(by_class), nets, plan.calibration_status,
                          plan.thickness, plan.span_limit, notes=tuple(notes))
