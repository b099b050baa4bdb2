"""Bolt-span calibration and bolt-hole planning.

Two-terminal parts have no fastener of their own: they stay pressed only while
the housing around them is held down by bolts no further apart than the
calibrated maximum span for the housing thickness. The planner places shared
bolt holes in flanking pairs ("stations") on each component's length axis and
chains stations along rows of parallel parts so that each pair of consecutive
stations brackets the parts between them.

Coverage certificate: a part is covered by a set of 2 to 4 plan holes when its
center lies within ``COVERAGE_RADIUS`` of their convex hull, every hole of the
set lies within ``span + COVERAGE_RADIUS`` of the center, and the longest hull
edge does not exceed the span. Two holes reduce this to the segment rule.
"""

from __future__ import annotations

import bisect
import enum
import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np
import shapely
from shapely.geometry import Point
from shapely.ops import unary_union

from .cavity import MIN_WALL, RESIN, cavity_for
from .errors import CalibrationError, Infeasible, OutOfCalibratedRange
from .geometry import Point2, ring_to_shapely, rotate
from .ingest.textfmt import decode, fmt, lines, read_header
from .model import BoardDesign, ComponentInstance, PackageClass

THICKNESS_RANGE = (1.0, 5.0)
ANCHOR = (3.0, 27.0)
COVERAGE_RADIUS = 1.5
DEFAULT_HOLE_DIAMETER = 1.0
STATION_SEARCH = 3.0  # how far past the minimum offset a flank hole may slide
STATION_STEP = 0.1
ROW_TOLERANCE = 0.25

_EPS = 1e-9


# --------------------------------------------------------------------------- calibration


@dataclass(frozen=True)
class SpanCalibration:
    points: tuple[tuple[float, float], ...]
    calibrated: bool = True

    def __post_init__(self) -> None:
        pts = self.points
        if not pts:
            raise CalibrationError("calibration table is empty")
        lo, hi = THICKNESS_RANGE
        for (t0, _), (t1, _) in zip(pts, pts[1:]):
            if not t1 > t0:
                raise CalibrationError("calibration thicknesses must be strictly increasing")
        for t, s in pts:
            if not (math.isfinite(t) and math.isfinite(s)):
                raise CalibrationError("calibration values must be finite")
            if not lo <= t <= hi:
                raise CalibrationError(f"calibrated thickness {t} outside [{lo}, {hi}] mm")
            if s <= 0:
                raise CalibrationError(f"span at {t} mm must be positive")
        for (_, s0), (_, s1) in zip(pts, pts[1:]):
            if s1 < s0:
                raise CalibrationError("maximum span must not decrease with thickness")
        at, aspan = ANCHOR
        if pts[0][0] <= at <= pts[-1][0] and abs(_interp(pts, at) - aspan) > 1e-6:
            raise CalibrationError(f"table disagrees with the measured anchor {aspan} mm at {at} mm")

    @property
    def status(self) -> str:
        return "CALIBRATED" if self.calibrated else "UNCALIBRATED"


def _interp(pts, t: float) -> float:
    """Piecewise-linear lookup, clamped at both ends."""
    i = bisect.bisect_right(pts, (t, math.inf))
    if i == 0:
        return pts[0][1]
    if i == len(pts):
        return pts[-1][1]
    (t0, s0), (t1, s1) = pts[i - 1], pts[i]
    return s0 + (s1 - s0) * (t - t0) / (t1 - t0)


def default_calibration() -> SpanCalibration:
    """Linear model D(t) = 9 t through the single measured anchor, flagged uncalibrated."""
    pts = tuple((t, 9.0 * t) for t in np.arange(1.0, 5.0 + 1e-9, 0.5).round(1).tolist())
    return SpanCalibration(pts, calibrated=False)


def max_span(thickness: float, cal: SpanCalibration | None = None) -> float:
    """Largest allowed bolt span for a housing of ``thickness`` mm.

    Interpolates linearly between table points and holds the last span above
    the thickest calibrated point. Thicknesses outside the supported range, or
    below the thinnest table entry, raise :class:`OutOfCalibratedRange`.
    """
    cal = cal or default_calibration()
    lo, hi = THICKNESS_RANGE
    t_min = cal.points[0][0]
    if not (math.isfinite(thickness) and lo <= thickness <= hi) or thickness < t_min:
        raise OutOfCalibratedRange(thickness, max(lo, t_min), hi)
    return _interp(cal.points, thickness)


def load_calibration(data: bytes | str) -> SpanCalibration:
    """Parse a ``spancal v1`` file: one ``thickness span`` pair per line."""
    it = lines(decode(data))
    read_header(it, "spancal", "v1")
    pts = []
    for ln in it:
        ln.expect_len(2)
        pts.append((ln.number(0), ln.number(1)))
    pts.sort()
    return SpanCalibration(tuple(pts), calibrated=True)


def save_calibration(cal: SpanCalibration) -> bytes:
    body = "".join(f"{fmt(t)} {fmt(s)}\n" for t, s in cal.points)
    return ("spancal v1\n" + body).encode("utf-8")


# --------------------------------------------------------------------------- plan types


class HoleOrigin(enum.Enum):
    IC_PREALLOCATED = "ic"
    SHARED = "shared"
    FIXED = "fixed"  # supplied by the caller, kept as is


@dataclass(frozen=True)
class BoltHole:
    position: Point2
    diameter: float
    origin: HoleOrigin
    ref: str = ""  # owning IC for preallocated holes


@dataclass(frozen=True)
class BoltPlan:
    holes: tuple[BoltHole, ...]
    coverage: dict[str, tuple[int, ...]]  # refDes -> indices into holes
    max_span_used: float
    span_limit: float
    thickness: float
    calibration_status: str = "UNCALIBRATED"
    stations: int = 0  # distinct flank stations still holding a shared hole

    def shared(self) -> list[BoltHole]:
        return [h for h in self.holes if h.origin is not HoleOrigin.IC_PREALLOCATED]

    def without(self, index: int) -> "BoltPlan":
        """Copy with one hole deleted; coverage indices are remapped, certificates using it dropped."""
        holes = self.holes[:index] + self.holes[index + 1:]
        cov = {}
        for ref, cert in self.coverage.items():
            if index in cert:
                continue
            cov[ref] = tuple(i - (i > index) for i in cert)
        return BoltPlan(holes, cov, self.max_span_used, self.span_limit, self.thickness,
                        self.calibration_status, self.stations)


def format_plan(plan: BoltPlan) -> str:
    out = ["boltplan v1",
           f"thickness {fmt(plan.thickness)}",
           f"span-limit {fmt(plan.span_limit)} {plan.calibration_status}",
           f"max-span-used {plan.max_span_used:.4f}",
           f"holes {len(plan.holes)} stations {plan.stations}"]
    for i, h in enumerate(plan.holes):
        tail = f" {h.ref}" if h.ref else ""
        out.append(f"hole {i} {h.position.x:.4f} {h.position.y:.4f} {fmt(h.diameter)} {h.origin.value}{tail}")
    for ref in sorted(plan.coverage):
        out.append(f"cover {ref} " + " ".join(str(i) for i in plan.coverage[ref]))
    return "\n".join(out) + "\n"


# --------------------------------------------------------------------------- certificates


def _seg_dist(c: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    ab = b - a
    denom = np.einsum("ij,ij->i", ab, ab)
    t = np.where(denom > 0, np.einsum("ij,ij->i", c - a, ab) / np.where(denom > 0, denom, 1.0), 0.0)
    t = np.clip(t, 0.0, 1.0)
    proj = a + ab * t[:, None]
    return np.hypot(*(c - proj).T)


def _cross(o: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return (a[:, 0] - o[:, 0]) * (b[:, 1] - o[:, 1]) - (a[:, 1] - o[:, 1]) * (b[:, 0] - o[:, 0])


def _tri_dist(c: np.ndarray, a: np.ndarray, b: np.ndarray, d: np.ndarray) -> np.ndarray:
    d1, d2, d3 = _cross(a, b, c), _cross(b, d, c), _cross(d, a, c)
    area = _cross(a, b, d)
    inside = (np.abs(area) > 1e-12) & (
        ((d1 >= 0) & (d2 >= 0) & (d3 >= 0)) | ((d1 <= 0) & (d2 <= 0) & (d3 <= 0)))
    edge = np.minimum(np.minimum(_seg_dist(c, a, b), _seg_dist(c, b, d)), _seg_dist(c, d, a))
    return np.where(inside, 0.0, edge)


def _hull_span(P: np.ndarray) -> np.ndarray:
    """Longest convex-hull edge for each row of k points (k = 2, 3, 4), shape (m, k, 2)."""
    m, k, _ = P.shape
    best = np.zeros(m)
    for i, j in combinations(range(k), 2):
        a, b = P[:, i], P[:, j]
        length = np.hypot(*(b - a).T)
        others = [o for o in range(k) if o not in (i, j)]
        on_hull = np.ones(m, dtype=bool)
        if others:
            sides = np.stack([_cross(a, b, P[:, o]) for o in others])
            scale = np.maximum(length, 1e-12)
            s = sides / scale
            on_hull = np.all(s >= -1e-9, axis=0) | np.all(s <= 1e-9, axis=0)
        best = np.where(on_hull, np.maximum(best, length), best)
    return best


def find_certificate(center: Point2, pts: np.ndarray, span: float,
                     radius: float = COVERAGE_RADIUS) -> tuple[tuple[int, ...], float] | None:
    """Smallest hole set certifying ``center``; ties go to the lowest index tuple."""
    if len(pts) < 2:
        return None
    c0 = np.asarray(center, dtype=float)
    near = np.flatnonzero(np.hypot(*(pts - c0).T) <= span + radius + _EPS)
    for k in (2, 3, 4):
        if len(near) < k:
            break
        combos = np.array(list(combinations(near.tolist(), k)), dtype=np.intp)
        P = pts[combos]
        c = np.broadcast_to(c0, (len(combos), 2))
        if k == 2:
            dist = _seg_dist(c, P[:, 0], P[:, 1])
        else:
            dist = np.full(len(combos), np.inf)
            for tri in combinations(range(k), 3):
                dist = np.minimum(dist, _tri_dist(c, *(P[:, t] for t in tri)))
        spans = _hull_span(P)
        ok = np.flatnonzero((dist <= radius + _EPS) & (spans <= span + _EPS))
        if len(ok):
            i = ok[0]
            return tuple(int(v) for v in combos[i]), float(spans[i])
    return None


# --------------------------------------------------------------------------- planning


@dataclass
class _Context:
    board: BoardDesign
    diameter: float
    span: float
    outline: shapely.Geometry
    edge: shapely.Geometry
    obstacles: shapely.Geometry  # everything a shared hole must keep clear of
    holes: list[BoltHole] = field(default_factory=list)
    station_of: list[int] = field(default_factory=list)  # -1 for non-station holes

    @property
    def clearance(self) -> float:
        return self.diameter / 2.0 + MIN_WALL

    def legal(self, p: Point2) -> bool:
        pt = Point(p)
        if not self.outline.contains(pt) or self.edge.distance(pt) < self.clearance - _EPS:
            return False
        if self.obstacles.distance(pt) < self.clearance - _EPS:
            return False
        spacing = self.diameter + MIN_WALL
        return all(math.dist(p, h.position) >= spacing - _EPS for h in self.holes)


def _rounded(p) -> Point2:
    return Point2(round(p[0], 6) + 0.0, round(p[1], 6) + 0.0)


def _obstacles(board: BoardDesign, diameter: float) -> shapely.Geometry:
    shapes = []
    for comp in board.components:
        cav = cavity_for(comp, RESIN, bolt_diameter=diameter, degrade=True)
        shapes.extend(ring_to_shapely(p.footprint) for p in cav.pockets)
        if cav.groove is not None:
            shapes.append(ring_to_shapely(cav.groove.outer))  # ring and the island inside it
        shapes.extend(ring_to_shapely(poly) for _, poly in comp.pad_polygons())
    shapes.extend(ring_to_shapely(p.corners()) for p in board.free_pads)
    return unary_union(shapes) if shapes else shapely.GeometryCollection()


def _axis(comp: ComponentInstance) -> Point2:
    return rotate(Point2(1.0, 0.0), comp.placement.rotation)


def _flank_offset(comp: ComponentInstance, diameter: float) -> float:
    """Smallest center offset along the length axis that clears the part's own pocket and pads."""
    e = _axis(comp)
    c = comp.center
    cav = cavity_for(comp, RESIN, bolt_diameter=diameter, degrade=True)
    pts = [q for p in cav.pockets for q in p.footprint] + comp.footprint_points()
    reach = max(abs((q.x - c.x) * e.x + (q.y - c.y) * e.y) for q in pts)
    return reach + MIN_WALL + diameter / 2.0


def _try_station(ctx: _Context, comp: ComponentInstance) -> list[Point2] | None:
    e = _axis(comp)
    c = comp.center
    d0 = _flank_offset(comp, ctx.diameter)
    steps = int(round(STATION_SEARCH / STATION_STEP))
    found = []
    for sign in (-1.0, 1.0):
        for k in range(steps + 1):
            d = d0 + k * STATION_STEP
            p = _rounded((c.x + sign * d * e.x, c.y + sign * d * e.y))
            if ctx.legal(p):
                found.append(p)
                break
        else:
            return None
    if math.dist(*found) < ctx.diameter + MIN_WALL - _EPS:
        return None
    return found


def _rows(parts: list[ComponentInstance]) -> list[list[tuple[float, ComponentInstance]]]:
    """Group parallel parts sharing a length-axis line; each row is sorted along the line normal."""
    keyed = []
    for comp in parts:
        rot = comp.placement.rotation % 180.0
        e = _axis(comp)
        lateral = comp.center.x * e.x + comp.center.y * e.y
        along = -comp.center.x * e.y + comp.center.y * e.x
        keyed.append((round(rot, 6), lateral, along, comp))
    keyed.sort(key=lambda k: (k[0], k[1], k[2], k[3].ref))
    rows: list[list] = []
    for rot, lateral, along, comp in keyed:
        if rows and rows[-1][0][0] == rot and abs(lateral - rows[-1][-1][1]) <= ROW_TOLERANCE:
            rows[-1].append((rot, lateral, along, comp))
        else:
            rows.append([(rot, lateral, along, comp)])
    return [sorted(((a, c) for _, _, a, c in row), key=lambda t: (t[0], t[1].ref)) for row in rows]


def _hole_array(holes: list[BoltHole]) -> np.ndarray:
    return np.array([h.position for h in holes], dtype=float).reshape(-1, 2)


def plan_bolts(board: BoardDesign, lib=None, thickness: float = 3.0, cal: SpanCalibration | None = None,
               bolt_diameter: float = DEFAULT_HOLE_DIAMETER, fixed_holes=()) -> BoltPlan:
    """Place bolt holes so every two-terminal part is certified within the span limit.

    IC packages contribute their library holes verbatim. ``fixed_holes`` are
    kept untouched and counted toward coverage, which makes re-planning a board
    from its own output add nothing.

    Raises:
        OutOfCalibratedRange: thickness outside the calibration.
        Infeasible: some two-terminal part cannot be covered by any legal hole set.
    """
    cal = cal or default_calibration()
    span = max_span(thickness, cal)
    outline = board.outline.to_shapely()
    ctx = _Context(board, bolt_diameter, span, outline, outline.boundary, _obstacles(board, bolt_diameter))

    for comp in sorted(board.components, key=lambda c: c.ref):
        for p in comp.bolt_positions():
            ctx.holes.append(BoltHole(_rounded(p), bolt_diameter, HoleOrigin.IC_PREALLOCATED, comp.ref))
            ctx.station_of.append(-1)
    for p in fixed_holes:
        ctx.holes.append(BoltHole(_rounded(p), bolt_diameter, HoleOrigin.FIXED))
        ctx.station_of.append(-1)

    parts = [c for c in board.components if c.package.cls is PackageClass.TWO_TERMINAL]

    def covered(comp: ComponentInstance) -> bool:
        return find_certificate(comp.center, _hole_array(ctx.holes), span) is not None

    n_stations = 0

    def open_station(comp: ComponentInstance) -> bool:
        nonlocal n_stations
        flank = _try_station(ctx, comp)
        if flank is None:
            return False
        for p in flank:
            ctx.holes.append(BoltHole(p, bolt_diameter, HoleOrigin.SHARED))
            ctx.station_of.append(n_stations)
        n_stations += 1
        return True

    r = COVERAGE_RADIUS
    for row in _rows(parts):
        todo = [(a, c) for a, c in row if not covered(c)]
        done: set[str] = set()
        prev: float | None = None
        for a, comp in todo:
            if comp.ref in done:
                continue
            choice = None
            if prev is not None:
                bridge = [(b, c) for b, c in row if a - _EPS <= b <= prev + span + _EPS]
                for b, c in reversed(bridge):
                    if open_station(c):
                        choice = b
                        break
            if choice is None:
                local = [(b, c) for b, c in row if a - r - _EPS <= b <= a + r + _EPS]
                for b, c in reversed(local):
                    if open_station(c):
                        choice = b
                        break
            if choice is None:
                continue  # left for the fallback pass
            lo = prev - r if prev is not None and choice - prev <= span + _EPS else choice - r
            for b, c in row:
                if lo - _EPS <= b <= choice + r + _EPS:
                    done.add(c.ref)
            prev = choice

    # fallback: anything the row sweep could not certify gets its own station
    for comp in sorted(parts, key=lambda c: c.ref):
        if not covered(comp):
            if not open_station(comp) or not covered(comp):
                raise Infeasible(comp.ref, "no legal bolt position certifies it")

    # local search: drop shared holes (lowest x, then y first) while every part stays covered
    order = sorted((i for i, h in enumerate(ctx.holes) if h.origin is HoleOrigin.SHARED),
                   key=lambda i: (ctx.holes[i].position, i))
    alive = [True] * len(ctx.holes)
    for i in order:
        alive[i] = False
        keep = [h for h, ok in zip(ctx.holes, alive) if ok]
        pts = _hole_array(keep)
        if not all(find_certificate(c.center, pts, span) is not None for c in parts):
            alive[i] = True

    holes = [h for h, ok in zip(ctx.holes, alive) if ok]
    stations = {s for s, ok in zip(ctx.station_of, alive) if ok and s >= 0}
    order = sorted(range(len(holes)), key=lambda i: (holes[i].origin is not HoleOrigin.IC_PREALLOCATED,
                                                     holes[i].position, holes[i].ref))
    holes = [holes[i] for i in order]
    pts = _hole_array(holes)
    coverage: dict[str, tuple[int, ...]] = {}
    used = 0.0
    for comp in sorted(parts, key=lambda c: c.ref):
        cert = find_certificate(comp.center, pts, span)
        assert cert is not None
        coverage[comp.ref] = cert[0]
        used = max(used, cert[1])
    return BoltPlan(tuple(holes), coverage, used, span, thickness, cal.status, len(stations))


# --------------------------------------------------------------------------- verification


@dataclass(frozen=True)
class PlanViolation:
    kind: str  # coverage | spacing | containment | clearance | preallocated
    subject: str
    message: str


def certificate_span(holes, radius: float = COVERAGE_RADIUS) -> float:
    """Longest convex-hull edge of a hole set, computed through shapely."""
    hull = shapely.convex_hull(shapely.multipoints([tuple(h) for h in holes]))
    if isinstance(hull, shapely.Polygon):
        xy = np.asarray(hull.exterior.coords)
        return float(np.max(np.hypot(*np.diff(xy, axis=0).T)))
    if isinstance(hull, shapely.LineString):
        return float(hull.length)
    return 0.0


def certified(center: Point2, holes, span: float, radius: float = COVERAGE_RADIUS) -> bool:
    """Brute-force certificate search used by the verifier (independent of the planner's)."""
    c = Point(center)
    near = [h for h in holes if math.dist(h, center) <= span + radius + _EPS]
    for k in (2, 3, 4):
        subsets = list(combinations(near, k))
        if not subsets:
            break
        hulls = shapely.convex_hull(shapely.multipoints([list(s) for s in subsets]))
        with np.errstate(divide="ignore", invalid="ignore"):  # coincident holes give degenerate hulls
            dist = shapely.distance(hulls, c)
        # GEOS divides by the squared edge length, which underflows for holes
        # a denormal distance apart; such a hull is a point for our purposes.
        for idx in np.flatnonzero(~np.isfinite(dist)):
            dist[idx] = min(math.dist(h, center) for h in subsets[idx])
        for idx in np.flatnonzero(dist <= radius + _EPS):
            if certificate_span(subsets[idx]) <= span + _EPS:
                return True
    return False


def verify_plan(board: BoardDesign, plan: BoltPlan, thickness: float | None = None,
                cal: SpanCalibration | None = None) -> list[PlanViolation]:
    """Re-check coverage, spacing, containment and clearance of a plan from scratch."""
    span = max_span(thickness if thickness is not None else plan.thickness, cal or default_calibration())
    out: list[PlanViolation] = []
    pts = [h.position for h in plan.holes]
    for comp in sorted(board.components, key=lambda c: c.ref):
        if comp.package.cls is PackageClass.TWO_TERMINAL and not certified(comp.center, pts, span):
            out.append(PlanViolation("coverage", comp.ref, f"{comp.ref} is not bracketed within {span:g} mm"))
        for p in comp.bolt_positions():
            if not any(math.dist(p, q) <= 1e-6 for q in pts):
                out.append(PlanViolation("preallocated", comp.ref,
                                         f"library hole at ({p.x:.3f}, {p.y:.3f}) missing"))
    for (i, a), (j, b) in combinations(enumerate(plan.holes), 2):
        need = max(a.diameter, b.diameter) + MIN_WALL
        gap = math.dist(a.position, b.position)
        if gap < need - _EPS:
            out.append(PlanViolation("spacing", f"hole{i}/hole{j}", f"centers {gap:.3f} mm apart, need {need:g}"))
    outline = board.outline.to_shapely()
    keepout = _keepout(board)
    for i, h in enumerate(plan.holes):
        disc = Point(h.position).buffer(h.diameter / 2.0, 64)
        if not outline.contains(disc):
            out.append(PlanViolation("containment", f"hole{i}", "hole leaves the board outline"))
        if keepout.intersects(Point(h.position)):
            out.append(PlanViolation("clearance", f"hole{i}", "hole center inside a cavity or pad"))
    return out


def _keepout(board: BoardDesign) -> shapely.Geometry:
    shapes = []
    for comp in board.components:
        cav = cavity_for(comp, RESIN, degrade=True)
        shapes.extend(shapely.Polygon(p.footprint) for p in cav.pockets)
        shapes.extend(shapely.Polygon(poly) for _, poly in comp.pad_polygons())
    shapes.extend(shapely.Polygon(p.corners()) for p in board.free_pads)
    return unary_union(shapes) if shapes else shapely.GeometryCollection()
