"""Housing solid construction and STL output.

The housing is a 2.5-D solid. The plan view is cut into faces by every
feature outline (board edge, pockets, press bars, tabs, grooves, bolt holes);
over each face the material is a single vertical interval whose ends are
affine in (x, y), so pockets, the 30-degree tab undersides and groove webs are
all exact. The mesh is the boundary of that stack: triangulated top and bottom
caps per face plus vertical walls wherever the intervals on the two sides of
an edge differ.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field

import numpy as np
import shapely
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components
from shapely.ops import polygonize, unary_union

from .bolts import BoltPlan
from .cavity import RESIN, CavitySolid, MaterialProfile, cavity_for
from .errors import BooleanFailure, CavityOverlap
from .geometry import circle_points
from .model import BoardDesign

WELD_TOLERANCE = 1e-6
_CANCEL = 1e-9

Affine = tuple[float, float, float]


@dataclass(frozen=True)
class HousingConfig:
    thickness: float = 3.0
    bolt_diameter: float = 1.0
    circle_segments: int = 32
    profile: MaterialProfile = RESIN

    def __post_init__(self) -> None:
        if not 1.0 <= self.thickness <= 5.0:
            raise ValueError(f"housing thickness {self.thickness} mm outside [1, 5]")
        if self.bolt_diameter < 1.0:
            raise ValueError("bolt diameter must be at least 1.0 mm")
        if self.circle_segments < 8:
            raise ValueError("circle tessellation needs at least 8 segments")


@dataclass(frozen=True, eq=False)
class TriMesh:
    vertices: np.ndarray  # (n, 3) float64
    triangles: np.ndarray  # (m, 3) int64, counter-clockwise seen from outside

    @classmethod
    def empty(cls) -> "TriMesh":
        return cls(np.zeros((0, 3)), np.zeros((0, 3), dtype=np.int64))

    def __len__(self) -> int:
        return len(self.triangles)

    def without_triangle(self, i: int) -> "TriMesh":
        return TriMesh(self.vertices, np.delete(self.triangles, i, axis=0))

    def translated(self, dx: float, dy: float = 0.0, dz: float = 0.0) -> "TriMesh":
        return TriMesh(self.vertices + np.array([dx, dy, dz]), self.triangles.copy())

    def merged(self, other: "TriMesh") -> "TriMesh":
        n = len(self.vertices)
        return TriMesh(np.vstack([self.vertices, other.vertices]),
                       np.vstack([self.triangles, other.triangles + n]))


# --------------------------------------------------------------------------- diagnostics


@dataclass(frozen=True)
class MeshReport:
    triangles: int
    boundary_edges: int  # undirected edges used by exactly one triangle
    nonmanifold_edges: int  # used by three or more
    misoriented_edges: int  # used twice in the same direction
    degenerate_triangles: int
    components: int
    volume: float
    bbox: tuple[tuple[float, float, float], tuple[float, float, float]] | None

    @property
    def watertight(self) -> bool:
        return (self.boundary_edges == 0 and self.nonmanifold_edges == 0
                and self.misoriented_edges == 0 and self.triangles > 0)

    @property
    def sound(self) -> bool:
        return self.watertight and self.degenerate_triangles == 0 and self.components == 1 and self.volume > 0

    def summary(self) -> str:
        state = "watertight" if self.watertight else "NOT watertight"
        return (f"{state}; {self.components} component(s); volume {self.volume:.4f} mm^3; "
                f"{self.triangles} triangles; boundary edges {self.boundary_edges}; "
                f"non-manifold {self.nonmanifold_edges}; misoriented {self.misoriented_edges}; "
                f"degenerate {self.degenerate_triangles}")


def mesh_diagnostics(mesh: TriMesh) -> MeshReport:
    V, F = mesh.vertices, mesh.triangles
    if len(F) == 0:
        return MeshReport(0, 0, 0, 0, 0, 0, 0.0, None)
    directed = np.concatenate([F[:, [0, 1]], F[:, [1, 2]], F[:, [2, 0]]])
    und = np.sort(directed, axis=1)
    keys, inverse, counts = np.unique(und, axis=0, return_inverse=True, return_counts=True)
    inverse = inverse.ravel()
    boundary = int(np.sum(counts == 1))
    nonmanifold = int(np.sum(counts > 2))
    # an edge used twice is consistently oriented when its two uses run opposite ways
    forward = (directed[:, 0] < directed[:, 1]).astype(np.int64)
    fwd_per_edge = np.bincount(inverse, weights=forward, minlength=len(keys))
    misoriented = int(np.sum((counts == 2) & (fwd_per_edge != 1)))

    a, b, c = V[F[:, 0]], V[F[:, 1]], V[F[:, 2]]
    cross = np.cross(b - a, c - a)
    degenerate = int(np.sum(np.linalg.norm(cross, axis=1) <= 1e-12))
    volume = float(np.einsum("ij,ij->i", a, np.cross(b, c)).sum() / 6.0)

    used = np.unique(F)
    n = len(V)
    rows = np.concatenate([F[:, 0], F[:, 1], F[:, 2]])
    cols = np.concatenate([F[:, 1], F[:, 2], F[:, 0]])
    graph = coo_matrix((np.ones(len(rows)), (rows, cols)), shape=(n, n))
    _, labels = connected_components(graph, directed=False)
    components = len(np.unique(labels[used]))
    lo, hi = V[used].min(axis=0), V[used].max(axis=0)
    return MeshReport(len(F), boundary, nonmanifold, misoriented, degenerate, components, volume,
                      (tuple(lo.tolist()), tuple(hi.tolist())))


# --------------------------------------------------------------------------- STL


def emit_stl(mesh: TriMesh, ascii: bool = False, name: str = "housing") -> bytes:
    """Serialize to STL. Normals are recomputed from the winding; output is deterministic."""
    V = mesh.vertices.astype(np.float64)
    F = mesh.triangles
    tri = V[F] if len(F) else np.zeros((0, 3, 3))
    n = np.cross(tri[:, 1] - tri[:, 0], tri[:, 2] - tri[:, 0]) if len(F) else np.zeros((0, 3))
    norm = np.linalg.norm(n, axis=1, keepdims=True)
    n = np.divide(n, norm, out=np.zeros_like(n), where=norm > 0)
    if ascii:
        out = [f"solid {name}"]
        for nv, t in zip(n, tri):
            out.append(f"  facet normal {nv[0]:.6e} {nv[1]:.6e} {nv[2]:.6e}")
            out.append("    outer loop")
            out.extend(f"      vertex {p[0]:.6e} {p[1]:.6e} {p[2]:.6e}" for p in t)
            out.append("    endloop")
            out.append("  endfacet")
        out.append(f"endsolid {name}")
        return ("\n".join(out) + "\n").encode("ascii")
    header = f"binary STL {name}".encode("ascii")[:80].ljust(80, b"\0")
    rec = np.zeros(len(F), dtype=[("n", "<f4", 3), ("v", "<f4", (3, 3)), ("attr", "<u2")])
    rec["n"] = n
    rec["v"] = tri
    return header + struct.pack("<I", len(F)) + rec.tobytes()


def read_stl(data: bytes) -> TriMesh:
    """Read binary STL back into a welded mesh (used for round-trip checks)."""
    (count,) = struct.unpack_from("<I", data, 80)
    rec = np.frombuffer(data, dtype=[("n", "<f4", 3), ("v", "<f4", (3, 3)), ("attr", "<u2")],
                        count=count, offset=84)
    pts = rec["v"].reshape(-1, 3).astype(np.float64)
    uniq, inv = np.unique(pts, axis=0, return_inverse=True)
    return TriMesh(uniq, inv.reshape(-1, 3).astype(np.int64))


# --------------------------------------------------------------------------- features


@dataclass
class _Features:
    thickness: float
    outline: shapely.Geometry
    holes: list[tuple[str, shapely.Polygon]] = field(default_factory=list)
    grooves: list[tuple[str, shapely.Polygon, float]] = field(default_factory=list)  # ring area, web
    pockets: list[tuple[str, shapely.Polygon, float]] = field(default_factory=list)
    inserts: list[tuple[str, shapely.Polygon, Affine]] = field(default_factory=list)

    def rings(self) -> list[shapely.Geometry]:
        geoms = [self.outline] + [g for _, g in self.holes] + [g for _, g, _ in self.grooves]
        geoms += [g for _, g, _ in self.pockets] + [g for _, g, _ in self.inserts]
        return [g.boundary for g in geoms]


def _poly(points) -> shapely.Polygon:
    return shapely.Polygon([tuple(p) for p in points])


def _check_overlaps(cavities: list[CavitySolid]) -> None:
    """Two parts may not claim the same plan area (pockets, or a groove cutting another part)."""
    owned = []
    for cav in cavities:
        pockets = unary_union([_poly(p.footprint) for p in cav.pockets])
        ring = None
        if cav.groove is not None:
            ring = _poly(cav.groove.outer).difference(_poly(cav.groove.inner))
        owned.append((cav.ref, pockets, ring))
    tree = shapely.STRtree([p for _, p, _ in owned])
    for i, (ref, pockets, ring) in enumerate(owned):
        for j in sorted(tree.query(pockets)):
            if j <= i:
                continue
            if pockets.intersection(owned[j][1]).area > 1e-9:
                raise CavityOverlap(ref, owned[j][0])
        if ring is None:
            continue
        for j in sorted(tree.query(ring)):
            if j != i and ring.intersection(owned[j][1]).area > 1e-9:
                raise CavityOverlap(ref, owned[j][0])


def collect_features(board: BoardDesign, plan: BoltPlan | None, cfg: HousingConfig,
                     cavities: list[CavitySolid]) -> _Features:
    feats = _Features(cfg.thickness, board.outline.to_shapely())
    if plan is not None:
        for i, h in enumerate(plan.holes):
            ring = circle_points(h.position.x, h.position.y, h.diameter / 2.0, cfg.circle_segments)
            feats.holes.append((f"hole{i}", _poly(ring)))
    for cav in cavities:
        for k, p in enumerate(cav.pockets):
            feats.pockets.append((f"{cav.ref}/pocket{k}", _poly(p.footprint), p.depth))
        for k, ins in enumerate(cav.inserts):
            feats.inserts.append((f"{cav.ref}/{ins.kind}{k}", _poly(ins.footprint), ins.underside))
        if cav.groove is not None:
            ring = _poly(cav.groove.outer).difference(_poly(cav.groove.inner))
            feats.grooves.append((f"{cav.ref}/groove", ring, cav.groove.web))
    return feats


def solid_interval(feats: _Features, x: np.ndarray, y: np.ndarray):
    """Per plan point: (lo, hi) affine interval of housing material, or None where empty."""
    n = len(x)
    T = feats.thickness
    flat = lambda z: (z, 0.0, 0.0)  # noqa: E731
    result: list = [None] * n
    inside = shapely.contains_xy(feats.outline, x, y)
    state = np.where(inside, 0, -1)  # -1 empty, 0 slab, 1 groove, 2 pocket
    for _, g in feats.holes:
        state[shapely.contains_xy(g, x, y)] = -1
    groove_web = np.zeros(n)
    for _, g, web in feats.grooves:
        m = (state >= 0) & shapely.contains_xy(g, x, y)
        state[m] = 1
        groove_web[m] = web
    depth = np.zeros(n)
    for _, g, d in feats.pockets:
        m = ((state == 0) | (state == 2)) & shapely.contains_xy(g, x, y)
        state[m] = 2
        depth[m] = np.maximum(depth[m], d)
    underside: list = [None] * n
    for _, g, aff in feats.inserts:
        for i in np.flatnonzero((state == 2) & shapely.contains_xy(g, x, y)):
            underside[i] = aff
    for i in range(n):
        s = state[i]
        if s == 0:
            result[i] = (flat(0.0), flat(T))
        elif s == 1:
            result[i] = (flat(0.0), flat(float(groove_web[i])))
        elif s == 2:
            if underside[i] is not None:
                result[i] = (underside[i], flat(T))
            elif depth[i] < T - _CANCEL:
                result[i] = (flat(float(depth[i])), flat(T))
    return result


# --------------------------------------------------------------------------- assembly


def _z(aff: Affine, p) -> float:
    return aff[0] + aff[1] * p[0] + aff[2] * p[1]


class _Welder:
    """Vertex store keyed by exact plan position, merging heights closer than the tolerance."""

    def __init__(self) -> None:
        self.columns: dict[tuple[float, float], list[tuple[float, int]]] = {}
        self.coords: list[tuple[float, float, float]] = []

    def index(self, p, z: float) -> int:
        col = self.columns.setdefault(p, [])
        for zz, idx in col:
            if abs(zz - z) <= WELD_TOLERANCE:
                return idx
        idx = len(self.coords)
        self.coords.append((p[0], p[1], z))
        col.append((z, idx))
        return idx

    def levels(self, p, lo: float, hi: float) -> list[int]:
        col = sorted(self.columns.get(p, []))
        return [idx for z, idx in col if lo - WELD_TOLERANCE <= z <= hi + WELD_TOLERANCE]


def _ring_edges(ring) -> list[tuple[tuple[float, float], tuple[float, float]]]:
    pts = [tuple(c) for c in ring.coords]
    return [(pts[i], pts[i + 1]) for i in range(len(pts) - 1) if pts[i] != pts[i + 1]]


def _wall_segments(left, right, p, q):
    """Z-ranges along edge p->q where exactly one side holds material, with the solid side."""
    bps = []
    for side, iv in (("L", left), ("R", right)):
        if iv is None:
            continue
        for aff in iv:
            bps.append([_z(aff, p), _z(aff, q), side])
    # breakpoints shared by both sides bound no wall
    keep = [True] * len(bps)
    for i in range(len(bps)):
        for j in range(len(bps)):
            if (keep[i] and keep[j] and bps[i][2] == "L" and bps[j][2] == "R"
                    and abs(bps[i][0] - bps[j][0]) <= _CANCEL and abs(bps[i][1] - bps[j][1]) <= _CANCEL):
                keep[i] = keep[j] = False
                break
    rest = sorted((b for b, k in zip(bps, keep) if k), key=lambda b: (b[0] + b[1], b[0]))
    out = []
    for k in range(0, len(rest) - 1, 2):
        lo, hi = rest[k], rest[k + 1]
        if hi[0] - lo[0] < -WELD_TOLERANCE or hi[1] - lo[1] < -WELD_TOLERANCE:
            raise ValueError("crossing heights along an edge")
        if hi[0] - lo[0] <= WELD_TOLERANCE and hi[1] - lo[1] <= WELD_TOLERANCE:
            continue
        zmid = (lo[0] + lo[1] + hi[0] + hi[1]) / 4.0
        left_solid = left is not None and _z(left[0], _mid(p, q)) - _CANCEL <= zmid <= _z(left[1], _mid(p, q)) + _CANCEL
        out.append(((lo[0], lo[1]), (hi[0], hi[1]), left_solid))
    return out


def _mid(p, q):
    return ((p[0] + q[0]) / 2.0, (p[1] + q[1]) / 2.0)


def _zipper(P: list[int], Q: list[int], zs, forward: bool) -> list[tuple[int, int, int]]:
    tris = []
    i = j = 0
    while i < len(P) - 1 or j < len(Q) - 1:
        adv_q = i == len(P) - 1 or (j < len(Q) - 1 and zs[Q[j + 1]] <= zs[P[i + 1]])
        if adv_q:
            t = (P[i], Q[j], Q[j + 1])
            j += 1
        else:
            t = (P[i], Q[j], P[i + 1])
            i += 1
        tris.append(t if forward else (t[0], t[2], t[1]))
    return tris


def build_housing(board: BoardDesign, plan: BoltPlan | None, lib=None, cfg: HousingConfig | None = None,
                  *, degrade: bool = False) -> TriMesh:
    """Extrude the outline, cut every cavity feature and bolt hole out of it, then weld.

    Raises:
        CavityOverlap: two parts claim the same plan area.
        BooleanFailure: the assembled surface is not a single closed manifold.
    """
    cfg = cfg or HousingConfig()
    cavities = [cavity_for(c, cfg.profile, bolt_diameter=cfg.bolt_diameter, degrade=degrade)
                for c in sorted(board.components, key=lambda c: c.ref)]
    _check_overlaps(cavities)
    feats = collect_features(board, plan, cfg, cavities)
    mesh = _assemble(feats)
    report = mesh_diagnostics(mesh)
    if not report.sound:
        raise BooleanFailure(board.name, report.summary())
    return mesh


def _assemble(feats: _Features) -> TriMesh:
    noded = unary_union(feats.rings())
    faces = [shapely.geometry.polygon.orient(f, 1.0) for f in polygonize(noded)]
    if not faces:
        return TriMesh.empty()
    reps = [f.representative_point() for f in faces]
    xs = np.array([r.x for r in reps])
    ys = np.array([r.y for r in reps])
    intervals = solid_interval(feats, xs, ys)

    # left-face lookup for every directed boundary edge
    owner: dict[tuple, int] = {}
    for fi, f in enumerate(faces):
        for ring in (f.exterior, *f.interiors):
            for e in _ring_edges(ring):
                owner[e] = fi

    weld = _Welder()
    # pass 1: register every height that will appear at each vertex
    walls = []
    for (p, q), fi in owner.items():
        left = intervals[fi]
        rj = owner.get((q, p))
        if rj is not None and rj < fi:
            continue  # handled from the other side
        right = intervals[rj] if rj is not None else None
        try:
            segs = _wall_segments(left, right, p, q)
        except ValueError as exc:
            raise BooleanFailure(f"edge {p}->{q}", str(exc)) from None
        for (lp, lq), (hp, hq), left_solid in segs:
            for z in (lp, hp):
                weld.index(p, z)
            for z in (lq, hq):
                weld.index(q, z)
            walls.append((p, q, lp, lq, hp, hq, left_solid))
    tris: list[tuple[int, int, int]] = []
    for fi, f in enumerate(faces):
        iv = intervals[fi]
        if iv is None:
            continue
        lo, hi = iv
        cdt = shapely.constrained_delaunay_triangles(f)
        for t in shapely.get_parts(cdt):
            pts = [tuple(c) for c in t.exterior.coords[:3]]
            area = (pts[1][0] - pts[0][0]) * (pts[2][1] - pts[0][1]) - (pts[2][0] - pts[0][0]) * (pts[1][1] - pts[0][1])
            if abs(area) <= 1e-14:
                continue
            if area < 0:
                pts = [pts[0], pts[2], pts[1]]
            top = tuple(weld.index(p, _z(hi, p)) for p in pts)
            bot = tuple(weld.index(p, _z(lo, p)) for p in pts)
            tris.append(top)
            tris.append((bot[0], bot[2], bot[1]))
    zs = [c[2] for c in weld.coords]
    for p, q, lp, lq, hp, hq, left_solid in walls:
        P = weld.levels(p, lp, hp)
        Q = weld.levels(q, lq, hq)
        tris.extend(_zipper(P, Q, zs, left_solid))
    V = np.array(weld.coords, dtype=np.float64).reshape(-1, 3)
    F = np.array(tris, dtype=np.int64).reshape(-1, 3)
    return TriMesh(V, F)


def box_mesh(x0: float, y0: float, z0: float, x1: float, y1: float, z1: float) -> TriMesh:
    """Axis-aligned box, 12 outward-wound triangles."""
    V = np.array([[x0, y0, z0], [x1, y0, z0], [x1, y1, z0], [x0, y1, z0],
                  [x0, y0, z1], [x1, y0, z1], [x1, y1, z1], [x0, y1, z1]], dtype=np.float64)
    F = np.array([[0, 2, 1], [0, 3, 2], [4, 5, 6], [4, 6, 7], [0, 1, 5], [0, 5, 4],
                  [1, 2, 6], [1, 6, 5], [2, 3, 7], [2, 7, 6], [3, 0, 4], [3, 4, 7]], dtype=np.int64)
    return TriMesh(V, F)


__all__ = ["HousingConfig", "TriMesh", "MeshReport", "build_housing", "emit_stl", "read_stl",
           "mesh_diagnostics", "box_mesh"]
