"""Independent reference implementations the tests compare against."""

from __future__ import annotations

from itertools import combinations

import numpy as np


def winding_number(ring, p) -> int:
    """Classic winding number of a closed ring around p (Sunday's crossing rule)."""
    wn = 0
    px, py = p
    n = len(ring)
    for i in range(n):
        (x0, y0), (x1, y1) = ring[i], ring[(i + 1) % n]
        side = (x1 - x0) * (py - y0) - (px - x0) * (y1 - y0)
        if y0 <= py < y1 and side > 0:
            wn += 1
        elif y1 <= py < y0 and side < 0:
            wn -= 1
    return wn


def ray_crossings(ring, p) -> int:
    """Crossings of the +x ray from p with the ring edges."""
    px, py = p
    count = 0
    n = len(ring)
    for i in range(n):
        (x0, y0), (x1, y1) = ring[i], ring[(i + 1) % n]
        if (y0 > py) != (y1 > py):
            x = x0 + (py - y0) * (x1 - x0) / (y1 - y0)
            if x > px:
                count += 1
    return count


def cover_1d_optimum(positions, span: float, radius: float) -> int:
    """Fewest stations (chosen among part positions) covering every part.

    A part at u is covered by a station within ``radius`` of it, or by any two
    stations a < b with b - a <= span and a - radius <= u <= b + radius.
    Exhaustive over all subsets, smallest first.
    """
    pos = sorted(positions)
    n = len(pos)
    if n == 0:
        return 0

    def covers(chosen) -> bool:
        for u in pos:
            if any(abs(s - u) <= radius + 1e-9 for s in chosen):
                continue
            if any(b - a <= span + 1e-9 and a - radius - 1e-9 <= u <= b + radius + 1e-9
                   for a, b in combinations(chosen, 2)):
                continue
            return False
        return True

    for k in range(1, n + 1):
        for chosen in combinations(pos, k):
            if covers(chosen):
                return k
    raise AssertionError("unreachable: a station at every part always covers")


def ray_parity(vertices: np.ndarray, triangles: np.ndarray, pts, direction=(0.5773, 0.3012, 0.7589)) -> np.ndarray:
    """Even-odd ray parity of each point against a triangle soup (Moller-Trumbore)."""
    V, F = vertices, triangles
    a, b, c = V[F[:, 0]], V[F[:, 1]], V[F[:, 2]]
    d = np.asarray(direction, dtype=float)
    d = d / np.linalg.norm(d)
    e1, e2 = b - a, c - a
    h = np.cross(d, e2)
    det = np.einsum("ij,ij->i", e1, h)
    ok = np.abs(det) > 1e-14
    inv = np.where(ok, 1.0 / np.where(ok, det, 1.0), 0.0)
    out = np.zeros(len(pts), dtype=bool)
    for k, o in enumerate(np.asarray(pts, dtype=float)):
        s = o - a
        u = np.einsum("ij,ij->i", s, h) * inv
        qv = np.cross(s, e1)
        v = (qv @ d) * inv
        t = np.einsum("ij,ij->i", e2, qv) * inv
        hit = ok & (u >= 0) & (v >= 0) & (u + v <= 1) & (t > 0)
        out[k] = bool(np.count_nonzero(hit) % 2)
    return out


def expected_solid(board, plan, cavities, thickness, segments, pts) -> tuple[np.ndarray, np.ndarray]:
    """Reference material classification for 3-D points, built from the design data alone.

    Holes are ideal circles; points inside the sagitta band between a circle
    and its inscribed polygon are reported as ambiguous and must be skipped.
    Returns (solid, ambiguous) boolean arrays.
    """
    outer = [tuple(p) for p in board.outline.outer]
    cuts = [[tuple(p) for p in h] for h in board.outline.holes]
    solid = np.zeros(len(pts), dtype=bool)
    ambiguous = np.zeros(len(pts), dtype=bool)
    for k, (x, y, z) in enumerate(np.asarray(pts, dtype=float)):
        p = (x, y)
        if not (0.0 < z < thickness) or winding_number(outer, p) == 0 or any(winding_number(c, p) for c in cuts):
            continue
        void = False
        if plan is not None:
            for h in plan.holes:
                r = h.diameter / 2.0
                d = float(np.hypot(x - h.position.x, y - h.position.y))
                sag = r * (1.0 - np.cos(np.pi / segments))
                if d <= r - sag - 1e-6 or d <= r:
                    void = True
                if r - sag - 1e-6 < d < r + 1e-6:
                    ambiguous[k] = True
        if void:
            continue
        state, web, depth, under = "slab", 0.0, 0.0, None
        for cav in cavities:
            g = cav.groove
            if g is not None and winding_number(list(g.outer), p) and not winding_number(list(g.inner), p):
                state, web = "groove", g.web
        if state == "slab":
            for cav in cavities:
                for pocket in cav.pockets:
                    if winding_number(list(pocket.footprint), p):
                        state, depth = "pocket", max(depth, pocket.depth)
                for ins in cav.inserts:
                    if winding_number(list(ins.footprint), p):
                        under = ins.underside
            if state != "pocket":
                under = None
        if state == "slab":
            solid[k] = True
        elif state == "groove":
            solid[k] = z < web
        elif under is not None:
            a, b, c = under
            solid[k] = z > a + b * x + c * y
        else:
            solid[k] = z > depth
    return solid, ambiguous
