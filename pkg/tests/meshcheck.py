"""Shared ray-parity sampling used by the mesh tests and the acceptance suite."""

from __future__ import annotations

import numpy as np

from housingforge.cavity import cavity_for

from oracles import expected_solid, ray_parity


def sample_points(board, cavities, plan, thickness, n, rng) -> np.ndarray:
    """Half uniform over the board volume, half aimed at cavities and bolt holes."""
    x0, y0, x1, y1 = board.outline.bbox()
    bulk = np.column_stack([rng.uniform(x0 - 1, x1 + 1, n // 2), rng.uniform(y0 - 1, y1 + 1, n // 2),
                            rng.uniform(-0.2, thickness + 0.2, n // 2)])
    targets = [np.asarray(p.footprint, dtype=float) for cav in cavities for p in cav.pockets]
    if plan is not None:
        targets += [np.array([[h.position.x - 0.6, h.position.y - 0.6], [h.position.x + 0.6, h.position.y + 0.6]])
                    for h in plan.holes]
    m = n - len(bulk)
    if not targets:
        return np.vstack([bulk, bulk[:m]])
    picks = rng.integers(0, len(targets), m)
    aimed = np.empty((m, 3))
    for k, t in enumerate(picks):
        lo, hi = targets[t].min(axis=0), targets[t].max(axis=0)
        aimed[k, :2] = rng.uniform(lo, hi)
        aimed[k, 2] = rng.uniform(0.0, thickness)
    return np.vstack([bulk, aimed])


def parity_mismatches(board, plan, mesh, cfg, n, seed=0) -> tuple[int, int, int, int]:
    """Return (mismatches, checked, solid points, void points)."""
    rng = np.random.default_rng(seed)
    cavities = [cavity_for(c, cfg.profile, bolt_diameter=cfg.bolt_diameter, degrade=True)
                for c in board.components]
    pts = sample_points(board, cavities, plan, cfg.thickness, n + n // 10, rng)
    want, ambiguous = expected_solid(board, plan, cavities, cfg.thickness, cfg.circle_segments, pts)
    # drop points in the hole tessellation band, then keep exactly n
    pts, want = pts[~ambiguous][:n], want[~ambiguous][:n]
    got = ray_parity(mesh.vertices, mesh.triangles, pts)
    bad = int(np.count_nonzero(want != got))
    return bad, len(pts), int(want.sum()), int((~want).sum())
