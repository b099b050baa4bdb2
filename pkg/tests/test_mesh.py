from __future__ import annotations

import math
import struct

import numpy as np
import pytest
import shapely

from housingforge.bolts import plan_bolts
from housingforge.cavity import CavityKind, cavity_for
from housingforge.errors import CavityOverlap
from housingforge.fixtures import box_board
from housingforge.geometry import Point2, Polygon2
from housingforge.ingest import build_board
from housingforge.mesh import HousingConfig, box_mesh, build_housing, emit_stl, mesh_diagnostics, read_stl
from housingforge.model import ComponentInstance, Placement

from meshcheck import parity_mismatches


def test_plain_box(lib):
    board = box_board(20.0)
    mesh = build_housing(board, None, lib, HousingConfig(3.0))
    rep = mesh_diagnostics(mesh)
    assert rep.sound and rep.triangles == 12
    assert rep.volume == pytest.approx(20 * 20 * 3)
    assert rep.bbox == ((0.0, 0.0, 0.0), (20.0, 20.0, 3.0))


def test_box_with_hole_volume(lib):
    board = box_board(20.0)
    cfg = HousingConfig(3.0, bolt_diameter=2.0)
    plan = plan_bolts(board, lib, fixed_holes=[Point2(10, 10)], bolt_diameter=2.0)
    rep = mesh_diagnostics(build_housing(board, plan, lib, cfg))
    analytic = 400 * 3 - math.pi * 1.0 * 3
    inscribed = 400 * 3 - 0.5 * 32 * math.sin(2 * math.pi / 32) * 3
    assert rep.sound
    assert rep.volume == pytest.approx(inscribed, rel=1e-9)
    assert abs(rep.volume - analytic) / analytic < 0.02


def test_stl_sizes_and_round_trip():
    mesh = box_mesh(0, 0, 0, 1, 2, 3)
    data = emit_stl(mesh)
    assert len(data) == 84 + 50 * 12
    assert struct.unpack_from("<I", data, 80) == (12,)
    assert len(emit_stl(mesh.without_triangle(0).without_triangle(0).without_triangle(0)
                        .without_triangle(0).without_triangle(0).without_triangle(0)
                        .without_triangle(0).without_triangle(0).without_triangle(0)
                        .without_triangle(0).without_triangle(0).without_triangle(0))) == 84
    again = read_stl(data)
    assert mesh_diagnostics(again).volume == pytest.approx(6.0)
    assert mesh_diagnostics(again).watertight


def test_ascii_stl():
    text = emit_stl(box_mesh(0, 0, 0, 1, 1, 1), ascii=True, name="cube").decode()
    assert text.startswith("solid cube\n") and text.rstrip().endswith("endsolid cube")
    assert text.count("facet normal") == 12


def test_diagnostics_detect_defects():
    box = box_mesh(0, 0, 0, 1, 1, 1)
    holed = mesh_diagnostics(box.without_triangle(0))
    assert holed.boundary_edges == 3 and not holed.watertight
    two = mesh_diagnostics(box.merged(box.translated(5.0)))
    assert two.watertight and two.components == 2 and not two.sound
    flipped = box.triangles.copy()
    flipped[0] = flipped[0][::-1]
    from housingforge.mesh import TriMesh
    assert mesh_diagnostics(TriMesh(box.vertices, flipped)).misoriented_edges == 3
    assert mesh_diagnostics(TriMesh.empty()).triangles == 0


def test_fixtures_are_sound(fixtures, lib):
    for board in fixtures.values():
        plan = plan_bolts(board, lib) if board.name != "small-chip" else None
        rep = mesh_diagnostics(build_housing(board, plan, lib, degrade=True))
        assert rep.sound, (board.name, rep.summary())
        cap = board.outline.area * 3.0
        assert rep.volume < cap if board.components else rep.volume == pytest.approx(cap)


@pytest.mark.parametrize("name", ["validate-soic-8", "strip", "timer", "bristlebot-v3"])
def test_ray_parity_sampling(fixtures, lib, name):
    board = fixtures[name]
    cfg = HousingConfig()
    plan = plan_bolts(board, lib)
    mesh = build_housing(board, plan, lib, cfg)
    bad, checked, solid, void = parity_mismatches(board, plan, mesh, cfg, 1500, seed=7)
    assert bad == 0
    assert checked > 1400 and solid > 100 and void > 100


def test_tab_apex_sits_inside_the_body(lib):
    comp = ComponentInstance("R1", lib["0805"], Placement(Point2(10, 10), 0.0), "X")
    board = build_board("tab", Polygon2.rectangle(0, 0, 20, 20), 1.6, [comp])
    mesh = build_housing(board, None, lib)
    V = mesh.vertices
    body = shapely.Polygon(comp.body_polygon())
    inside = shapely.contains_xy(body.buffer(-1e-6), V[:, 0], V[:, 1])
    lowest = V[inside, 2].min()
    assert lowest == pytest.approx(lib["0805"].thickness - 0.1)


def test_press_bar_reaches_pin_height(lib):
    comp = ComponentInstance("U1", lib["SOIC-8"], Placement(Point2(15, 15), 0.0), "X")
    board = build_board("bars", Polygon2.rectangle(0, 0, 30, 30), 1.6, [comp])
    mesh = build_housing(board, plan_bolts(board, lib), lib)
    cav = cavity_for(comp)
    assert cav.kind is CavityKind.PRESS_BAR
    bar = shapely.Polygon(cav.inserts[0].footprint).buffer(1e-6)
    V = mesh.vertices
    corners = V[shapely.contains_xy(bar, V[:, 0], V[:, 1])]
    assert np.isclose(corners[:, 2], lib["SOIC-8"].pin_height).sum() >= 4


def test_overlapping_parts_are_rejected(lib):
    a = ComponentInstance("R1", lib["0805"], Placement(Point2(10, 10), 0.0), "X")
    b = ComponentInstance("R2", lib["0805"], Placement(Point2(11, 10), 0.0), "X")
    board = build_board("clash", Polygon2.rectangle(0, 0, 20, 20), 1.6, [a, b])
    with pytest.raises(CavityOverlap) as info:
        build_housing(board, None, lib)
    assert {info.value.ref_a, info.value.ref_b} == {"R1", "R2"}


def test_housing_is_deterministic(fixtures, lib):
    board = fixtures["timer"]
    plan = plan_bolts(board, lib)
    assert emit_stl(build_housing(board, plan, lib)) == emit_stl(build_housing(board, plan, lib))


def test_thickness_changes_volume(lib):
    board = box_board(10.0)
    v = [mesh_diagnostics(build_housing(board, None, lib, HousingConfig(t))).volume for t in (1.0, 2.5, 5.0)]
    assert v == pytest.approx([100.0, 250.0, 500.0])


@pytest.mark.parametrize("kwargs", [{"thickness": 0.5}, {"thickness": 6.0}, {"bolt_diameter": 0.5},
                                    {"circle_segments": 4}])
def test_config_validation(kwargs):
    with pytest.raises(ValueError):
        HousingConfig(**kwargs)


def test_cutout_outline(lib):
    outline = Polygon2.from_points([(0, 0), (30, 0), (30, 20), (0, 20)], [[(20, 5), (25, 5), (25, 10), (20, 10)]])
    board = build_board("cut", outline, 1.6, [])
    rep = mesh_diagnostics(build_housing(board, None, lib))
    assert rep.sound and rep.volume == pytest.approx((600 - 25) * 3)
    assert np.isclose(rep.bbox[1][2], 3.0)
