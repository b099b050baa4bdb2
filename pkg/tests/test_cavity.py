from __future__ import annotations

import dataclasses
import math
import time

import pytest
import shapely
from hypothesis import given
from hypothesis import strategies as st

from housingforge.cavity import (CNC_MDF, FDM_PLA, GROOVE_WEB, GROOVE_WIDTH, MIN_WALL, RESIN, CavityKind,
                                 cavity_for, tab_dims, tab_section)
from housingforge.errors import MissingCavityModel, PackageTooSmall, UnsupportedOnProfile
from housingforge.geometry import Point2
from housingforge.model import ComponentInstance, PackageClass, Placement


def place(lib, name, x=10.0, y=10.0, rot=0.0, ref="X1"):
    return ComponentInstance(ref, lib[name], Placement(Point2(x, y), rot), "P")


def test_0603_tab_matches_published_dimensions(lib):
    t0 = time.perf_counter()
    spec = tab_dims(lib["0603"])
    assert time.perf_counter() - t0 < 1e-3
    assert 0.69 <= spec.length <= 0.70
    assert spec.width == pytest.approx(0.48)
    assert spec.thickness == pytest.approx(0.45)
    assert spec.height == pytest.approx(0.55)
    assert spec.alpha == 30.0


def test_0805_tab(lib):
    spec = tab_dims(lib["0805"])
    assert (spec.length, spec.width, spec.thickness, spec.height) == pytest.approx((0.9, 0.75, 0.6, 0.7))


def test_0402_is_too_small(lib):
    with pytest.raises(PackageTooSmall):
        tab_dims(lib["0402"])


def test_tab_dims_rejects_ics(lib):
    with pytest.raises(ValueError):
        tab_dims(lib["SOIC-8"])


@given(l=st.floats(1.55, 10), w=st.floats(0.8, 6), t=st.floats(0.2, 3))
def test_tab_formula_properties(lib, l, w, t):
    pkg = dataclasses.replace(lib["0805"], length=l, width=w, thickness=t)
    spec = tab_dims(pkg)
    assert spec.length == pytest.approx(0.45 * l)
    assert spec.width == pytest.approx(0.6 * w)
    assert spec.thickness == t
    assert spec.height == pytest.approx(t + 0.1)
    sec = tab_section(spec, t)
    # the undeformed tip sits below the rated top, so the tab always presses
    assert sec.apex < t
    assert sec.apex == pytest.approx(t - 0.1)
    zs = [z for _, z in sec.polygon]
    assert max(zs) <= spec.height + 1e-9
    assert 0.0 <= sec.root <= sec.reach
    assert shapely.Polygon(sec.polygon).is_valid


def test_0603_section_is_a_wedge(lib):
    spec = tab_dims(lib["0603"])
    sec = tab_section(spec, 0.45)
    assert sec.reach == pytest.approx(spec.length * math.cos(math.radians(30)))
    assert sec.apex == pytest.approx(0.35)
    assert sec.root == pytest.approx(sec.reach - 0.2 / math.tan(math.radians(30)))
    assert len(sec.polygon) == 3


def test_two_terminal_cavity(lib):
    cav = cavity_for(place(lib, "0805"))
    assert cav.kind is CavityKind.TWO_TERMINAL
    (pocket,) = cav.pockets
    assert pocket.depth == pytest.approx(0.7)
    assert shapely.Polygon(pocket.footprint).area == pytest.approx(2.2 * 1.45)
    assert len(cav.inserts) == 2 and all(i.kind == "tab" for i in cav.inserts)
    for ins in cav.inserts:
        assert shapely.Polygon(pocket.footprint).contains(shapely.Polygon(ins.footprint))
        # underside at the tip equals the apex, and never drops below it
        a, b, c = ins.underside
        zs = [a + b * p.x + c * p.y for p in ins.footprint]
        assert min(zs) == pytest.approx(ins.apex)
        assert max(zs) <= pocket.depth + 1e-9


def test_rotated_tabs_follow_the_part(lib):
    flat = cavity_for(place(lib, "1206"))
    turned = cavity_for(place(lib, "1206", rot=90.0))
    a = shapely.Polygon(flat.inserts[0].footprint)
    b = shapely.Polygon(turned.inserts[0].footprint)
    assert a.area == pytest.approx(b.area)
    ax0, _, ax1, _ = a.bounds
    _, by0, _, by1 = b.bounds
    assert ax1 - ax0 == pytest.approx(by1 - by0)


def test_small_part_degrades_on_request(lib):
    comp = place(lib, "0402")
    with pytest.raises(PackageTooSmall):
        cavity_for(comp)
    cav = cavity_for(comp, degrade=True)
    assert cav.degraded and not cav.inserts


@pytest.mark.parametrize("profile", [FDM_PLA, CNC_MDF])
def test_profiles_without_tabs(lib, profile):
    with pytest.raises(UnsupportedOnProfile):
        cavity_for(place(lib, "0805"), profile)
    assert cavity_for(place(lib, "SOIC-8"), profile).kind is CavityKind.PRESS_BAR


def test_press_bars_cover_pin_rows(lib):
    cav = cavity_for(place(lib, "SOIC-14", rot=30.0))
    assert cav.kind is CavityKind.PRESS_BAR
    assert len(cav.inserts) == 2 and len(cav.pin_rows) == 2
    pocket = shapely.Polygon(cav.pockets[0].footprint)
    assert cav.pockets[0].depth == pytest.approx(1.5 + 0.1)
    for row, bar in zip(cav.pin_rows, cav.inserts):
        row_poly, bar_poly = shapely.Polygon(row), shapely.Polygon(bar.footprint)
        assert bar_poly.buffer(1e-9).contains(row_poly)
        assert pocket.buffer(1e-9).contains(bar_poly)
        assert bar.underside[0] == pytest.approx(lib["SOIC-14"].pin_height)


def test_quad_package_has_four_bars(lib):
    cav = cavity_for(place(lib, "TQFP-32", 20, 20))
    assert len(cav.inserts) == 4


def test_groove_geometry(lib):
    comp = place(lib, "TQFP-32", 20, 20)
    cav = cavity_for(comp)
    g = cav.groove
    assert g.web == GROOVE_WEB and g.width == GROOVE_WIDTH
    inner, outer = shapely.Polygon(g.inner), shapely.Polygon(g.outer)
    assert outer.contains(inner)
    assert inner.exterior.hausdorff_distance(outer.exterior) == pytest.approx(GROOVE_WIDTH * math.sqrt(2))
    # the island keeps a wall around the pocket and the IC's own bolt holes
    pocket = shapely.Polygon(cav.pockets[0].footprint)
    assert pocket.buffer(MIN_WALL - 1e-6).within(inner)
    for b in comp.bolt_positions():
        assert shapely.Point(b).buffer(0.5 + MIN_WALL - 1e-6).within(inner)


def test_bottom_pad_cavity(lib):
    cav = cavity_for(place(lib, "QFN-20"))
    assert cav.kind is CavityKind.NEGATIVE_POCKET
    assert cav.raised_pad_required
    assert cav.pockets[0].depth == pytest.approx(lib["QFN-20"].thickness)
    assert not cav.inserts and cav.groove is not None


def test_custom_solid_and_missing_model(lib):
    cav = cavity_for(place(lib, "DISPLAY-8DIG", 30, 30))
    assert cav.kind is CavityKind.CUSTOM and cav.pockets
    bare = dataclasses.replace(lib["DISPLAY-8DIG"], custom_solid=())
    with pytest.raises(MissingCavityModel):
        cavity_for(ComponentInstance("DS1", bare, Placement(Point2(30, 30), 0.0), "X"))


def test_cavities_are_deterministic(lib):
    for name in ["0603", "SOIC-8", "TQFP-32", "UFBGA-15", "BATT-CR2032"]:
        assert cavity_for(place(lib, name, rot=17.0)) == cavity_for(place(lib, name, rot=17.0))


def test_every_library_package_builds(lib):
    for spec in lib:
        comp = place(lib, spec.name, 50, 50)
        cav = cavity_for(comp, RESIN, degrade=True)
        assert cav.max_depth > 0
        if spec.cls is not PackageClass.CUSTOM:
            body = shapely.Polygon(comp.body_polygon())
            assert shapely.Polygon(cav.pockets[0].footprint).buffer(1e-9).contains(body)
