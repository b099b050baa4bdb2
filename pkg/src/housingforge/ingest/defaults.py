"""Built-in package library.

Two-terminal chips, the five IC families validated for pressed contacts
(SOIC, TSSOP, TQFP, QFN, UFBGA), and a handful of custom parts used by the
scenario boards. Lead geometry follows JEDEC nominal dimensions; pin
rectangles for extended-pin ICs describe the lead feet, not the copper pads,
because press bars must land on the leads.
"""

from __future__ import annotations

from functools import lru_cache

from ..geometry import Point2
from ..model import CustomPrism, PackageClass, PackageSpec, PadRect
from .library import LibraryFile

# keep in step with cavity.FIT_CLEARANCE / cavity.PRESS_BAR_OVERHANG
_CLEARANCE = 0.1
_OVERHANG = 0.1
# hole center sits this far beyond the pocket corner on both axes:
# sqrt(2) * 1.0 - 0.5 (radius) = 0.91 mm wall, above the 0.8 mm minimum
_BOLT_STANDOFF = 1.0


def _corner_bolts(half_x: float, half_y: float) -> tuple[Point2, ...]:
    bx, by = round(half_x + _BOLT_STANDOFF, 4), round(half_y + _BOLT_STANDOFF, 4)
    return (Point2(-bx, -by), Point2(bx, -by), Point2(bx, by), Point2(-bx, by))


def _pocket_half(length: float, width: float, pads: list[PadRect], grow: float) -> tuple[float, float]:
    hx, hy = length / 2.0, width / 2.0
    for p in pads:
        hx = max(hx, abs(p.x) + p.w / 2.0 + (grow if abs(p.x) > length / 2.0 else 0.0))
        hy = max(hy, abs(p.y) + p.h / 2.0 + (grow if abs(p.y) > width / 2.0 else 0.0))
    return hx + _CLEARANCE, hy + _CLEARANCE


def two_terminal(name: str, l: float, w: float, t: float, pad_x: float, pad_w: float, pad_h: float, aliases=()) -> PackageSpec:
    pads = (PadRect("1", -pad_x, 0.0, pad_w, pad_h), PadRect("2", pad_x, 0.0, pad_w, pad_h))
    return PackageSpec(name, PackageClass.TWO_TERMINAL, l, w, t, pads=pads, aliases=tuple(aliases))


def dual_row(name: str, l: float, w: float, t: float, per_row: int, pitch: float, lead_w: float,
             foot: tuple[float, float], pin_height: float, aliases=()) -> PackageSpec:
    """Leads on the +-y sides; pin 1 at bottom-left, numbering counter-clockwise."""
    y0, y1 = foot
    cy, h = (y0 + y1) / 2.0, y1 - y0
    xs = [(i - (per_row - 1) / 2.0) * pitch for i in range(per_row)]
    pads = [PadRect(str(i + 1), round(x, 4), -cy, lead_w, h) for i, x in enumerate(xs)]
    pads += [PadRect(str(per_row + i + 1), round(x, 4), cy, lead_w, h) for i, x in enumerate(reversed(xs))]
    hx, hy = _pocket_half(l, w, pads, _OVERHANG)
    return PackageSpec(name, PackageClass.IC_EXTENDED_PIN, l, w, t, pads=tuple(pads),
                       bolt_offsets=_corner_bolts(hx, hy), pin_height=pin_height, aliases=tuple(aliases))


def quad(name: str, body: float, t: float, per_side: int, pitch: float, lead_w: float,
         foot: tuple[float, float], pin_height: float, aliases=()) -> PackageSpec:
    """Square quad-flat package, leads on all four sides, counter-clockwise from bottom-left."""
    d0, d1 = foot
    c, h = (d0 + d1) / 2.0, d1 - d0
    s = [round((i - (per_side - 1) / 2.0) * pitch, 4) for i in range(per_side)]
    pads: list[PadRect] = []
    n = 1
    for x in s:  # bottom, left to right
        pads.append(PadRect(str(n), x, -c, lead_w, h)); n += 1
    for y in s:  # right, bottom to top
        pads.append(PadRect(str(n), c, y, h, lead_w)); n += 1
    for x in reversed(s):  # top, right to left
        pads.append(PadRect(str(n), x, c, lead_w, h)); n += 1
    for y in reversed(s):  # left, top to bottom
        pads.append(PadRect(str(n), -c, y, h, lead_w)); n += 1
    hx, hy = _pocket_half(body, body, pads, _OVERHANG)
    return PackageSpec(name, PackageClass.IC_EXTENDED_PIN, body, body, t, pads=tuple(pads),
                       bolt_offsets=_corner_bolts(hx, hy), pin_height=pin_height, aliases=tuple(aliases))


def qfn(name: str, body: float, t: float, per_side: int, pitch: float, pad_w: float, pad_len: float,
        exposed: float | None, aliases=()) -> PackageSpec:
    c = body / 2.0 - pad_len / 2.0
    s = [round((i - (per_side - 1) / 2.0) * pitch, 4) for i in range(per_side)]
    pads: list[PadRect] = []
    n = 1
    for x in s:
        pads.append(PadRect(str(n), x, -c, pad_w, pad_len)); n += 1
    for y in s:
        pads.append(PadRect(str(n), c, y, pad_len, pad_w)); n += 1
    for x in reversed(s):
        pads.append(PadRect(str(n), x, c, pad_w, pad_len)); n += 1
    for y in reversed(s):
        pads.append(PadRect(str(n), -c, y, pad_len, pad_w)); n += 1
    if exposed:
        pads.append(PadRect(str(n), 0.0, 0.0, exposed, exposed))
    hx, hy = _pocket_half(body, body, pads, 0.0)
    return PackageSpec(name, PackageClass.IC_BOTTOM_PAD, body, body, t, pads=tuple(pads),
                       bolt_offsets=_corner_bolts(hx, hy), raised_pad_required=True, aliases=tuple(aliases))


def bga(name: str, body: float, t: float, grid: int, pitch: float, ball: float, skip=(), aliases=()) -> PackageSpec:
    rows = "ABCDEFGHJKLMNPRTUVWY"
    pads = []
    for r in range(grid):
        for col in range(grid):
            label = f"{rows[r]}{col + 1}"
            if label in skip:
                continue
            x = round((col - (grid - 1) / 2.0) * pitch, 4)
            y = round(((grid - 1) / 2.0 - r) * pitch, 4)
            pads.append(PadRect(label, x, y, ball, ball))
    hx, hy = _pocket_half(body, body, pads, 0.0)
    return PackageSpec(name, PackageClass.IC_BOTTOM_PAD, body, body, t, pads=tuple(pads),
                       bolt_offsets=_corner_bolts(hx, hy), raised_pad_required=True, aliases=tuple(aliases))


def _rect(x0: float, y0: float, x1: float, y1: float) -> tuple[Point2, ...]:
    return (Point2(x0, y0), Point2(x1, y0), Point2(x1, y1), Point2(x0, y1))


def custom(name: str, l: float, w: float, t: float, pads, prisms, aliases=()) -> PackageSpec:
    return PackageSpec(name, PackageClass.CUSTOM, l, w, t, pads=tuple(pads),
                       custom_solid=tuple(CustomPrism(_rect(*r), d) for r, d in prisms), aliases=tuple(aliases))


def _specs() -> list[PackageSpec]:
    specs = [
        two_terminal("0402", 1.0, 0.5, 0.35, 0.485, 0.59, 0.64,
                     ["R_0402_1005Metric", "C_0402_1005Metric", "LED_0402_1005Metric"]),
        # rated 1.55 x 0.80 x 0.45 reproduces the published 0.69 / 0.48 / 0.45 mm tab
        two_terminal("0603", 1.55, 0.80, 0.45, 0.825, 0.8, 0.95,
                     ["R_0603_1608Metric", "C_0603_1608Metric", "LED_0603_1608Metric"]),
        two_terminal("0805", 2.0, 1.25, 0.6, 0.9125, 1.025, 1.4,
                     ["R_0805_2012Metric", "C_0805_2012Metric", "LED_0805_2012Metric"]),
        two_terminal("1206", 3.2, 1.6, 0.6, 1.4625, 1.05, 1.75,
                     ["R_1206_3216Metric", "C_1206_3216Metric", "LED_1206_3216Metric"]),
        dual_row("SOIC-8", 4.9, 3.9, 1.5, 4, 1.27, 0.41, (2.0, 3.0), 0.25,
                 ["SOIC-8_3.9x4.9mm_P1.27mm"]),
        dual_row("SOIC-14", 8.65, 3.9, 1.5, 7, 1.27, 0.41, (2.0, 3.0), 0.25,
                 ["SOIC-14_3.9x8.7mm_P1.27mm"]),
        dual_row("TSSOP-14", 5.0, 4.4, 1.0, 7, 0.65, 0.3, (2.6, 3.2), 0.15,
                 ["TSSOP-14_4.4x5mm_P0.65mm"]),
        quad("TQFP-32", 7.0, 1.0, 8, 0.8, 0.4, (3.9, 4.5), 0.15,
             ["TQFP-32_7x7mm_P0.8mm"]),
        qfn("QFN-20", 4.0, 0.9, 5, 0.65, 0.3, 0.55, 2.0,
            ["QFN-20-1EP_4x4mm_P0.65mm_EP2x2mm"]),
        bga("UFBGA-15", 3.0, 0.6, 4, 0.65, 0.25, skip=("D4",),
            aliases=["UFBGA-15_3.0x3.0mm_Layout4x4_P0.65mm"]),
        custom("DISPLAY-8DIG", 36.0, 12.0, 4.0,
               [PadRect(f"{i + 1}", -14.0 + 4.0 * i, -7.2, 1.2, 2.0) for i in range(8)]
               + [PadRect(f"{16 - i}", -14.0 + 4.0 * i, 7.2, 1.2, 2.0) for i in range(8)],
               [((-18.1, -6.1, 18.1, 6.1), 4.0), ((-14.9, -8.4, 14.9, -6.1), 0.4), ((-14.9, 6.1, 14.9, 8.4), 0.4)]),
        custom("BUTTON-6X6", 6.0, 6.0, 4.3,
               [PadRect("1", -4.0, 2.25, 1.4, 1.0), PadRect("2", 4.0, 2.25, 1.4, 1.0),
                PadRect("3", -4.0, -2.25, 1.4, 1.0), PadRect("4", 4.0, -2.25, 1.4, 1.0)],
               [((-3.1, -3.1, 3.1, 3.1), 4.3), ((-4.8, -2.85, -3.1, 2.85), 0.4), ((3.1, -2.85, 4.8, 2.85), 0.4)],
               ["SW_SPST_TL3342"]),
        custom("BATT-CR2032", 20.0, 16.0, 4.2,
               [PadRect("+", -11.9, 0.0, 2.5, 5.1), PadRect("-", 11.9, 0.0, 2.5, 5.1)],
               [((-10.1, -8.1, 10.1, 8.1), 4.2), ((-13.25, -2.65, -10.1, 2.65), 0.5), ((10.1, -2.65, 13.25, 2.65), 0.5)],
               ["BatteryHolder_Keystone_3034_1x20mm"]),
        custom("JST-PH-2", 8.0, 5.0, 6.0,
               [PadRect("1", -1.0, -2.9, 1.0, 2.6), PadRect("2", 1.0, -2.9, 1.0, 2.6),
                PadRect("MP1", -3.4, 2.3, 1.6, 2.6), PadRect("MP2", 3.4, 2.3, 1.6, 2.6)],
               [((-4.1, -2.6, 4.1, 2.6), 6.0), ((-1.7, -4.3, 1.7, -2.6), 0.4),
                ((-4.3, 2.6, -2.5, 3.7), 0.4), ((2.5, 2.6, 4.3, 3.7), 0.4)],
               ["JST_PH_S2B-PH-SM4-TB_1x02-1MP_P2.00mm_Horizontal"]),
        custom("BUZZER-9X9", 9.0, 9.0, 2.0,
               [PadRect("1", -4.0, 4.9, 1.5, 1.4), PadRect("2", 4.0, -4.9, 1.5, 1.4)],
               [((-4.6, -4.6, 4.6, 4.6), 2.1), ((-4.8, 4.6, -3.2, 5.7), 0.4), ((3.2, -5.7, 4.8, -4.6), 0.4)]),
        custom("LIGHT-SENSOR", 4.0, 2.0, 1.2,
               [PadRect("1", -1.5, -0.6, 0.8, 0.6), PadRect("2", 1.5, -0.6, 0.8, 0.6), PadRect("3", 0.0, 0.6, 0.8, 0.6)],
               [((-2.1, -1.1, 2.1, 1.1), 1.3)]),
    ]
    return specs


@lru_cache(maxsize=1)
def default_library() -> LibraryFile:
    """The shipped library (cached; LibraryFile is immutable by convention)."""
    return LibraryFile.from_specs(_specs())
