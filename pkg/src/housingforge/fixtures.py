"""Reference boards shared by the tests and the demos.

They reconstruct the published experiments and scenario builds: the 29-resistor
bolt-span strip, one validation board per IC family, the countdown timer and
the scoreboard rebuilt from its parts, and two revisions of a small robot
board. Coordinates are in millimeters, board frame, z-up.
"""

from __future__ import annotations

from .geometry import Point2, Polygon2
from .ingest.boards import build_board
from .ingest.defaults import default_library
from .model import BoardDesign, ComponentInstance, Placement

FR4 = 1.6

# one IC family per validation board, with the IC's library name
VALIDATION_PACKAGES = ("SOIC-8", "TSSOP-14", "TQFP-32", "QFN-20", "UFBGA-15")


def _comp(ref: str, pkg: str, x: float, y: float, rot: float = 0.0, part: str = "", nets=None) -> ComponentInstance:
    spec = default_library()[pkg]
    return ComponentInstance(ref, spec, Placement(Point2(x, y), rot), part or pkg, dict(nets or {}))


def _board(name: str, w: float, h: float, comps, cutouts=()) -> BoardDesign:
    return build_board(name, Polygon2.from_points([(0, 0), (w, 0), (w, h), (0, h)], cutouts), FR4, comps)


def box_board(size: float = 20.0) -> BoardDesign:
    return _board("box", size, size, [])


def strip_board() -> BoardDesign:
    """23 x 91 mm strip carrying 29 0805 resistors at 3 mm pitch down its long axis."""
    comps = [_comp(f"R{i + 1}", "0805", 11.5, 3.5 + 3.0 * i, part="RC0805-1K",
                   nets={"1": f"N{i}", "2": f"N{i + 1}"}) for i in range(29)]
    return _board("strip", 23.0, 91.0, comps)


def validation_board(package: str) -> BoardDesign:
    """One IC, five 1206 LEDs and five 0805 resistors, as in the package validation set."""
    spec = default_library()[package]
    mcu_nets = {p.name: f"P{p.name}" for p in spec.pads}
    comps = [_comp("U1", package, 12.0, 15.0, part=f"MCU-{package}", nets=mcu_nets)]
    pin_names = [p.name for p in spec.pads]
    for i in range(5):
        y = 5.0 + 5.0 * i
        drive = mcu_nets[pin_names[i]]
        comps.append(_comp(f"R{i + 1}", "0805", 26.0, y, part="RC0805-330R",
                           nets={"1": drive, "2": f"LED{i + 1}"}))
        comps.append(_comp(f"D{i + 1}", "1206", 36.0, y, part="LED1206-RED",
                           nets={"1": f"LED{i + 1}", "2": "GND"}))
    return _board(f"validate-{package.lower()}", 45.0, 30.0, comps)


def _timer_parts(layout):
    parts = {
        "U1": ("TQFP-32", "ATTINY828-AU"),
        "DS1": ("DISPLAY-8DIG", "LED-8DIG-0.36IN"),
        "DS2": ("DISPLAY-8DIG", "LED-8DIG-0.36IN"),
        "SW1": ("BUTTON-6X6", "TS-6X6-4.3"),
        "SW2": ("BUTTON-6X6", "TS-6X6-4.3"),
        "BT1": ("BATT-CR2032", "BH-CR2032-SMD"),
    }
    nets = {
        "U1": {"1": "SEG_A", "2": "SEG_B", "3": "BTN1", "4": "BTN2", "5": "VCC", "6": "GND"},
        "DS1": {"1": "SEG_A", "2": "SEG_B"},
        "DS2": {"1": "SEG_A", "2": "SEG_B"},
        "SW1": {"1": "BTN1", "3": "GND"},
        "SW2": {"1": "BTN2", "3": "GND"},
        "BT1": {"+": "VCC", "-": "GND"},
    }
    return [_comp(ref, parts[ref][0], x, y, rot, parts[ref][1], nets[ref]) for ref, (x, y, rot) in layout.items()]


def timer_board() -> BoardDesign:
    """Countdown timer: one TQFP-32 MCU, two 8-digit displays, two buttons, a coin cell."""
    layout = {"U1": (20.0, 16.0, 0), "DS1": (25.0, 38.0, 0), "DS2": (65.0, 38.0, 0),
              "SW1": (42.0, 12.0, 0), "SW2": (54.0, 12.0, 0), "BT1": (75.0, 16.0, 0)}
    return _board("timer", 90.0, 50.0, _timer_parts(layout))


def scoreboard_board() -> BoardDesign:
    """The same six parts rearranged into a two-sided scoreboard."""
    layout = {"U1": (50.0, 42.0, 0), "DS1": (12.0, 30.0, 90), "DS2": (88.0, 30.0, 90),
              "SW1": (30.0, 15.0, 0), "SW2": (70.0, 15.0, 0), "BT1": (50.0, 14.0, 0)}
    return _board("scoreboard", 100.0, 60.0, _timer_parts(layout))


def bristlebot_board(version: int = 1) -> BoardDesign:
    """Vibration robot controller; revision 3 adds a decoupling capacitor and moves the sensor."""
    comps = [
        _comp("U1", "QFN-20", 12.0, 12.0, part="ATTINY84A-MU",
              nets={"1": "VCC", "2": "LDR", "3": "MOTOR", "4": "BUZZ", "21": "GND"}),
        _comp("R1", "0805", 28.0, 8.0, part="RC0805-10K", nets={"1": "VCC", "2": "LDR"}),
        _comp("R2", "0805", 28.0, 14.0, part="RC0805-1K", nets={"1": "MOTOR", "2": "Q_BASE"}),
        _comp("R3", "0805", 28.0, 20.0, part="RC0805-100R", nets={"1": "BUZZ", "2": "BZ_IN"}),
        _comp("J1", "JST-PH-2", 12.0, 36.0, part="S2B-PH-SM4-TB", nets={"1": "VCC", "2": "GND"}),
        _comp("BZ1", "BUZZER-9X9", 12.0, 25.0, part="MLT-8530", nets={"1": "BZ_IN", "2": "GND"}),
    ]
    if version >= 3:
        comps.append(_comp("C1", "0805", 28.0, 26.0, part="CC0805-100N", nets={"1": "VCC", "2": "GND"}))
        comps.append(_comp("Q1", "LIGHT-SENSOR", 27.0, 36.0, part="TEMT6000", nets={"1": "LDR", "2": "GND"}))
    else:
        comps.append(_comp("Q1", "LIGHT-SENSOR", 27.0, 32.0, part="TEMT6000", nets={"1": "LDR", "2": "GND"}))
    return _board(f"bristlebot-v{version}", 35.0, 42.0, comps)


def small_chip_board() -> BoardDesign:
    """A board carrying an 0402 part, which is too small for printed tabs."""
    comps = [_comp("R1", "0805", 10.0, 6.0, part="RC0805-1K"), _comp("R2", "0402", 10.0, 14.0, part="RC0402-1K")]
    return _board("small-chip", 20.0, 20.0, comps)


def all_fixtures() -> dict[str, BoardDesign]:
    boards = [strip_board(), *(validation_board(p) for p in VALIDATION_PACKAGES), timer_board(),
              scoreboard_board(), bristlebot_board(1), bristlebot_board(3), box_board(), small_chip_board()]
    return {b.name: b for b in boards}
