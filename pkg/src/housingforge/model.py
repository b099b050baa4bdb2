"""Board and package domain types."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Mapping

from .errors import InvariantViolation
from .geometry import Point2, Polygon2, transform_to_board_frame


class PackageClass(enum.Enum):
    TWO_TERMINAL = "two-terminal"
    IC_EXTENDED_PIN = "ic-extended-pin"  # SOIC / TSSOP / TQFP: leads beside the body
    IC_BOTTOM_PAD = "ic-bottom-pad"  # QFN / BGA: contacts only underneath
    CUSTOM = "custom"

    @property
    def is_ic(self) -> bool:
        return self in (PackageClass.IC_EXTENDED_PIN, PackageClass.IC_BOTTOM_PAD)


@dataclass(frozen=True)
class PadRect:
    """Axis-aligned pad rectangle in its owner's frame."""

    name: str
    x: float
    y: float
    w: float
    h: float

    @property
    def area(self) -> float:
        return self.w * self.h

    def corners(self) -> list[Point2]:
        hx, hy = self.w / 2.0, self.h / 2.0
        return [
            Point2(self.x - hx, self.y - hy),
            Point2(self.x + hx, self.y - hy),
            Point2(self.x + hx, self.y + hy),
            Point2(self.x - hx, self.y + hy),
        ]


@dataclass(frozen=True)
class CustomPrism:
    """One extruded void of a custom cavity: package-local footprint, depth above the board."""

    points: tuple[Point2, ...]
    depth: float


@dataclass(frozen=True)
class PackageSpec:
    name: str
    cls: PackageClass
    length: float  # rated l
    width: float  # rated w
    thickness: float  # rated t
    pads: tuple[PadRect, ...] = ()
    bolt_offsets: tuple[Point2, ...] = ()
    raised_pad_required: bool = False
    pin_height: float | None = None  # lead-foot height, IcExtendedPin only
    custom_solid: tuple[CustomPrism, ...] = ()
    aliases: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        reason = self.invariant_failure()
        if reason:
            raise InvariantViolation(self.name, reason)

    def invariant_failure(self) -> str | None:
        if not self.name or any(c.isspace() for c in self.name):
            return "name must be a non-empty token"
        for label, v in (("l", self.length), ("w", self.width), ("t", self.thickness)):
            if not (v > 0.0) or v != v or v == float("inf"):
                return f"{label} must be positive, got {v}"
        if self.cls.is_ic and not self.bolt_offsets:
            return "IC packages need pre-allocated bolt offsets"
        if not self.cls.is_ic and self.bolt_offsets:
            return "only IC packages carry bolt offsets"
        if self.raised_pad_required and self.cls is not PackageClass.IC_BOTTOM_PAD:
            return "raised pads only apply to bottom-pad ICs"
        if self.cls is PackageClass.IC_EXTENDED_PIN:
            if self.pin_height is None or not (0.0 < self.pin_height < self.thickness):
                return "extended-pin ICs need 0 < pin height < t"
            if not self.pads:
                return "extended-pin ICs need pin rectangles"
        elif self.pin_height is not None:
            return "pin height only applies to extended-pin ICs"
        if self.cls is PackageClass.CUSTOM:
            for prism in self.custom_solid:
                if len(prism.points) < 3 or not (prism.depth > 0.0):
                    return "custom prisms need >= 3 points and positive depth"
        elif self.custom_solid:
            return "only custom packages carry explicit cavity solids"
        for pad in self.pads:
            if not (pad.w > 0.0 and pad.h > 0.0):
                return f"pad {pad.name} has non-positive size"
        if len({p.name for p in self.pads}) != len(self.pads):
            return "pad names must be unique"
        return None

    def pad(self, name: str) -> PadRect | None:
        for p in self.pads:
            if p.name == name:
                return p
        return None


@dataclass(frozen=True)
class Placement:
    position: Point2
    rotation: float = 0.0
    side: str = "top"

    def __post_init__(self) -> None:
        if self.side != "top":
            raise ValueError("only top-side placement is supported")


@dataclass(frozen=True)
class ComponentInstance:
    ref: str
    package: PackageSpec
    placement: Placement
    part_number: str = ""
    nets: Mapping[str, str] = field(default_factory=dict)  # pad name -> net

    @property
    def center(self) -> Point2:
        return self.placement.position

    def to_board(self, pts) -> list[Point2]:
        return transform_to_board_frame(pts, self.placement)

    def body_polygon(self) -> list[Point2]:
        hl, hw = self.package.length / 2.0, self.package.width / 2.0
        return self.to_board([(-hl, -hw), (hl, -hw), (hl, hw), (-hl, hw)])

    def pad_polygons(self) -> list[tuple[PadRect, list[Point2]]]:
        return [(p, self.to_board(p.corners())) for p in self.package.pads]

    def footprint_points(self) -> list[Point2]:
        pts = self.body_polygon()
        for _, poly in self.pad_polygons():
            pts.extend(poly)
        return pts

    def bolt_positions(self) -> list[Point2]:
        return self.to_board(self.package.bolt_offsets)


@dataclass(frozen=True)
class FreePad:
    """Copper pad not owned by any component (test point, raised contact...)."""

    name: str
    x: float
    y: float
    w: float
    h: float
    net: str = ""

    def corners(self) -> list[Point2]:
        return PadRect(self.name, self.x, self.y, self.w, self.h).corners()


@dataclass(frozen=True)
class BoardDesign:
    name: str
    outline: Polygon2
    thickness: float  # FR-4 board thickness
    components: tuple[ComponentInstance, ...] = ()
    free_pads: tuple[FreePad, ...] = ()

    def component(self, ref: str) -> ComponentInstance:
        for c in self.components:
            if c.ref == ref:
                return c
        raise KeyError(ref)

    def nets(self) -> set[str]:
        out = {net for c in self.components for net in c.nets.values() if net}
        out.update(p.net for p in self.free_pads if p.net)
        return out
