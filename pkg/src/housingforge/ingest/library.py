"""Package library: the ``packlib v1`` text format and alias resolution."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import DuplicatePackage, FormatSyntaxError, InvariantViolation
from ..geometry import Point2
from ..model import CustomPrism, PackageClass, PackageSpec, PadRect
from .textfmt import decode, fmt, lines, quote, read_header

SCHEMA_VERSION = "v1"

_CLASS_BY_TOKEN = {c.value: c for c in PackageClass}


@dataclass(frozen=True)
class LibraryFile:
    packages: dict[str, PackageSpec] = field(default_factory=dict)
    version: str = SCHEMA_VERSION

    def __post_init__(self) -> None:
        seen: dict[str, str] = {}
        for name, spec in self.packages.items():
            if name != spec.name:
                raise InvariantViolation(name, f"keyed under a different name ({spec.name})")
            for alias in spec.aliases:
                if alias in self.packages and alias != name:
                    raise InvariantViolation(name, f"alias {alias!r} shadows a package name")
                if alias in seen and seen[alias] != name:
                    raise InvariantViolation(name, f"alias {alias!r} already used by {seen[alias]}")
                seen[alias] = name

    @classmethod
    def from_specs(cls, specs) -> "LibraryFile":
        packages: dict[str, PackageSpec] = {}
        for s in specs:
            if s.name in packages:
                raise DuplicatePackage(s.name)
            packages[s.name] = s
        return cls(packages)

    def __contains__(self, name: str) -> bool:
        return self.resolve(name) is not None

    def __getitem__(self, name: str) -> PackageSpec:
        spec = self.resolve(name)
        if spec is None:
            raise KeyError(name)
        return spec

    def __iter__(self):
        return iter(self.packages.values())

    def __len__(self) -> int:
        return len(self.packages)

    def resolve(self, footprint: str) -> PackageSpec | None:
        """Map a package name, alias, or ``Lib:Footprint`` name to its spec."""
        for candidate in (footprint, footprint.split(":", 1)[-1]):
            if candidate in self.packages:
                return self.packages[candidate]
            for spec in self.packages.values():
                if candidate in spec.aliases:
                    return spec
        return None


def load_library(data: bytes | str) -> LibraryFile:
    """Parse ``packlib v1`` text.

    Raises:
        FormatSyntaxError: malformed text.
        DuplicatePackage: two entries share a name.
        InvariantViolation: an entry breaks a PackageSpec invariant.
    """
    it = lines(decode(data))
    read_header(it, "packlib", SCHEMA_VERSION)
    specs: dict[str, PackageSpec] = {}
    current: dict | None = None
    start_line = None
    for ln in it:
        kw = ln.tokens[0]
        if current is None:
            if kw != "package":
                raise ln.error(f"expected 'package', got {kw!r}", 0)
            ln.expect_len(3)
            cls_tok = ln.token(2)
            if cls_tok not in _CLASS_BY_TOKEN:
                raise ln.error(f"unknown package class {cls_tok!r}", 2)
            current = {"name": ln.token(1), "cls": _CLASS_BY_TOKEN[cls_tok], "pads": [], "bolts": [],
                       "prisms": [], "aliases": [], "raised": False, "pin_height": None, "body": None}
            start_line = ln
            continue
        if kw == "end":
            ln.expect_len(1)
            if current["body"] is None:
                raise ln.error(f"package {current['name']!r} has no 'body' line")
            if current["name"] in specs:
                raise DuplicatePackage(current["name"])
            l, w, t = current["body"]
            spec = PackageSpec(
                name=current["name"], cls=current["cls"], length=l, width=w, thickness=t,
                pads=tuple(current["pads"]), bolt_offsets=tuple(current["bolts"]),
                raised_pad_required=current["raised"], pin_height=current["pin_height"],
                custom_solid=tuple(current["prisms"]), aliases=tuple(current["aliases"]),
            )
            specs[spec.name] = spec
            current = None
        elif kw == "body":
            ln.expect_len(4)
            current["body"] = (ln.number(1), ln.number(2), ln.number(3))
        elif kw == "pad":
            ln.expect_len(6)
            current["pads"].append(PadRect(ln.token(1), ln.number(2), ln.number(3), ln.number(4), ln.number(5)))
        elif kw == "bolt":
            ln.expect_len(3)
            current["bolts"].append(Point2(ln.number(1), ln.number(2)))
        elif kw == "pin-height":
            ln.expect_len(2)
            current["pin_height"] = ln.number(1)
        elif kw == "raised-pads":
            ln.expect_len(1)
            current["raised"] = True
        elif kw == "alias":
            ln.expect_len(2)
            current["aliases"].append(ln.token(1))
        elif kw == "prism":
            if len(ln.tokens) < 8 or len(ln.tokens) % 2 != 0:
                raise ln.error("prism takes a depth and at least three x y pairs")
            depth = ln.number(1)
            pts = tuple(Point2(ln.number(i), ln.number(i + 1)) for i in range(2, len(ln.tokens), 2))
            current["prisms"].append(CustomPrism(pts, depth))
        else:
            raise ln.error(f"unknown package field {kw!r}", 0)
    if current is not None:
        raise start_line.error(f"package {current['name']!r} is missing 'end'")
    return LibraryFile(specs)


def save_library(lib: LibraryFile) -> bytes:
    out = [f"packlib {SCHEMA_VERSION}"]
    for spec in lib:
        out.append(f"package {quote(spec.name)} {spec.cls.value}")
        out.append(f"  body {fmt(spec.length)} {fmt(spec.width)} {fmt(spec.thickness)}")
        if spec.pin_height is not None:
            out.append(f"  pin-height {fmt(spec.pin_height)}")
        if spec.raised_pad_required:
            out.append("  raised-pads")
        for p in spec.pads:
            out.append(f"  pad {quote(p.name)} {fmt(p.x)} {fmt(p.y)} {fmt(p.w)} {fmt(p.h)}")
        for b in spec.bolt_offsets:
            out.append(f"  bolt {fmt(b.x)} {fmt(b.y)}")
        for prism in spec.custom_solid:
            coords = " ".join(f"{fmt(p.x)} {fmt(p.y)}" for p in prism.points)
            out.append(f"  prism {fmt(prism.depth)} {coords}")
        for a in spec.aliases:
            out.append(f"  alias {quote(a)}")
        out.append("end")
    return ("\n".join(out) + "\n").encode("utf-8")


__all__ = ["LibraryFile", "load_library", "save_library", "FormatSyntaxError"]
