"""Exception hierarchy shared by all housingforge modules."""

from __future__ import annotations


class HousingForgeError(Exception):
    """Base class for every named failure raised by the toolchain."""


# -- ingest -----------------------------------------------------------------


class FormatSyntaxError(SyntaxError, HousingForgeError):
    """Malformed board, library, calibration or ledger text.

    Carries the 1-based line and column of the offending token the same way
    the builtin :class:`SyntaxError` does.
    """

    def __init__(self, msg: str, lineno: int = 0, offset: int = 0, filename: str | None = None):
        super().__init__(msg, (filename or "<input>", lineno, offset, None))
        self.msg = msg

    def __str__(self) -> str:
        return f"{self.filename}:{self.lineno}:{self.offset}: {self.msg}"


class IngestError(HousingForgeError):
    pass


class UnknownPackage(IngestError):
    def __init__(self, ref: str, name: str):
        super().__init__(f"{ref}: unknown package {name!r}")
        self.ref = ref
        self.name = name


class MissingOutline(IngestError):
    def __init__(self, detail: str = "no board outline found"):
        super().__init__(detail)


class DegenerateOutline(IngestError):
    pass


class DuplicatePackage(IngestError):
    def __init__(self, name: str):
        super().__init__(f"duplicate package {name!r}")
        self.name = name


class InvariantViolation(IngestError):
    def __init__(self, entry: str, reason: str):
        super().__init__(f"{entry}: {reason}")
        self.entry = entry
        self.reason = reason


class DuplicateRefDes(IngestError):
    def __init__(self, ref: str):
        super().__init__(f"duplicate reference designator {ref!r}")
        self.ref = ref


class ComponentOutsideOutline(IngestError):
    def __init__(self, ref: str):
        super().__init__(f"{ref}: footprint extends outside the board outline")
        self.ref = ref


# -- cavities ---------------------------------------------------------------


class CavityError(HousingForgeError):
    pass


class PackageTooSmall(CavityError):
    def __init__(self, name: str):
        super().__init__(f"package {name!r} is smaller than 0603; tabs cannot be printed")
        self.name = name


class UnsupportedOnProfile(CavityError):
    def __init__(self, ref: str, profile: str):
        super().__init__(f"{ref}: flexible tabs are not manufacturable on {profile}")
        self.ref = ref
        self.profile = profile


class MissingCavityModel(CavityError):
    def __init__(self, ref: str):
        super().__init__(f"{ref}: custom package has no cavity solid")
        self.ref = ref


# -- bolts ------------------------------------------------------------------


class CalibrationError(HousingForgeError):
    pass


class OutOfCalibratedRange(CalibrationError):
    def __init__(self, thickness: float, lo: float, hi: float):
        super().__init__(f"thickness {thickness} mm outside calibrated range [{lo}, {hi}]")
        self.thickness = thickness


class Infeasible(HousingForgeError):
    def __init__(self, ref: str, reason: str):
        super().__init__(f"{ref}: {reason}")
        self.ref = ref
        self.reason = reason


# -- mesh -------------------------------------------------------------------


class BooleanFailure(HousingForgeError):
    def __init__(self, solid_id: str, detail: str):
        super().__init__(f"{solid_id}: {detail}")
        self.solid_id = solid_id


class CavityOverlap(HousingForgeError):
    def __init__(self, ref_a: str, ref_b: str):
        super().__init__(f"cavities of {ref_a} and {ref_b} overlap")
        self.ref_a = ref_a
        self.ref_b = ref_b


# -- reporting --------------------------------------------------------------


class UnknownNet(HousingForgeError):
    def __init__(self, net: str):
        super().__init__(f"unknown net {net!r}")
        self.net = net


class MissingPartNumbers(HousingForgeError):
    def __init__(self, refs: list[str]):
        super().__init__("components without part numbers: " + ", ".join(refs))
        self.refs = refs
