"""Solderless-mount housing generation for printed circuit boards.

Turns a board layout and a package library into a printable housing mesh that
presses components onto their pads, a bolt plan that keeps every two-terminal
part within the calibrated bolt span, design-rule findings, and a reuse ledger.
"""

from .bolts import BoltPlan, SpanCalibration, default_calibration, max_span, plan_bolts, verify_plan
from .cavity import CNC_MDF, FDM_PLA, RESIN, CavitySolid, MaterialProfile, TabSpec, cavity_for, tab_dims
from .drc import RuleViolation, assembly_report, estimate_contact_resistance, run_drc
from .geometry import Point2, Polygon2, polygon_contains, transform_to_board_frame
from .ingest import (SourceFormat, default_library, load_library, parse_board, save_library,
                     serialize_board)
from .mesh import HousingConfig, TriMesh, build_housing, emit_stl, mesh_diagnostics
from .model import BoardDesign, ComponentInstance, PackageClass, PackageSpec, Placement
from .reuse import CycleLedger, DurabilityWarning, ReuseReport, diff_reuse, record_cycle

__version__ = "0.1.0"

__all__ = [
    "BoltPlan", "SpanCalibration", "default_calibration", "max_span", "plan_bolts", "verify_plan",
    "CNC_MDF", "FDM_PLA", "RESIN", "CavitySolid", "MaterialProfile", "TabSpec", "cavity_for",
    "tab_dims", "RuleViolation", "assembly_report", "estimate_contact_resistance", "run_drc",
    "Point2", "Polygon2", "polygon_contains", "transform_to_board_frame", "SourceFormat",
    "default_library", "load_library", "parse_board", "save_library", "serialize_board",
    "HousingConfig", "TriMesh", "build_housing", "emit_stl", "mesh_diagnostics", "BoardDesign",
    "ComponentInstance", "PackageClass", "PackageSpec", "Placement", "CycleLedger",
    "DurabilityWarning", "ReuseReport", "diff_reuse", "record_cycle", "__version__",
]
