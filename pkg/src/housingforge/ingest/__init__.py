"""Board, library and calibration ingestion."""

from .boards import SourceFormat, build_board, parse_board, serialize_board
from .defaults import default_library
from .library import LibraryFile, load_library, save_library

__all__ = [
    "LibraryFile",
    "SourceFormat",
    "build_board",
    "default_library",
    "load_library",
    "parse_board",
    "save_library",
    "serialize_board",
]
