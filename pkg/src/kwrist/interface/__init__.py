"""File formats, drawing export, and the command-line surface."""

from .files import (DesignDocument, load_design_document, load_measurements,
                    make_design_document, save_design_document,
                    save_measurements)
from .pattern import (Circle, DashedLine, ExportedDrawing, PatternStyle,
                      Polyline, export_pattern)
from .svg import drawing_to_svg, write_svg
from .dxf import drawing_to_dxf, write_dxf
from .tabular import (export_schedule, export_trajectory, parse_schedule_csv,
                      parse_trajectory_csv)
from .cli import cli_dispatch, main

__all__ = [
    "DesignDocument", "load_design_document", "load_measurements",
    "make_design_document", "save_design_document", "save_measurements",
    "Circle", "DashedLine", "ExportedDrawing", "PatternStyle", "Polyline",
    "export_pattern", "drawing_to_svg", "write_svg", "drawing_to_dxf",
    "write_dxf", "export_schedule", "export_trajectory", "parse_schedule_csv",
    "parse_trajectory_csv", "cli_dispatch", "main",
]
