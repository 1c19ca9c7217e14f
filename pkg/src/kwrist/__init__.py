"""kwrist: Kresling-origami wrist orthosis toolkit.

Turns hand-wrist-forearm measurements into a five-unit orthosis design,
exports laser-cuttable crease patterns (SVG/DXF), and simulates
tendon-driven bending (workspace sweeps, basic movements, dart-throw,
circumduction) by quasi-static energy minimisation.
"""

__version__ = "0.1.0"

from .errors import KwristError
from .geometry import (Chirality, CreasePattern, SpatialFrame, UnitKind,
                       UnitSpec, cell_tendon_diagonal, check_compatibility,
                       frame_vertices, make_unit_spec, unroll_strip)
from .sizing import (MeasurementSet, OrthosisDesign, SectionMeasurement,
                     assign_crease_length, check_semifold, design_orthosis,
                     fit_report, size_section)
from .kinematics import (BendReport, StackConfiguration, UnitConfiguration,
                         edge_lengths, max_bend_angle_lateral,
                         max_bend_angle_sagittal, neutral_twist,
                         stack_bend_angle, tendon_length,
                         theoretical_bend_report, unit_vertex_positions)
from .equilibrium import (ElasticModel, SolveOptions, SolveResult,
                          TendonCommand, Trajectory, build_elastic_model,
                          run_schedule, solve_equilibrium, sweep_single_tendon,
                          total_energy)
from .schedules import (MotionMode, Schedule, TendonStateVector,
                        key_action_tendons, make_basic_schedule,
                        make_circumduction_schedule, make_dtm_schedule,
                        make_workspace_schedule, mode_tendon_states)

__all__ = [
    "__version__", "KwristError",
    "Chirality", "CreasePattern", "SpatialFrame", "UnitKind", "UnitSpec",
    "cell_tendon_diagonal", "check_compatibility", "frame_vertices",
    "make_unit_spec", "unroll_strip",
    "MeasurementSet", "OrthosisDesign", "SectionMeasurement",
    "assign_crease_length", "check_semifold", "design_orthosis", "fit_report",
    "size_section",
    "BendReport", "StackConfiguration", "UnitConfiguration", "edge_lengths",
    "max_bend_angle_lateral", "max_bend_angle_sagittal", "neutral_twist",
    "stack_bend_angle", "tendon_length", "theoretical_bend_report",
    "unit_vertex_positions",
    "ElasticModel", "SolveOptions", "SolveResult", "TendonCommand",
    "Trajectory", "build_elastic_model", "run_schedule", "solve_equilibrium",
    "sweep_single_tendon", "total_energy",
    "MotionMode", "Schedule", "TendonStateVector", "key_action_tendons",
    "make_basic_schedule", "make_circumduction_schedule", "make_dtm_schedule",
    "make_workspace_schedule", "mode_tendon_states",
]
