"""Command-line surface.

Subcommands: design, validate, pattern, schedule, simulate, workspace,
report.  Usage errors exit 2 (argparse); domain errors print the error
class name and exit 1; success exits 0.
"""

from __future__ import annotations

import argparse
import math
import sys

from ..errors import KwristError
from ..equilibrium import (build_elastic_model, run_schedule,
                           sweep_single_tendon)
from ..kinematics import theoretical_bend_report
from ..schedules import MotionMode, schedule_for_mode
from ..sizing import LOCKED_SECTIONS, check_semifold, fit_report
from .files import (load_design_document, load_measurements,
                    make_design_document, save_design_document,
                    design_document_to_dict)
from .pattern import PatternStyle, export_pattern
from .svg import drawing_to_svg, write_svg
from .dxf import write_dxf
from .tabular import (export_schedule, export_trajectory, parse_schedule_csv,
                      write_csv)

_MODE_ALIASES = {
    "extension": MotionMode.EXTENSION,
    "flexion": MotionMode.FLEXION,
    "radial": MotionMode.RADIAL_DEVIATION,
    "radial-deviation": MotionMode.RADIAL_DEVIATION,
    "ulnar": MotionMode.ULNAR_DEVIATION,
    "ulnar-deviation": MotionMode.ULNAR_DEVIATION,
    "dtm": MotionMode.DTM,
    "dtm-mirror": MotionMode.DTM_MIRROR,
    "circumduction": MotionMode.CIRCUMDUCTION,
    "workspace": MotionMode.WORKSPACE_SWEEP,
    "workspace-sweep": MotionMode.WORKSPACE_SWEEP,
}


def _mode(value: str) -> MotionMode:
    key = value.strip().lower()
    if key not in _MODE_ALIASES:
        raise argparse.ArgumentTypeError(
            f"unknown mode {value!r}; choose from {sorted(_MODE_ALIASES)}")
    return _MODE_ALIASES[key]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kwrist",
        description="Kresling-origami wrist orthosis: sizing, crease patterns, "
                    "and tendon-driven bending simulation")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("design", help="measurements -> design document")
    p.add_argument("--in", dest="infile", required=True,
                   help="measurement JSON file")
    p.add_argument("--out", dest="outfile", help="design document path (stdout "
                   "when omitted)")
    p.add_argument("--tolerance-mm", type=float, default=None,
                   help="override the circumference tolerance")
    p.add_argument("--alpha-deg", type=float, default=None,
                   help="override the cell base angle")

    p = sub.add_parser("validate", help="check a design document")
    p.add_argument("--in", dest="infile", required=True)

    p = sub.add_parser("pattern", help="design -> SVG + DXF crease drawings")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", dest="outfile", help="output stem or .svg path "
                   "(stdout SVG when omitted)")
    p.add_argument("--dash-on-mm", type=float, default=2.0)
    p.add_argument("--dash-off-mm", type=float, default=2.0)
    p.add_argument("--fillet-mm", type=float, default=1.5)
    p.add_argument("--eyelet-mm", type=float, default=4.0)
    p.add_argument("--tab-mm", type=float, default=8.0)

    p = sub.add_parser("schedule", help="motion mode -> contraction schedule CSV")
    p.add_argument("--mode", type=_mode, required=True)
    p.add_argument("--out", dest="outfile")
    p.add_argument("--rate", type=float, default=10.0,
                   help="samples per second (default 10)")
    p.add_argument("--max-contraction", type=float, default=1.0)

    p = sub.add_parser("simulate", help="design + schedule -> trajectory CSV")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--mode", type=_mode, help="built-in schedule to run")
    p.add_argument("--schedule-csv", dest="schedule_csv",
                   help="run a schedule CSV instead of --mode")
    p.add_argument("--out", dest="outfile")
    p.add_argument("--rate", type=float, default=2.0,
                   help="trajectory samples per second (default 2)")
    p.add_argument("--max-contraction", type=float, default=1.0)
    p.add_argument("--pin-section2", action="store_true",
                   help="lock section 2 at its neutral fold")

    p = sub.add_parser("workspace", help="design -> 6 single-tendon sweeps")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", dest="outfile", required=True,
                   help="output stem for the 6 trajectories + summary")
    p.add_argument("--steps", type=int, default=29,
                   help="samples per 14 s sweep (default 29)")
    p.add_argument("--max-contraction", type=float, default=1.0)
    p.add_argument("--pin-section2", action="store_true")

    p = sub.add_parser("report", help="design -> theoretical bend-angle report")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", dest="outfile")

    return parser


def _emit(text: str, outfile, writer) -> None:
    if outfile:
        writer(text, outfile)
    else:
        sys.stdout.write(text)


def _cmd_design(args) -> int:
    measurements = load_measurements(args.infile)
    if args.tolerance_mm is not None or args.alpha_deg is not None:
        from ..sizing import MeasurementSet
        measurements = MeasurementSet(
            measurements.sections,
            args.tolerance_mm if args.tolerance_mm is not None
            else measurements.tolerance,
            args.alpha_deg if args.alpha_deg is not None else measurements.alpha)
    doc = make_design_document(measurements)
    if args.outfile:
        save_design_document(doc, args.outfile)
        print(f"wrote {args.outfile}")
    else:
        import json
        sys.stdout.write(json.dumps(design_document_to_dict(doc), indent=2) + "\n")
    return 0


def _cmd_validate(args) -> int:
    doc = load_design_document(args.infile)
    design, measurements = doc.design, doc.measurements
    ok = True
    print("design reproducible from measurements: ok")
    for i in range(4):
        lower, upper = design.units[i + 1], design.units[i]
        good = abs(lower.a2 - upper.a1) <= 1e-6
        ok &= good
        print(f"interface sections {i + 1}/{i + 2}: "
              f"{'ok' if good else 'MISMATCH'} "
              f"({upper.a1:.3f} vs {lower.a2:.3f} mm)")
    for idx, (unit, h) in enumerate(zip(design.units, design.section_heights),
                                    start=1):
        reach = unit.b * math.sin(math.radians(unit.alpha))
        if idx in LOCKED_SECTIONS and idx == 1:
            print(f"semi-fold section {idx}: collar (b sin alpha = {reach:.2f} mm, "
                  f"height {h:.2f} mm)")
            continue
        good = check_semifold(unit.b, unit.alpha, h)
        ok &= good
        print(f"semi-fold section {idx}: {'ok' if good else 'FAIL'} "
              f"(b sin alpha = {reach:.2f} > height {h:.2f} mm)")
    for i in range(4):
        good = design.units[i].chirality != design.units[i + 1].chirality
        ok &= good
    print(f"chirality alternation: {'ok' if ok else 'FAIL'}")
    print("clearance per section (bottom/top, mm):")
    for idx, (lo, hi) in enumerate(fit_report(design, measurements), start=1):
        print(f"  section {idx}: {lo:.3f} / {hi:.3f}")
    return 0 if ok else 1


def _cmd_pattern(args) -> int:
    doc = load_design_document(args.infile)
    style = PatternStyle(dash_on=args.dash_on_mm, dash_off=args.dash_off_mm,
                         fillet_radius=args.fillet_mm,
                         eyelet_diameter=args.eyelet_mm, tab_width=args.tab_mm)
    drawing = export_pattern(doc.design, style)
    if not args.outfile:
        sys.stdout.write(drawing_to_svg(drawing))
        return 0
    stem = args.outfile
    for suffix in (".svg", ".dxf"):
        if stem.lower().endswith(suffix):
            stem = stem[: -len(suffix)]
    write_svg(drawing, stem + ".svg")
    write_dxf(drawing, stem + ".dxf")
    print(f"wrote {stem}.svg and {stem}.dxf")
    return 0


def _cmd_schedule(args) -> int:
    schedule = schedule_for_mode(args.mode, max_contraction=args.max_contraction)
    text = export_schedule(schedule, args.rate)
    _emit(text, args.outfile, write_csv)
    if args.outfile:
        print(f"wrote {args.outfile} ({schedule.duration:g} s at {args.rate:g}/s)")
    return 0


def _load_schedule(args):
    if (args.mode is None) == (args.schedule_csv is None):
        raise KwristError("simulate needs exactly one of --mode or --schedule-csv")
    if args.mode is not None:
        return schedule_for_mode(args.mode, max_contraction=args.max_contraction)
    with open(args.schedule_csv, "r", encoding="utf-8") as fh:
        return parse_schedule_csv(fh.read())


def _cmd_simulate(args) -> int:
    doc = load_design_document(args.infile)
    schedule = _load_schedule(args)
    model = build_elastic_model(doc.design, pin_section2=args.pin_section2)
    trajectory = run_schedule(model, schedule, args.rate)
    text = export_trajectory(trajectory)
    beta_max, t_max = trajectory.max_bend()
    last = trajectory.samples[-1]
    summary = (f"{len(trajectory.samples)} samples over "
               f"{trajectory.duration:g} s; max bend {beta_max:.2f} deg at "
               f"t={t_max:g} s; final bend {last.beta:.3f} deg")
    if args.outfile:
        write_csv(text, args.outfile)
        print(f"wrote {args.outfile}")
        print(summary)
    else:
        sys.stdout.write(text)
        print(summary, file=sys.stderr)
    return 0


def _cmd_workspace(args) -> int:
    doc = load_design_document(args.infile)
    model = build_elastic_model(doc.design, pin_section2=args.pin_section2)
    rows = []
    for tendon in range(1, 7):
        trajectory = sweep_single_tendon(model, tendon, args.steps,
                                         max_contraction=args.max_contraction)
        write_csv(export_trajectory(trajectory), f"{args.outfile}_t{tendon}.csv")
        best = max(trajectory.samples, key=lambda s: s.beta)
        rows.append((tendon, best.beta, best.t, best.phi))
    lines = ["tendon,max_beta_deg,t_at_max_s,phi_at_max_deg"]
    lines += [f"{t},{repr(b)},{repr(tt)},{repr(p)}" for t, b, tt, p in rows]
    write_csv("\n".join(lines) + "\n", f"{args.outfile}_maxangles.csv")
    print("tendon  max bend (deg)  azimuth (deg)")
    for t, b, _, p in rows:
        print(f"{t:>6}  {b:>14.2f}  {p:>13.1f}")
    print(f"wrote {args.outfile}_t1..6.csv and {args.outfile}_maxangles.csv")
    return 0


def format_bend_report(report) -> str:
    """Human-readable theoretical maxima table with both aggregate sums."""
    lines = ["theoretical maximum bend angles (deg)",
             "section   lateral  sagittal"]
    for section, lateral, sagittal in report.per_section:
        lines.append(f"{section:>7}   {lateral:>7.2f}  {sagittal:>8.2f}")
    lines.append(f"{'sum':>7}   {report.summed_lateral:>7.2f}  "
                 f"{report.summed_sagittal:>8.2f}")
    mixed = (report.per_section[0][2]
             + sum(row[1] for row in report.per_section[1:]))
    lines.append(
        "note: the two sums assume every movable section reaches the same "
        "directional extreme; mixed per-section assignments are also "
        f"possible (e.g. sagittal for section 2, lateral for the rest: "
        f"{mixed:.2f} deg), so aggregate figures depend on that mapping and "
        "both consistent sums are reported.")
    return "\n".join(lines) + "\n"


def _cmd_report(args) -> int:
    doc = load_design_document(args.infile)
    text = format_bend_report(theoretical_bend_report(doc.design))
    _emit(text, args.outfile, lambda t, p: write_csv(t, p))
    if args.outfile:
        print(f"wrote {args.outfile}")
    return 0


_HANDLERS = {
    "design": _cmd_design,
    "validate": _cmd_validate,
    "pattern": _cmd_pattern,
    "schedule": _cmd_schedule,
    "simulate": _cmd_simulate,
    "workspace": _cmd_workspace,
    "report": _cmd_report,
}


def cli_dispatch(argv) -> int:
    """Run one command; returns the process exit status."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code is None else int(exc.code)
    try:
        return _HANDLERS[args.command](args)
    except KwristError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(cli_dispatch(sys.argv[1:]))
