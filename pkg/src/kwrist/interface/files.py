"""Measurement and design documents (JSON, explicit units in key names).

Documents are written with a fixed key order and Python's shortest
round-trip float formatting, so identical inputs always produce
byte-identical files, and numeric values survive a save/load cycle exactly.
File writes go through a write-temp-then-rename so readers never see a
partial document.
"""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass

from .. import __version__
from ..errors import ParseError, SchemaViolation
from ..sizing import (MeasurementSet, OrthosisDesign, SectionMeasurement,
                      design_orthosis)

_MEASUREMENT_KEYS = {"alpha_deg", "tolerance_mm", "sections"}
_SECTION_KEYS = {"c_top_mm", "c_bottom_mm", "h_mm"}
_UNIT_KEYS = {"kind", "a1_mm", "a2_mm", "b_mm", "alpha_deg", "chirality"}
_DOCUMENT_KEYS = {"format", "provenance", "measurements", "units"}
DESIGN_FORMAT = "kwrist-design/1"

#: Loaded designs must match a re-run of the sizing pipeline this closely (mm).
_REPRODUCIBILITY_TOL = 1e-9


def atomic_write_text(path, text: str) -> None:
    """Write text via a temp file in the target directory plus rename."""
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _read_json(source):
    if isinstance(source, dict):
        return source
    if hasattr(source, "read"):
        text = source.read()
    else:
        try:
            with open(source, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ParseError(f"cannot read {source}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc


def _require_number(obj, key, context):
    if key not in obj:
        raise SchemaViolation(f"{context}: missing key {key!r}")
    value = obj[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaViolation(f"{context}: {key!r} must be a number, got {value!r}")
    return float(value)


def _reject_unknown(obj, allowed, context):
    unknown = set(obj) - allowed
    if unknown:
        raise SchemaViolation(f"{context}: unknown keys {sorted(unknown)}")


# --- measurements -------------------------------------------------------------------


def load_measurements(source) -> MeasurementSet:
    """Read a measurement file (path, file object, or parsed dict).

    Optional top-level keys alpha_deg / tolerance_mm fall back to the sizing
    defaults (60 deg, 15 mm); exactly five sections are required and
    adjacent sections must share a circumference.
    """
    data = _read_json(source)
    if not isinstance(data, dict):
        raise SchemaViolation("measurement document must be a JSON object")
    _reject_unknown(data, _MEASUREMENT_KEYS, "measurements")
    sections_raw = data.get("sections")
    if not isinstance(sections_raw, list):
        raise SchemaViolation("measurements: 'sections' must be a list")
    if len(sections_raw) != 5:
        raise SchemaViolation(
            f"measurements: expected 5 sections, got {len(sections_raw)}")
    sections = []
    for idx, sec in enumerate(sections_raw, start=1):
        if not isinstance(sec, dict):
            raise SchemaViolation(f"section {idx}: must be a JSON object")
        _reject_unknown(sec, _SECTION_KEYS, f"section {idx}")
        sections.append(SectionMeasurement(
            c_top=_require_number(sec, "c_top_mm", f"section {idx}"),
            c_bottom=_require_number(sec, "c_bottom_mm", f"section {idx}"),
            height=_require_number(sec, "h_mm", f"section {idx}")))
    kwargs = {}
    if "tolerance_mm" in data:
        kwargs["tolerance"] = _require_number(data, "tolerance_mm", "measurements")
    if "alpha_deg" in data:
        kwargs["alpha"] = _require_number(data, "alpha_deg", "measurements")
    return MeasurementSet(tuple(sections), **kwargs)


def measurements_to_dict(measurements: MeasurementSet) -> dict:
    return {
        "alpha_deg": measurements.alpha,
        "tolerance_mm": measurements.tolerance,
        "sections": [
            {"c_top_mm": s.c_top, "c_bottom_mm": s.c_bottom, "h_mm": s.height}
            for s in measurements.sections
        ],
    }


def save_measurements(measurements: MeasurementSet, path) -> None:
    atomic_write_text(path, json.dumps(measurements_to_dict(measurements),
                                       indent=2) + "\n")


# --- design documents ---------------------------------------------------------------


@dataclass(frozen=True)
class DesignDocument:
    """A design bundled with the measurements that produced it and a
    provenance block (tool version plus the sizing parameters used)."""

    measurements: MeasurementSet
    design: OrthosisDesign
    provenance: dict


def make_design_document(measurements: MeasurementSet) -> DesignDocument:
    design = design_orthosis(measurements)
    provenance = {
        "tool": "kwrist",
        "version": __version__,
        "parameters": {
            "tolerance_mm": measurements.tolerance,
            "alpha_deg": measurements.alpha,
        },
    }
    return DesignDocument(measurements, design, provenance)


def design_document_to_dict(doc: DesignDocument) -> dict:
    return {
        "format": DESIGN_FORMAT,
        "provenance": doc.provenance,
        "measurements": measurements_to_dict(doc.measurements),
        "units": [
            {
                "kind": unit.kind.value,
                "a1_mm": unit.a1,
                "a2_mm": unit.a2,
                "b_mm": unit.b,
                "alpha_deg": unit.alpha,
                "chirality": unit.chirality.value,
            }
            for unit in doc.design.units
        ],
    }


def save_design_document(doc: DesignDocument, path) -> None:
    atomic_write_text(path, json.dumps(design_document_to_dict(doc), indent=2) + "\n")


def load_design_document(source) -> DesignDocument:
    """Read a design document and verify it is reproducible.

    The sizing pipeline is re-run on the embedded measurements; stored units
    must match the result to 1e-9 mm, which rejects hand-edited documents
    whose design no longer follows from the measurements.
    """
    data = _read_json(source)
    if not isinstance(data, dict):
        raise SchemaViolation("design document must be a JSON object")
    _reject_unknown(data, _DOCUMENT_KEYS, "design document")
    if data.get("format") != DESIGN_FORMAT:
        raise SchemaViolation(
            f"design document: expected format {DESIGN_FORMAT!r}, "
            f"got {data.get('format')!r}")
    measurements = load_measurements(data.get("measurements", {}))
    units_raw = data.get("units")
    if not isinstance(units_raw, list) or len(units_raw) != 5:
        raise SchemaViolation("design document: 'units' must list 5 units")

    rebuilt = design_orthosis(measurements)
    for idx, (stored, unit) in enumerate(zip(units_raw, rebuilt.units), start=1):
        if not isinstance(stored, dict):
            raise SchemaViolation(f"unit {idx}: must be a JSON object")
        _reject_unknown(stored, _UNIT_KEYS, f"unit {idx}")
        mismatches = []
        if stored.get("kind") != unit.kind.value:
            mismatches.append("kind")
        if stored.get("chirality") != unit.chirality.value:
            mismatches.append("chirality")
        for key, want in (("a1_mm", unit.a1), ("a2_mm", unit.a2),
                          ("b_mm", unit.b), ("alpha_deg", unit.alpha)):
            got = _require_number(stored, key, f"unit {idx}")
            if abs(got - want) > _REPRODUCIBILITY_TOL:
                mismatches.append(key)
        if mismatches:
            raise SchemaViolation(
                f"unit {idx} is not reproducible from the measurements "
                f"(fields {mismatches}); regenerate the document")
    provenance = data.get("provenance")
    if not isinstance(provenance, dict):
        raise SchemaViolation("design document: missing provenance block")
    return DesignDocument(measurements, rebuilt, provenance)
