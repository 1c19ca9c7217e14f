"""CSV serialisation of trajectories and schedules.

Fixed headers, shortest round-trip float formatting (numbers survive a
parse exactly), newline "\n".
"""

from __future__ import annotations

from ..errors import NonPositiveValue, ParseError
from ..schedules import Schedule
from .files import atomic_write_text

TRAJECTORY_HEADER = "t,x,y,z,beta,phi,l1,l2,l3,l4,l5,l6"
SCHEDULE_HEADER = "t,c1,c2,c3,c4,c5,c6"


def _row(values) -> str:
    return ",".join(repr(float(v)) for v in values)


def export_trajectory(trajectory) -> str:
    """One row per sample: time, marker position, stack bend, tendon lengths."""
    lines = [TRAJECTORY_HEADER]
    for s in trajectory.samples:
        lines.append(_row([s.t, s.marker[0], s.marker[1], s.marker[2],
                           s.beta, s.phi, *s.tendon_lengths]))
    return "\n".join(lines) + "\n"


def export_schedule(schedule: Schedule, samples_per_second: float) -> str:
    """Motor-command table: channel contractions sampled at a fixed rate,
    endpoints included."""
    if not samples_per_second > 0.0:
        raise NonPositiveValue("sample rate must be positive")
    n = int(round(schedule.duration * samples_per_second))
    lines = [SCHEDULE_HEADER]
    for j in range(n + 1):
        t = j / samples_per_second
        lines.append(_row([t, *schedule.values_at(t)]))
    return "\n".join(lines) + "\n"


def _parse_rows(text: str, header: str, label: str):
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != header:
        raise ParseError(f"{label}: expected header {header!r}")
    n_cols = len(header.split(","))
    rows = []
    for ln in lines[1:]:
        parts = ln.split(",")
        if len(parts) != n_cols:
            raise ParseError(f"{label}: expected {n_cols} columns, got {len(parts)}")
        try:
            rows.append(tuple(float(p) for p in parts))
        except ValueError as exc:
            raise ParseError(f"{label}: non-numeric value ({exc})") from exc
    return rows


def parse_trajectory_csv(text: str) -> list:
    """Rows of (t, x, y, z, beta, phi, l1..l6) as float tuples."""
    return _parse_rows(text, TRAJECTORY_HEADER, "trajectory")


def parse_schedule_csv(text: str) -> Schedule:
    """Rebuild a schedule from a sampled table (piecewise linear through the
    sample points)."""
    rows = _parse_rows(text, SCHEDULE_HEADER, "schedule")
    if len(rows) < 2:
        raise ParseError("schedule: need at least 2 sample rows")
    duration = rows[-1][0]
    channels = tuple(tuple((row[0], row[1 + k]) for row in rows)
                     for k in range(6))
    return Schedule(duration, channels)


def write_csv(text: str, path) -> None:
    atomic_write_text(path, text)
