"""Tendon actuation: movement state table and timed contraction schedules.

Six tendons route along the valley columns; a wrist movement is encoded as
a pulled/loosened state per tendon, with a key-action subset that suffices
on its own.  Timed protocols turn those states into piecewise-linear
contraction channels: triangle pulls of 7 s up / 7 s down for the basic
movements and workspace sweep, a two-phase dart-throw pattern, and a
six-channel phased overlap for circumduction.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .errors import NonPositiveValue, TimeVaryingMode, UnsupportedMode

PULLED = "P"
LOOSENED = "L"

DEFAULT_PULL_SECONDS = 7.0
DEFAULT_LOOSEN_SECONDS = 7.0
#: Circumduction: each channel pulls 7 s, loosens 14 s, phased 3.5 s apart.
CIRCUMDUCTION_PULL_SECONDS = 7.0
CIRCUMDUCTION_LOOSEN_SECONDS = 14.0
CIRCUMDUCTION_PHASE_SECONDS = 3.5


class MotionMode(str, enum.Enum):
    EXTENSION = "extension"
    FLEXION = "flexion"
    RADIAL_DEVIATION = "radial-deviation"
    ULNAR_DEVIATION = "ulnar-deviation"
    DTM = "dtm"
    DTM_MIRROR = "dtm-mirror"
    CIRCUMDUCTION = "circumduction"
    WORKSPACE_SWEEP = "workspace-sweep"


@dataclass(frozen=True)
class TendonStateVector:
    """Pulled/loosened state for tendons 1..6."""

    states: tuple

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        if len(self.states) != 6:
            raise NonPositiveValue("a state vector holds exactly 6 entries")
        for s in self.states:
            if s not in (PULLED, LOOSENED):
                raise NonPositiveValue(f"states must be 'P' or 'L', got {s!r}")

    def pulled(self) -> frozenset:
        return frozenset(i + 1 for i, s in enumerate(self.states) if s == PULLED)


def _vec(*states) -> TendonStateVector:
    return TendonStateVector(states)


# Movement table: per mode, the phases of (tendon states, key action tendons).
# The dart-throw mirror rows follow from relabeling under the reflection that
# swaps tendon pairs 1<->4, 2<->3, 5<->6.
_MOVEMENT_TABLE = {
    MotionMode.EXTENSION: ((_vec("L", "P", "P", "L", "L", "L"), frozenset({2, 3})),),
    MotionMode.FLEXION: ((_vec("L", "L", "L", "L", "P", "P"), frozenset({5, 6})),),
    MotionMode.RADIAL_DEVIATION: ((_vec("P", "P", "L", "L", "L", "P"), frozenset({1})),),
    MotionMode.ULNAR_DEVIATION: ((_vec("L", "L", "P", "P", "P", "L"), frozenset({4})),),
    MotionMode.DTM: ((_vec("P", "P", "P", "L", "L", "L"), frozenset({2})),
                     (_vec("L", "L", "L", "P", "P", "P"), frozenset({5}))),
    MotionMode.DTM_MIRROR: ((_vec("L", "P", "P", "P", "L", "L"), frozenset({3})),
                            (_vec("P", "L", "L", "L", "P", "P"), frozenset({6}))),
}


def mode_tendon_states(mode: MotionMode) -> list:
    """Tendon state vector(s) of a movement; two rows for the dart-throw
    modes, one otherwise.  Time-varying modes have no static row."""
    mode = MotionMode(mode)
    if mode not in _MOVEMENT_TABLE:
        raise TimeVaryingMode(f"{mode.value} has no static tendon-state row")
    return [row[0] for row in _MOVEMENT_TABLE[mode]]


def key_action_tendons(mode: MotionMode) -> list:
    """Key-action tendon set per movement phase (list of frozensets)."""
    mode = MotionMode(mode)
    if mode is MotionMode.CIRCUMDUCTION:
        return [frozenset({1, 2, 3, 4, 5, 6})]
    if mode not in _MOVEMENT_TABLE:
        raise TimeVaryingMode(f"{mode.value} has no key-action tendon entry")
    return [row[1] for row in _MOVEMENT_TABLE[mode]]


# --- schedules ---------------------------------------------------------------------


@dataclass(frozen=True)
class Schedule:
    """Six piecewise-linear contraction channels over [0, duration].

    Each channel is a tuple of (time, value) breakpoints with strictly
    increasing times and values in [0, 1]; evaluation interpolates linearly
    and clamps outside the breakpoint span.
    """

    duration: float
    channels: tuple

    def __post_init__(self):
        object.__setattr__(self, "channels",
                           tuple(tuple((float(t), float(v)) for t, v in ch)
                                 for ch in self.channels))
        if len(self.channels) != 6:
            raise NonPositiveValue("a schedule holds exactly 6 channels")
        if not self.duration > 0.0:
            raise NonPositiveValue("schedule duration must be positive")
        for ch in self.channels:
            if len(ch) < 2:
                raise NonPositiveValue("each channel needs at least 2 breakpoints")
            for (t0, v0), (t1, v1) in zip(ch, ch[1:]):
                if not t1 > t0:
                    raise NonPositiveValue("breakpoint times must strictly increase")
            for t, v in ch:
                if not 0.0 <= v <= 1.0:
                    raise NonPositiveValue(f"contraction {v} outside [0, 1]")
                if t < 0.0 or t > self.duration + 1e-9:
                    raise NonPositiveValue(f"breakpoint time {t} outside schedule")

    def value(self, channel: int, t: float) -> float:
        """Contraction of channel 0..5 at time t."""
        ch = self.channels[channel]
        if t <= ch[0][0]:
            return ch[0][1]
        if t >= ch[-1][0]:
            return ch[-1][1]
        for (t0, v0), (t1, v1) in zip(ch, ch[1:]):
            if t0 <= t <= t1:
                return v0 + (v1 - v0) * (t - t0) / (t1 - t0)
        return ch[-1][1]

    def values_at(self, t: float) -> tuple:
        return tuple(self.value(k, t) for k in range(6))


def _zero_channel(duration: float) -> tuple:
    return ((0.0, 0.0), (duration, 0.0))


def _triangle_channel(duration, start, pull, loosen, peak) -> tuple:
    """Zero outside [start, start+pull+loosen], linear up then down inside."""
    points = [(0.0, 0.0)]
    if start > 0.0:
        points.append((start, 0.0))
    points.append((start + pull, peak))
    end = start + pull + loosen
    points.append((end, 0.0))
    if end < duration:
        points.append((duration, 0.0))
    return tuple(points)


def _check_contraction(max_contraction: float) -> None:
    if not 0.0 < max_contraction <= 1.0:
        raise NonPositiveValue(
            f"max contraction must lie in (0, 1], got {max_contraction}")


def make_basic_schedule(mode: MotionMode, pull_seconds: float = DEFAULT_PULL_SECONDS,
                        loosen_seconds: float = DEFAULT_LOOSEN_SECONDS,
                        max_contraction: float = 1.0) -> Schedule:
    """Single triangle pull of a basic movement's key-action tendons."""
    mode = MotionMode(mode)
    basic = (MotionMode.EXTENSION, MotionMode.FLEXION,
             MotionMode.RADIAL_DEVIATION, MotionMode.ULNAR_DEVIATION)
    if mode not in basic:
        raise UnsupportedMode(f"{mode.value} is not a basic movement")
    _check_contraction(max_contraction)
    if not pull_seconds > 0.0 or not loosen_seconds > 0.0:
        raise NonPositiveValue("pull and loosen durations must be positive")
    duration = pull_seconds + loosen_seconds
    kat = key_action_tendons(mode)[0]
    channels = []
    for k in range(1, 7):
        if k in kat:
            channels.append(_triangle_channel(duration, 0.0, pull_seconds,
                                              loosen_seconds, max_contraction))
        else:
            channels.append(_zero_channel(duration))
    return Schedule(duration, tuple(channels))


def make_workspace_schedule(pull_seconds: float = DEFAULT_PULL_SECONDS,
                            loosen_seconds: float = DEFAULT_LOOSEN_SECONDS,
                            max_contraction: float = 1.0) -> Schedule:
    """Tendons 1..6 pulled one after another, each with its own triangle."""
    _check_contraction(max_contraction)
    if not pull_seconds > 0.0 or not loosen_seconds > 0.0:
        raise NonPositiveValue("pull and loosen durations must be positive")
    slot = pull_seconds + loosen_seconds
    duration = 6.0 * slot
    channels = [
        _triangle_channel(duration, (k - 1) * slot, pull_seconds, loosen_seconds,
                          max_contraction)
        for k in range(1, 7)
    ]
    return Schedule(duration, tuple(channels))


def make_dtm_schedule(mirror: bool, pull_seconds: float = DEFAULT_PULL_SECONDS,
                      loosen_seconds: float = DEFAULT_LOOSEN_SECONDS,
                      max_contraction: float = 1.0) -> Schedule:
    """Dart-throw pattern: one key tendon's triangle, then the other's.

    mirror=False drives tendons 2 then 5; mirror=True drives 3 then 6.
    """
    _check_contraction(max_contraction)
    slot = pull_seconds + loosen_seconds
    duration = 2.0 * slot
    first, second = (3, 6) if mirror else (2, 5)
    channels = []
    for k in range(1, 7):
        if k == first:
            channels.append(_triangle_channel(duration, 0.0, pull_seconds,
                                              loosen_seconds, max_contraction))
        elif k == second:
            channels.append(_triangle_channel(duration, slot, pull_seconds,
                                              loosen_seconds, max_contraction))
        else:
            channels.append(_zero_channel(duration))
    return Schedule(duration, tuple(channels))


def make_circumduction_schedule(max_contraction: float = 1.0) -> Schedule:
    """Phased overlap of all six tendons.

    Channel k starts at 3.5*(k-1) s, pulls for 7 s, loosens for 14 s; the
    overlaps hand the bend from each sector to the next without passing
    through neutral.
    """
    _check_contraction(max_contraction)
    pull = CIRCUMDUCTION_PULL_SECONDS
    loosen = CIRCUMDUCTION_LOOSEN_SECONDS
    phase = CIRCUMDUCTION_PHASE_SECONDS
    duration = 5.0 * phase + pull + loosen
    channels = [
        _triangle_channel(duration, (k - 1) * phase, pull, loosen, max_contraction)
        for k in range(1, 7)
    ]
    return Schedule(duration, tuple(channels))


def schedule_for_mode(mode: MotionMode, max_contraction: float = 1.0) -> Schedule:
    """Default schedule of any motion mode (CLI convenience)."""
    mode = MotionMode(mode)
    if mode is MotionMode.WORKSPACE_SWEEP:
        return make_workspace_schedule(max_contraction=max_contraction)
    if mode is MotionMode.CIRCUMDUCTION:
        return make_circumduction_schedule(max_contraction=max_contraction)
    if mode is MotionMode.DTM:
        return make_dtm_schedule(False, max_contraction=max_contraction)
    if mode is MotionMode.DTM_MIRROR:
        return make_dtm_schedule(True, max_contraction=max_contraction)
    return make_basic_schedule(mode, max_contraction=max_contraction)
