"""Linguistic rule table that picks the host's operating mode."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

from .errors import ValidationError


class Mode(enum.Enum):
    NO_ACCELERATION = "NoAcceleration"
    ACCELERATION = "Acceleration"
    WARNING = "Warning"
    CCM_FORWARD = "CcmForward"
    CCM_REVERSE = "CcmReverse"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class ThresholdConfig:
    """Predefined gaps in metres.

    ``equality_tolerance`` is the guard band used for the rows that demand
    equality; it applies to metres and m/s alike.
    """

    d_pr: float = 25.0
    d_spf: float = 25.0
    d_1pf: float = 35.0
    equality_tolerance: float = 0.5

    def __post_init__(self):
        if not (0 < self.d_spf < self.d_1pf):
            raise ValidationError(f"need 0 < d_spf < d_1pf, got {self.d_spf}, {self.d_1pf}")
        if not self.d_pr > 0:
            raise ValidationError(f"d_pr must be > 0, got {self.d_pr}")
        if not self.equality_tolerance > 0:
            raise ValidationError("equality_tolerance must be > 0")


@dataclass(frozen=True)
class SituationSnapshot:
    """What the decision layer sees on one tick.

    ``None`` for a speed means the value is unknown.  Distances are only
    meaningful when the matching ``*_present`` flag is set.
    """

    front_present: bool
    front_distance: Optional[float]
    front_speed: Optional[float]
    rear_present: bool
    rear_distance: Optional[float]
    rear_speed: Optional[float]
    host_speed: float


def _check(s: SituationSnapshot) -> None:
    for present, dist, name in (
        (s.front_present, s.front_distance, "front"),
        (s.rear_present, s.rear_distance, "rear"),
    ):
        if present and dist is None:
            raise ValidationError(f"{name} vehicle present without a distance")
        if dist is not None and (math.isnan(dist) or dist < 0):
            raise ValidationError(f"{name} distance must be >= 0, got {dist}")
    if not math.isfinite(s.host_speed):
        raise ValidationError(f"host speed must be finite, got {s.host_speed}")


def _faster(speed: Optional[float], host: float) -> bool:
    return speed is not None and speed > host


def _near(a: Optional[float], b: float, tol: float) -> bool:
    return a is not None and abs(a - b) <= tol


def select_mode(s: SituationSnapshot, t: ThresholdConfig = ThresholdConfig()) -> Mode:
    """Map a snapshot to a mode.

    Rows are tried in the order CcmForward, Acceleration, Warning,
    NoAcceleration.  A snapshot that matches none of them yields Warning.
    CcmReverse is never returned here; parking requests it directly.
    """
    _check(s)
    tol = t.equality_tolerance
    vh = s.host_speed
    front = s.front_present
    rear = s.rear_present
    d_f = s.front_distance
    d_r = s.rear_distance

    if (
        front
        and rear
        and t.d_spf <= d_f <= t.d_1pf
        and s.front_speed is not None
        and s.front_speed <= vh
        and d_r < t.d_pr
        and _faster(s.rear_speed, vh)
    ):
        return Mode.CCM_FORWARD

    if not front and rear and d_r <= t.d_pr and _faster(s.rear_speed, vh):
        return Mode.ACCELERATION

    if (
        front
        and rear
        and _near(d_f, t.d_1pf, tol)
        and _near(s.front_speed, vh, tol)
        and _near(d_r, t.d_pr, tol)
        and _near(s.rear_speed, vh, tol)
    ):
        return Mode.WARNING

    if not front and rear and d_r > t.d_pr:
        return Mode.NO_ACCELERATION

    return Mode.WARNING
