"""Sigmoidal lane-change and reverse parking paths.

The lateral profile is a logistic curve in the running x-position,
``y = A / (1 + b * exp(a * x))``, shifted by its own value at ``x = 0`` so
every path starts at ``y = 0``.  For a lane change ``a < 0`` and ``x = K t``;
for parking ``a > 0`` and ``x = -K t``.  Positive y is the right-hand side.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import InfeasibleGapError, ValidationError

DEFAULT_SETTLE_X = 20.0


class Side(enum.Enum):
    LEFT = "LSD"
    RIGHT = "RSD"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class SigmoidParams:
    a: float = -0.4
    b: float = 50.0
    y_max: float = 3.7
    K: float = 2.0

    def __post_init__(self):
        for name in ("a", "b", "y_max", "K"):
            if not math.isfinite(getattr(self, name)):
                raise ValidationError(f"sigmoid {name} must be finite")
        if not self.b > 0:
            raise ValidationError(f"b must be > 0, got {self.b}")
        if not self.y_max > 0:
            raise ValidationError(f"y_max must be > 0, got {self.y_max}")
        if not self.K > 0:
            raise ValidationError(f"K must be > 0, got {self.K}")
        if self.a == 0:
            raise ValidationError("a must be non-zero")

    def require_lane_change(self) -> None:
        if not self.a < 0:
            raise ValidationError(f"lane change needs a < 0, got a={self.a}")

    def require_parking(self) -> None:
        if not self.a > 0:
            raise ValidationError(f"parking needs a > 0, got a={self.a}")


@dataclass(frozen=True)
class LateralOffset:
    off_front: float
    off_host: float

    @property
    def off(self) -> float:
        return compute_offset(self.off_front, self.off_host)


@dataclass(frozen=True)
class PathSample:
    t: float
    x: float
    y: float


@dataclass(frozen=True)
class ParkingClearances:
    x_sensed: float
    x_predefined: float
    y_parked: float
    vehicle_width: float

    @property
    def x_max(self) -> float:
        return self.x_sensed - self.x_predefined

    @property
    def y_max_park(self) -> float:
        return self.y_parked + self.vehicle_width / 2.0


def compute_offset(off_front: float, off_host: float) -> float:
    if not (math.isfinite(off_front) and math.isfinite(off_host)):
        raise ValidationError("offsets must be finite")
    return off_front - off_host


def lateral_x(t: float, p: SigmoidParams) -> float:
    if t < 0:
        raise ValidationError(f"t must be >= 0, got {t}")
    return p.K * t


def _logistic(amplitude: float, x: float, p: SigmoidParams) -> float:
    denom = 1.0 + p.b * math.exp(p.a * x)
    if denom == 0:
        raise ValidationError("sigmoid denominator vanished")
    return amplitude / denom


def lateral_y(x: float, p: SigmoidParams, off: float, side: Side) -> float:
    """Lateral position at running x-position ``x`` (metres)."""
    if not (math.isfinite(x) and math.isfinite(off)):
        raise ValidationError("x and off must be finite")
    if x < 0:
        raise ValidationError(f"x must be >= 0, got {x}")
    if side is Side.RIGHT:
        amp = p.y_max + off
        return _logistic(amp, x, p) - amp / (1.0 + p.b)
    amp = p.y_max - off
    return -_logistic(amp, x, p) + amp / (1.0 + p.b)


def absolute_target(p: SigmoidParams, off: float, side: Side) -> float:
    """Lane-centre y the maneuver is heading for."""
    return p.y_max + off if side is Side.RIGHT else -(p.y_max - off)


def settling_error(
    p: SigmoidParams, off: float, side: Side, x_settle: float = DEFAULT_SETTLE_X
) -> tuple[float, float]:
    """Return ``(target, target - y(x_settle))``.

    The error is negative on the left and positive on the right whenever the
    path has not yet reached its target.
    """
    if not x_settle > 0:
        raise ValidationError(f"x_settle must be > 0, got {x_settle}")
    target = absolute_target(p, off, side)
    return target, target - lateral_y(x_settle, p, off, side)


def residual_bound(p: SigmoidParams, off: float, x_settle: float) -> float:
    amp = p.y_max + abs(off)
    return amp / (1.0 + p.b) + amp * p.b * math.exp(p.a * x_settle)


def _time_grid(t_end: float, dt: float) -> list[float]:
    if not dt > 0:
        raise ValidationError(f"dt must be > 0, got {dt}")
    if t_end < dt:
        raise ValidationError(f"t_end ({t_end}) must be >= dt ({dt})")
    n = int(math.floor(t_end / dt + 1e-9))
    return [i * dt for i in range(n + 1)]


def generate_lane_change(
    p: SigmoidParams, off: float, side: Side, t_end: float, dt: float
) -> list[PathSample]:
    p.require_lane_change()
    out = []
    for t in _time_grid(t_end, dt):
        x = lateral_x(t, p)
        out.append(PathSample(t, x, lateral_y(x, p, off, side)))
    return out


def parking_y(x: float, p: SigmoidParams) -> float:
    """Reverse-path lateral position at (non-positive) x."""
    if x > 0:
        raise ValidationError(f"parking x must be <= 0, got {x}")
    return -_logistic(p.y_max, x, p) + p.y_max / (1.0 + p.b)


def parking_residual(x: float, p: SigmoidParams) -> float:
    """Closed-form gap between ``-y_max`` and the parking path at ``x``."""
    e = p.b * math.exp(p.a * x)
    return p.y_max * e / (1.0 + e) + p.y_max / (1.0 + p.b)


def generate_parking_path(p: SigmoidParams, t_end: float, dt: float) -> list[PathSample]:
    p.require_parking()
    out = []
    for t in _time_grid(t_end, dt):
        x = -p.K * t
        out.append(PathSample(t, x, parking_y(x, p)))
    return out


def parking_limits(x_s: float, x_pd: float, y_sp: float, w_p: float) -> ParkingClearances:
    """Usable gap from the sensed parking-space geometry."""
    if not x_pd >= 0:
        raise ValidationError(f"x_pd must be >= 0, got {x_pd}")
    if not x_s > x_pd:
        raise InfeasibleGapError(f"no usable gap: x_s={x_s} <= x_pd={x_pd}")
    if not y_sp >= 0:
        raise ValidationError(f"y_sp must be >= 0, got {y_sp}")
    if not w_p > 0:
        raise ValidationError(f"vehicle width must be > 0, got {w_p}")
    return ParkingClearances(x_s, x_pd, y_sp, w_p)
