"""Radar observables to target position and velocity.

Position follows ``x = R cos(theta)``, ``y = R sin(theta)`` while the velocity
split follows ``v_x = V sin(theta)``, ``v_y = V cos(theta)``.  The two
conventions are deliberately kept as printed; callers that need a single
frame must account for the swap themselves.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

from .errors import ValidationError

SPEED_OF_LIGHT = 299_792_458.0
DEFAULT_CARRIER_HZ = 76.5e9

Role = Literal["front", "rear"]


def _require_finite(*values: float) -> None:
    for v in values:
        if not math.isfinite(v):
            raise ValidationError(f"non-finite value: {v!r}")


@dataclass(frozen=True)
class RadarReturn:
    """One simulated observation of a single target."""

    delay: float
    bearing: float
    freq_received: float
    freq_transmitted: float

    def __post_init__(self):
        _require_finite(self.delay, self.bearing, self.freq_received, self.freq_transmitted)
        if self.delay < 0:
            raise ValidationError(f"delay must be >= 0, got {self.delay}")
        if not (-math.pi / 2 < self.bearing <= math.pi / 2):
            raise ValidationError(f"bearing {self.bearing} outside (-pi/2, pi/2]")
        if self.freq_received <= 0 or self.freq_transmitted <= 0:
            raise ValidationError("frequencies must be strictly positive")


@dataclass(frozen=True)
class CartesianPoint:
    x: float
    y: float

    def __post_init__(self):
        _require_finite(self.x, self.y)


@dataclass(frozen=True)
class SensorConstants:
    propagation_speed: float = SPEED_OF_LIGHT
    carrier_frequency: float = DEFAULT_CARRIER_HZ

    def __post_init__(self):
        if not (self.propagation_speed > 0 and self.carrier_frequency > 0):
            raise ValidationError("propagation speed and carrier frequency must be > 0")


@dataclass(frozen=True)
class TargetKinematics:
    position: CartesianPoint
    speed: float
    velocity_x: float
    velocity_y: float
    role: Role

    def __post_init__(self):
        if self.role not in ("front", "rear"):
            raise ValidationError(f"role must be 'front' or 'rear', got {self.role!r}")


def range_from_delay(ret: RadarReturn, k: SensorConstants) -> float:
    """Round-trip delay to one-way range, ``c * tau / 2``."""
    if ret.delay < 0:
        raise ValidationError(f"negative delay {ret.delay}")
    return k.propagation_speed * ret.delay / 2.0


def polar_to_cartesian(range_m: float, bearing: float) -> CartesianPoint:
    if range_m < 0:
        raise ValidationError(f"negative range {range_m}")
    return CartesianPoint(range_m * math.cos(bearing), range_m * math.sin(bearing))


def euclidean_distance(target: CartesianPoint, sensor: CartesianPoint) -> float:
    return math.hypot(target.x - sensor.x, target.y - sensor.y)


def doppler_shift(ret: RadarReturn) -> float:
    return ret.freq_received - ret.freq_transmitted


def relative_velocity(f_doppler: float, k: SensorConstants) -> float:
    """Doppler shift to relative speed, ``c * f_D / (2 f_c)``."""
    if k.carrier_frequency == 0:
        raise ValidationError("carrier frequency must be non-zero")
    return k.propagation_speed * f_doppler / (2.0 * k.carrier_frequency)


def target_velocity(host_speed: float, rel_velocity: float) -> float:
    return host_speed + rel_velocity


def velocity_components(speed: float, bearing: float) -> tuple[float, float]:
    """Split a target speed into ``(v_x, v_y) = (V sin(theta), V cos(theta))``."""
    return speed * math.sin(bearing), speed * math.cos(bearing)


def decode(
    ret: RadarReturn,
    k: SensorConstants,
    host_speed: float,
    role: Role,
    sensor: CartesianPoint = CartesianPoint(0.0, 0.0),
) -> TargetKinematics:
    """Run the full observable chain for one return.

    The decoded position is expressed in the sensor's own frame, offset by
    ``sensor``.
    """
    rng = range_from_delay(ret, k)
    local = polar_to_cartesian(rng, ret.bearing)
    pos = CartesianPoint(local.x + sensor.x, local.y + sensor.y)
    v_r = relative_velocity(doppler_shift(ret), k)
    v_t = target_velocity(host_speed, v_r)
    vx, vy = velocity_components(v_t, ret.bearing)
    return TargetKinematics(pos, v_t, vx, vy, role)


def synthesize_return(
    local: CartesianPoint,
    relative_speed: float,
    k: SensorConstants,
) -> RadarReturn:
    """Build the return a target at ``local`` (sensor frame) would produce.

    Inverse of :func:`decode` for targets inside the field of view.  A target
    exactly at the sensor gets bearing 0.  ``relative_speed`` is the target
    speed minus host speed; positive values raise the received frequency.
    """
    rng = math.hypot(local.x, local.y)
    bearing = math.atan2(local.y, local.x) if rng > 0 else 0.0
    if bearing == -math.pi / 2:
        raise ValidationError("target lies on the excluded -pi/2 bearing edge")
    delay = 2.0 * rng / k.propagation_speed
    f_t = k.carrier_frequency
    f_r = f_t + 2.0 * k.carrier_frequency * relative_speed / k.propagation_speed
    return RadarReturn(delay=delay, bearing=bearing, freq_received=f_r, freq_transmitted=f_t)
