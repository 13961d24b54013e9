"""Duty-cycle speed control and the entry kinematics of a curvilinear maneuver."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ValidationError

KMH = 1000.0 / 3600.0
DEFAULT_HOST_MAX_SPEED = 240.0 * KMH


def kmh_to_ms(v: float) -> float:
    return v * KMH


def ms_to_kmh(v: float) -> float:
    return v / KMH


@dataclass(frozen=True)
class DutyCycleState:
    host_duty_prev: float = 0.0
    host_max_speed: float = DEFAULT_HOST_MAX_SPEED

    def __post_init__(self):
        if not 0.0 <= self.host_duty_prev <= 1.0:
            raise ValidationError(f"previous duty {self.host_duty_prev} outside [0, 1]")
        if not self.host_max_speed > 0:
            raise ValidationError(f"host max speed must be > 0, got {self.host_max_speed}")


@dataclass(frozen=True)
class ManeuverKinematics:
    v_x_host: float
    v_y_host: float
    heading: float
    range: float


def _check_rear(rear_speed: float, host_max_speed: float) -> None:
    if not host_max_speed > 0:
        raise ValidationError(f"host max speed must be > 0, got {host_max_speed}")
    if rear_speed < 0:
        raise ValidationError(f"rear speed must be >= 0, got {rear_speed}")
    if rear_speed > host_max_speed:
        raise ValidationError(
            f"rear speed {rear_speed:.3f} m/s exceeds host max speed "
            f"{host_max_speed:.3f} m/s; threat cannot be outrun"
        )


def rear_duty(rear_speed: float, host_max_speed: float) -> float:
    """Rear vehicle speed as a fraction of the host's top speed."""
    _check_rear(rear_speed, host_max_speed)
    return rear_speed / host_max_speed


def host_duty_update(state: DutyCycleState, rear_speed: float) -> float:
    """Next host duty cycle, evaluated in the two-term incremental form.

    The previous duty cancels algebraically, so the result equals
    :func:`host_duty_update_simplified` up to one rounding of ``prev``
    (at most ``ulp(1.0)``); when ``prev`` and the target duty are within a
    factor of two of each other the two agree bitwise.
    """
    _check_rear(rear_speed, state.host_max_speed)
    prev = state.host_duty_prev
    duty = prev + (rear_speed / state.host_max_speed - prev)
    return min(max(duty, 0.0), 1.0)


def host_duty_update_simplified(state: DutyCycleState, rear_speed: float) -> float:
    return rear_duty(rear_speed, state.host_max_speed)


def duty_to_speed(duty: float, host_max_speed: float) -> float:
    if not 0.0 <= duty <= 1.0:
        raise ValidationError(f"duty {duty} outside [0, 1]")
    return duty * host_max_speed


def maneuver_kinematics(
    x: float, y: float, state: DutyCycleState, rear_speed: float
) -> ManeuverKinematics:
    """Velocity split, heading and range for a path point ``(x, y)``.

    Heading is ``atan(x / y)`` and so is measured from the y axis.
    """
    if x == 0 and y == 0:
        raise ValidationError("maneuver point cannot be the origin")
    if y == 0:
        raise ValidationError("heading atan(x/y) is undefined for y == 0")
    _check_rear(rear_speed, state.host_max_speed)
    prev = state.host_duty_prev
    commanded = state.host_max_speed * (prev + (rear_speed / state.host_max_speed - prev))
    heading = math.atan(x / y)
    return ManeuverKinematics(
        v_x_host=commanded * math.sin(heading),
        v_y_host=commanded * math.cos(heading),
        heading=heading,
        range=math.hypot(x, y),
    )
