"""Scenario configuration and its file format.

Scenario files are flat ``key = value`` lines with dotted section names
(a subset of TOML), for example::

    tick = 0.5
    duration = 20
    seed = 42
    noise.sigma = 0.5
    host.speed_kmh = 40
    rear.x = -60
    rear.speed_kmh = 60

Speeds are given in km/h in files and converted to m/s on load.  A ``.json``
file with the same keys (flat or nested) is accepted too.  Unknown keys are
rejected.
"""

from __future__ import annotations

import json
import math
import sys
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any, Mapping, Optional

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from ..control import DEFAULT_HOST_MAX_SPEED, kmh_to_ms
from ..decision import SituationSnapshot, ThresholdConfig
from ..errors import ValidationError
from ..kinematics import SensorConstants
from ..tracking import FilterConfig
from ..trajectory import DEFAULT_SETTLE_X, SigmoidParams, Side

U64_MAX = 2**64 - 1


class ScenarioError(ValidationError):
    """Scenario file could not be parsed or failed validation."""


@dataclass(frozen=True)
class VehicleInit:
    """Initial ground truth of one vehicle (m, m/s); ``y`` is its lateral offset."""

    x: float
    y: float
    speed: float

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.x, self.y, self.speed)):
            raise ValidationError("vehicle initial state must be finite")
        if self.speed < 0:
            raise ValidationError(f"speed must be >= 0, got {self.speed}")


@dataclass(frozen=True)
class ScenarioConfig:
    host: VehicleInit = VehicleInit(0.0, 0.0, kmh_to_ms(40.0))
    host_max_speed: float = DEFAULT_HOST_MAX_SPEED
    front: Optional[VehicleInit] = None
    rear: Optional[VehicleInit] = None
    thresholds: ThresholdConfig = ThresholdConfig()
    filter: Optional[FilterConfig] = None
    sigmoid: SigmoidParams = SigmoidParams()
    sensor: SensorConstants = SensorConstants()
    measurement_noise_sigma: float = 0.0
    tick: float = 0.5
    duration: float = 10.0
    seed: int = 0
    lane_width: float = 3.7
    x_settle: float = DEFAULT_SETTLE_X
    tie_side: Side = Side.RIGHT

    def __post_init__(self):
        if not self.tick > 0:
            raise ValidationError(f"tick must be > 0, got {self.tick}")
        if not self.duration >= self.tick:
            raise ValidationError(f"duration ({self.duration}) must be >= tick ({self.tick})")
        if not self.host_max_speed > 0:
            raise ValidationError("host max speed must be > 0")
        if not self.measurement_noise_sigma >= 0:
            raise ValidationError("measurement noise sigma must be >= 0")
        if not self.lane_width > 0:
            raise ValidationError("lane width must be > 0")
        if not self.x_settle > 0:
            raise ValidationError("x_settle must be > 0")
        if not (isinstance(self.seed, int) and 0 <= self.seed <= U64_MAX):
            raise ValidationError(f"seed must be an unsigned 64-bit integer, got {self.seed!r}")
        self.sigmoid.require_lane_change()
        if self.filter is None:
            object.__setattr__(self, "filter", FilterConfig.default(self.tick))
        elif not math.isclose(self.filter.sample_time, self.tick, rel_tol=1e-12):
            raise ValidationError("filter sample time must equal the simulation tick")

    @property
    def n_ticks(self) -> int:
        return int(math.floor(self.duration / self.tick + 1e-9)) + 1

    def with_seed(self, seed: int) -> "ScenarioConfig":
        return replace(self, seed=seed % (U64_MAX + 1))


# key -> (type, default); defaults of None mean "absent"
_SCHEMA: dict[str, tuple[type, Any]] = {
    "tick": (float, 0.5),
    "duration": (float, 10.0),
    "seed": (int, 0),
    "lane_width": (float, 3.7),
    "noise.sigma": (float, 0.0),
    "host.x": (float, 0.0),
    "host.y": (float, 0.0),
    "host.speed_kmh": (float, 40.0),
    "host.max_speed_kmh": (float, 240.0),
    "front.x": (float, None),
    "front.y": (float, 0.0),
    "front.speed_kmh": (float, None),
    "rear.x": (float, None),
    "rear.y": (float, 0.0),
    "rear.speed_kmh": (float, None),
    "thresholds.d_pr": (float, 25.0),
    "thresholds.d_spf": (float, 25.0),
    "thresholds.d_1pf": (float, 35.0),
    "thresholds.equality_tolerance": (float, 0.5),
    "filter.q": (float, 0.1),
    "filter.r": (float, 0.25),
    "filter.p0": (float, 10.0),
    "sigmoid.a": (float, -0.4),
    "sigmoid.b": (float, 50.0),
    "sigmoid.y_max": (float, 3.7),
    "sigmoid.k": (float, 2.0),
    "maneuver.x_settle": (float, DEFAULT_SETTLE_X),
    "maneuver.tie_side": (str, "RSD"),
    "sensor.propagation_speed": (float, SensorConstants().propagation_speed),
    "sensor.carrier_frequency": (float, SensorConstants().carrier_frequency),
}


def flatten(data: Mapping[str, Any], prefix: str = "") -> dict[str, Any]:
    out: dict[str, Any] = {}
    for key, value in data.items():
        name = f"{prefix}{key}"
        if isinstance(value, Mapping):
            out.update(flatten(value, name + "."))
        else:
            out[name] = value
    return out


def _coerce(key: str, value: Any, kind: type) -> Any:
    if kind is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ScenarioError(f"{key}: expected a number, got {value!r}")
        value = float(value)
        if not math.isfinite(value):
            raise ScenarioError(f"{key}: must be finite")
        return value
    if kind is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ScenarioError(f"{key}: expected an integer, got {value!r}")
        return value
    if not isinstance(value, kind):
        raise ScenarioError(f"{key}: expected {kind.__name__}, got {value!r}")
    return value


def _read_mapping(path: Path) -> dict[str, Any]:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ScenarioError(f"{path}: cannot read scenario file ({exc.strerror or exc})") from exc
    if path.suffix.lower() == ".json":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ScenarioError(f"{path}: line {exc.lineno}: {exc.msg}") from exc
        if not isinstance(data, dict):
            raise ScenarioError(f"{path}: top level must be an object")
    else:
        try:
            data = tomllib.loads(text)
        except tomllib.TOMLDecodeError as exc:
            raise ScenarioError(f"{path}: {exc}") from exc
    return flatten(data)


def _resolve(raw: Mapping[str, Any], schema: Mapping[str, tuple[type, Any]], origin: str) -> dict[str, Any]:
    unknown = sorted(set(raw) - set(schema))
    if unknown:
        raise ScenarioError(f"{origin}: unknown key(s): {', '.join(unknown)}")
    values = {}
    for key, (kind, default) in schema.items():
        values[key] = _coerce(key, raw[key], kind) if key in raw else default
    return values


def _optional_vehicle(v: Mapping[str, Any], name: str) -> Optional[VehicleInit]:
    x, speed = v[f"{name}.x"], v[f"{name}.speed_kmh"]
    if x is None and speed is None:
        return None
    if x is None or speed is None:
        raise ScenarioError(f"{name}: both {name}.x and {name}.speed_kmh are required")
    return VehicleInit(x, v[f"{name}.y"], kmh_to_ms(speed))


def config_from_mapping(raw: Mapping[str, Any], origin: str = "<scenario>") -> ScenarioConfig:
    v = _resolve(flatten(raw), _SCHEMA, origin)
    try:
        side = {"RSD": Side.RIGHT, "LSD": Side.LEFT}[v["maneuver.tie_side"].upper()]
    except KeyError:
        raise ScenarioError(f"{origin}: maneuver.tie_side must be RSD or LSD") from None
    try:
        tick = v["tick"]
        return ScenarioConfig(
            host=VehicleInit(v["host.x"], v["host.y"], kmh_to_ms(v["host.speed_kmh"])),
            host_max_speed=kmh_to_ms(v["host.max_speed_kmh"]),
            front=_optional_vehicle(v, "front"),
            rear=_optional_vehicle(v, "rear"),
            thresholds=ThresholdConfig(
                v["thresholds.d_pr"],
                v["thresholds.d_spf"],
                v["thresholds.d_1pf"],
                v["thresholds.equality_tolerance"],
            ),
            filter=FilterConfig.default(tick, v["filter.q"], v["filter.r"], v["filter.p0"])
            if tick > 0
            else None,
            sigmoid=SigmoidParams(v["sigmoid.a"], v["sigmoid.b"], v["sigmoid.y_max"], v["sigmoid.k"]),
            sensor=SensorConstants(v["sensor.propagation_speed"], v["sensor.carrier_frequency"]),
            measurement_noise_sigma=v["noise.sigma"],
            tick=tick,
            duration=v["duration"],
            seed=v["seed"],
            lane_width=v["lane_width"],
            x_settle=v["maneuver.x_settle"],
            tie_side=side,
        )
    except ScenarioError:
        raise
    except ValidationError as exc:
        raise ScenarioError(f"{origin}: {exc}") from exc


def load_scenario(path) -> ScenarioConfig:
    path = Path(path)
    return config_from_mapping(_read_mapping(path), str(path))


_SNAPSHOT_SCHEMA: dict[str, tuple[type, Any]] = {
    "host.speed_kmh": (float, None),
    "front.present": (bool, False),
    "front.distance": (float, None),
    "front.speed_kmh": (float, None),
    "rear.present": (bool, False),
    "rear.distance": (float, None),
    "rear.speed_kmh": (float, None),
    "thresholds.d_pr": (float, 25.0),
    "thresholds.d_spf": (float, 25.0),
    "thresholds.d_1pf": (float, 35.0),
    "thresholds.equality_tolerance": (float, 0.5),
}


def load_snapshot(path) -> tuple[SituationSnapshot, ThresholdConfig]:
    """Read a decision snapshot file (same format, speeds in km/h).

    An omitted vehicle speed is treated as unknown.
    """
    path = Path(path)
    v = _resolve(_read_mapping(path), _SNAPSHOT_SCHEMA, str(path))
    if v["host.speed_kmh"] is None:
        raise ScenarioError(f"{path}: host.speed_kmh is required")

    def speed(key):
        return None if v[key] is None else kmh_to_ms(v[key])

    try:
        thresholds = ThresholdConfig(
            v["thresholds.d_pr"],
            v["thresholds.d_spf"],
            v["thresholds.d_1pf"],
            v["thresholds.equality_tolerance"],
        )
    except ValidationError as exc:
        raise ScenarioError(f"{path}: {exc}") from exc
    snap = SituationSnapshot(
        front_present=v["front.present"],
        front_distance=v["front.distance"],
        front_speed=speed("front.speed_kmh"),
        rear_present=v["rear.present"],
        rear_distance=v["rear.distance"],
        rear_speed=speed("rear.speed_kmh"),
        host_speed=kmh_to_ms(v["host.speed_kmh"]),
    )
    return snap, thresholds
