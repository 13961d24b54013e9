"""Closed-loop scenario simulation.

Each tick runs: noisy radar observation of every target, decoding to world
positions, a joint tracker step, the rule-table decision and finally the
mode's action on the host.  Ground truth then advances one tick under
constant velocity.

World frame: x along the road, y lateral with positive to the right.  The
host carries a forward and a rear-facing radar; a target is observed by
whichever one has it inside the (-pi/2, pi/2] field of view.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .. import control, kinematics, trajectory
from ..decision import Mode, SituationSnapshot, select_mode
from ..errors import FilterDivergenceError, InfeasibleGapError, SimulationError, ValidationError
from ..tracking import FRONT, REAR, JointTracker, JointTrackState
from ..trajectory import ParkingClearances, SigmoidParams, Side
from .config import ScenarioConfig


@dataclass(frozen=True)
class CrashZone:
    """Host x-interval over which the rear gap is predicted below the safety gap."""

    start_x: float
    end_x: float
    time_to_crash: float


@dataclass
class TickRecord:
    t: float
    mode: Mode
    host_x: float
    host_y: float
    host_speed: float
    rear_x: Optional[float] = None
    rear_y: Optional[float] = None
    rear_est_x: Optional[float] = None
    rear_est_y: Optional[float] = None
    rear_meas_x: Optional[float] = None
    rear_meas_y: Optional[float] = None
    front_x: Optional[float] = None
    front_y: Optional[float] = None
    front_est_x: Optional[float] = None
    front_est_y: Optional[float] = None
    front_meas_x: Optional[float] = None
    front_meas_y: Optional[float] = None
    crash_zone: Optional[CrashZone] = None


@dataclass
class _Vehicle:
    x: float
    y: float
    speed: float


@dataclass
class _LaneChange:
    t0: float
    y0: float
    off: float
    side: Side

    def y_at(self, t: float, p: SigmoidParams) -> float:
        x = trajectory.lateral_x(max(t - self.t0, 0.0), p)
        return self.y0 + trajectory.lateral_y(x, p, self.off, self.side)

    def active(self, t: float, p: SigmoidParams, x_settle: float) -> bool:
        return trajectory.lateral_x(max(t - self.t0, 0.0), p) < x_settle


def choose_side(off: float, tie: Side = Side.RIGHT) -> Side:
    """Steer away from the front vehicle: positive offset (front on the right) goes left."""
    if off > 0:
        return Side.LEFT
    if off < 0:
        return Side.RIGHT
    return tie


def observe_target(
    host: _Vehicle,
    target_xy: tuple[float, float],
    target_speed: float,
    sensor: kinematics.SensorConstants,
    role: kinematics.Role,
) -> kinematics.TargetKinematics:
    """Round-trip a (possibly noisy) world position through radar observables.

    Returns the decoded target in world coordinates.
    """
    dx = target_xy[0] - host.x
    dy = target_xy[1] - host.y
    forward = dx > 0 or (dx == 0 and dy >= 0)
    sign = 1.0 if forward else -1.0
    local = kinematics.CartesianPoint(sign * dx, sign * dy)
    ret = kinematics.synthesize_return(local, target_speed - host.speed, sensor)
    dec = kinematics.decode(ret, sensor, host.speed, role)
    pos = kinematics.CartesianPoint(host.x + sign * dec.position.x, host.y + sign * dec.position.y)
    return kinematics.TargetKinematics(pos, dec.speed, dec.velocity_x, dec.velocity_y, role)


def crash_zone_from_states(
    host_x: float,
    host_speed: float,
    rear_x: float,
    rear_speed: float,
    safety_gap: float,
) -> Optional[CrashZone]:
    """Constant-velocity extrapolation of the rear/host gap.

    The zone runs from the host position where the gap first drops below
    ``safety_gap`` to the one where it reaches zero.
    """
    gap = host_x - rear_x
    closing = rear_speed - host_speed
    if closing <= 0 or gap <= 0:
        return None
    t_enter = max((gap - safety_gap) / closing, 0.0)
    t_contact = gap / closing
    return CrashZone(
        start_x=host_x + host_speed * t_enter,
        end_x=host_x + host_speed * t_contact,
        time_to_crash=t_contact,
    )


def predict_crash_zone(
    records: Sequence[TickRecord],
    track: Optional[JointTrackState],
    cfg: ScenarioConfig,
    safety_gap: Optional[float] = None,
) -> Optional[CrashZone]:
    """Crash zone from the latest record and the tracker's rear estimate.

    Needs at least two ticks so the rear velocity is observed.  Returns None
    when the rear vehicle is not closing or is outside the host's lane.
    """
    if len(records) < 2 or track is None or cfg.rear is None:
        return None
    last = records[-1]
    rx, ry = track.position(REAR)
    if abs(ry - last.host_y) >= cfg.lane_width / 2:
        return None
    gap = cfg.thresholds.d_pr if safety_gap is None else safety_gap
    return crash_zone_from_states(last.host_x, last.host_speed, rx, track.velocity(REAR)[0], gap)


def true_closest_approach(cfg: ScenarioConfig) -> Optional[float]:
    """Host x where the unreacted rear/host gap closes, from initial ground truth."""
    if cfg.rear is None:
        return None
    closing = cfg.rear.speed - cfg.host.speed
    gap = cfg.host.x - cfg.rear.x
    if closing <= 0 or gap <= 0:
        return None
    return cfg.host.x + cfg.host.speed * gap / closing


class _Run:
    def __init__(self, cfg: ScenarioConfig):
        self.cfg = cfg
        self.rng = np.random.default_rng(cfg.seed)
        self.host = _Vehicle(cfg.host.x, cfg.host.y, cfg.host.speed)
        self.others = {}
        if cfg.rear is not None:
            self.others["rear"] = _Vehicle(cfg.rear.x, cfg.rear.y, cfg.rear.speed)
        if cfg.front is not None:
            self.others["front"] = _Vehicle(cfg.front.x, cfg.front.y, cfg.front.speed)
        self.tracker = JointTracker(cfg.filter)
        self.duty = min(cfg.host.speed / cfg.host_max_speed, 1.0)
        self.lane_change: Optional[_LaneChange] = None
        self.records: list[TickRecord] = []

    def _in_lane(self, y: float) -> bool:
        return abs(y - self.host.y) < self.cfg.lane_width / 2

    def tick(self, n: int) -> None:
        cfg = self.cfg
        t = n * cfg.tick
        z = np.zeros(4)
        observed = [False, False]
        decoded = {}
        for role in ("rear", "front"):
            # noise is drawn for both slots every tick so streams don't shift
            noise = self.rng.normal(0.0, 1.0, size=2) * cfg.measurement_noise_sigma
            truth = self.others.get(role)
            if truth is None:
                continue
            meas = (truth.x + noise[0], truth.y + noise[1])
            dec = observe_target(self.host, meas, truth.speed, cfg.sensor, role)
            decoded[role] = dec
            v = REAR if role == "rear" else FRONT
            z[2 * v] = dec.position.x
            z[2 * v + 1] = dec.position.y
            observed[v] = True

        track = self.tracker.observe(z, observed)

        rec = TickRecord(t=t, mode=Mode.WARNING, host_x=self.host.x, host_y=self.host.y,
                         host_speed=self.host.speed)
        snap_kw = dict(front_present=False, front_distance=None, front_speed=None,
                       rear_present=False, rear_distance=None, rear_speed=None)
        host_pt = kinematics.CartesianPoint(self.host.x, self.host.y)
        for role, v in (("rear", REAR), ("front", FRONT)):
            if role not in decoded:
                continue
            truth = self.others[role]
            ex, ey = track.position(v)
            setattr(rec, f"{role}_x", truth.x)
            setattr(rec, f"{role}_y", truth.y)
            setattr(rec, f"{role}_est_x", ex)
            setattr(rec, f"{role}_est_y", ey)
            setattr(rec, f"{role}_meas_x", decoded[role].position.x)
            setattr(rec, f"{role}_meas_y", decoded[role].position.y)
            ahead = ex > self.host.x
            if self._in_lane(ey) and (ahead if role == "front" else not ahead):
                snap_kw[f"{role}_present"] = True
                snap_kw[f"{role}_distance"] = kinematics.euclidean_distance(
                    kinematics.CartesianPoint(ex, ey), host_pt
                )
                snap_kw[f"{role}_speed"] = decoded[role].speed

        snap = SituationSnapshot(host_speed=self.host.speed, **snap_kw)
        mode = select_mode(snap, cfg.thresholds)
        rec.mode = mode
        if "rear" in decoded and self.tracker.initialized(REAR) and n >= 1:
            rec.crash_zone = predict_crash_zone(self.records + [rec], track, cfg)

        self._act(t, mode, snap, track)
        rec.host_speed = self.host.speed
        self.records.append(rec)

    def _act(self, t: float, mode: Mode, snap: SituationSnapshot, track: JointTrackState) -> None:
        cfg = self.cfg
        busy = self.lane_change is not None and self.lane_change.active(t, cfg.sigmoid, cfg.x_settle)
        if busy:
            return
        state = control.DutyCycleState(self.duty, cfg.host_max_speed)
        if mode is Mode.ACCELERATION:
            self.duty = control.host_duty_update(state, snap.rear_speed)
            self.host.speed = control.duty_to_speed(self.duty, cfg.host_max_speed)
        elif mode is Mode.CCM_FORWARD:
            off = trajectory.compute_offset(track.position(FRONT)[1], self.host.y)
            side = choose_side(off, cfg.tie_side)
            self.lane_change = _LaneChange(t0=t, y0=self.host.y, off=off, side=side)
            aim_y = trajectory.lateral_y(cfg.x_settle, cfg.sigmoid, off, side)
            mk = control.maneuver_kinematics(cfg.x_settle, aim_y, state, snap.rear_speed)
            speed = math.hypot(mk.v_x_host, mk.v_y_host)
            self.duty = min(max(speed / cfg.host_max_speed, 0.0), 1.0)
            self.host.speed = speed

    def advance(self, t_next: float) -> None:
        dt = self.cfg.tick
        self.host.x += self.host.speed * dt
        if self.lane_change is not None:
            self.host.y = self.lane_change.y_at(t_next, self.cfg.sigmoid)
        for v in self.others.values():
            v.x += v.speed * dt


def run_scenario(cfg: ScenarioConfig) -> list[TickRecord]:
    """Simulate one scenario; deterministic for a given ``cfg.seed``.

    Raises :class:`SimulationError` carrying the completed records if the
    tracker diverges or the control law rejects its inputs mid-run.
    """
    run = _Run(cfg)
    for n in range(cfg.n_ticks):
        try:
            run.tick(n)
        except (FilterDivergenceError, ValidationError) as exc:
            raise SimulationError(f"run aborted at t={n * cfg.tick:g}s: {exc}", run.records) from exc
        if n + 1 < cfg.n_ticks:
            run.advance((n + 1) * cfg.tick)
    return run.records


@dataclass
class ParkingRun:
    records: list[TickRecord]
    clearances: ParkingClearances
    settling_error: float


def run_parking(clearances: ParkingClearances, p: SigmoidParams, dt: float) -> ParkingRun:
    """Reverse sigmoid into a parking gap, truncated at ``x = -x_max``.

    The settling error is the final distance short of ``-y_max``.
    """
    p.require_parking()
    if not dt > 0:
        raise ValidationError(f"dt must be > 0, got {dt}")
    x_m, y_m = clearances.x_max, clearances.y_max_park
    if not (x_m > 0 and y_m > 0):
        raise InfeasibleGapError(f"degenerate clearances x_m={x_m}, y_m={y_m}")
    t_end = x_m / p.K
    if t_end < dt:
        raise ValidationError(f"path of {t_end:g}s is shorter than one step of {dt:g}s")
    path = trajectory.generate_parking_path(p, t_end, dt)
    if not math.isclose(path[-1].t, t_end, rel_tol=1e-12, abs_tol=1e-12):
        path.append(trajectory.PathSample(t_end, -x_m, trajectory.parking_y(-x_m, p)))
    records = []
    for s in path:
        if abs(s.y) > y_m:
            raise InfeasibleGapError(
                f"path reaches |y|={abs(s.y):.4f} m at x={s.x:.3f} m, beyond y_m={y_m:.4f} m"
            )
        records.append(TickRecord(t=s.t, mode=Mode.CCM_REVERSE, host_x=s.x, host_y=s.y,
                                  host_speed=-p.K))
    final = path[-1]
    return ParkingRun(records, clearances, final.y + p.y_max)
