"""Joint rear/front constant-velocity Kalman filter.

State layout is ``[x_r, vx_r, y_r, vy_r, x_f, vx_f, y_f, vy_f]`` and the
measurement is ``[x_r, y_r, x_f, y_f]``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import FilterDivergenceError, ValidationError

STATE_DIM = 8
MEAS_DIM = 4
MAX_CONDITION = 1e12
SYM_TOL = 1e-9
PSD_FLOOR = -1e-9

REAR, FRONT = 0, 1


def check_covariance(p: np.ndarray, name: str = "covariance", shape: Optional[int] = None) -> None:
    p = np.asarray(p, dtype=float)
    if p.ndim != 2 or p.shape[0] != p.shape[1]:
        raise ValidationError(f"{name} must be square, got shape {p.shape}")
    if shape is not None and p.shape[0] != shape:
        raise ValidationError(f"{name} must be {shape}x{shape}, got {p.shape}")
    if not np.all(np.isfinite(p)):
        raise ValidationError(f"{name} has non-finite entries")
    if np.max(np.abs(p - p.T), initial=0.0) > SYM_TOL:
        raise ValidationError(f"{name} is not symmetric")
    if np.min(np.linalg.eigvalsh(p)) < PSD_FLOOR * max(1.0, np.max(np.abs(p))):
        raise ValidationError(f"{name} is not positive semidefinite")


def white_noise_acceleration(sample_time: float, q: float) -> np.ndarray:
    """Discrete white-noise-acceleration covariance for all four CV axes."""
    t = sample_time
    block = q * np.array([[t**4 / 4, t**3 / 2], [t**3 / 2, t**2]])
    return np.kron(np.eye(4), block)


@dataclass(frozen=True)
class FilterConfig:
    sample_time: float
    process_noise_cov: np.ndarray
    measurement_noise_cov: np.ndarray
    initial_covariance: np.ndarray

    def __post_init__(self):
        if not self.sample_time > 0:
            raise ValidationError(f"sample time must be > 0, got {self.sample_time}")
        for attr, n in (
            ("process_noise_cov", STATE_DIM),
            ("measurement_noise_cov", MEAS_DIM),
            ("initial_covariance", STATE_DIM),
        ):
            arr = np.array(getattr(self, attr), dtype=float)
            check_covariance(arr, attr, n)
            arr.setflags(write=False)
            object.__setattr__(self, attr, arr)

    @classmethod
    def default(cls, sample_time: float = 0.5, q: float = 0.1, r: float = 0.25, p0: float = 10.0):
        return cls(
            sample_time=sample_time,
            process_noise_cov=white_noise_acceleration(sample_time, q),
            measurement_noise_cov=r * np.eye(MEAS_DIM),
            initial_covariance=p0 * np.eye(STATE_DIM),
        )


@dataclass
class JointTrackState:
    state: np.ndarray
    covariance: np.ndarray
    tick: int = 0

    def __post_init__(self):
        self.state = np.asarray(self.state, dtype=float).reshape(STATE_DIM)
        self.covariance = np.asarray(self.covariance, dtype=float)
        if self.covariance.shape != (STATE_DIM, STATE_DIM):
            raise ValidationError(f"covariance must be 8x8, got {self.covariance.shape}")

    def position(self, vehicle: int) -> tuple[float, float]:
        o = 4 * vehicle
        return float(self.state[o]), float(self.state[o + 2])

    def velocity(self, vehicle: int) -> tuple[float, float]:
        o = 4 * vehicle
        return float(self.state[o + 1]), float(self.state[o + 3])


def transition_matrix(sample_time: float) -> np.ndarray:
    if not sample_time > 0:
        raise ValidationError(f"sample time must be > 0, got {sample_time}")
    return np.kron(np.eye(4), np.array([[1.0, sample_time], [0.0, 1.0]]))


def measurement_matrix() -> np.ndarray:
    c = np.zeros((MEAS_DIM, STATE_DIM))
    c[[0, 1, 2, 3], [0, 2, 4, 6]] = 1.0
    return c


def _observed_rows(observed: Sequence[bool]) -> np.ndarray:
    rear, front = observed
    return np.array([rear, rear, front, front], dtype=bool)


def _finite_or_diverge(*arrays: np.ndarray) -> None:
    for a in arrays:
        if not np.all(np.isfinite(a)):
            raise FilterDivergenceError("filter produced non-finite values")


def predict(s: JointTrackState, cfg: FilterConfig) -> JointTrackState:
    a = transition_matrix(cfg.sample_time)
    with np.errstate(invalid="ignore", over="ignore"):
        x = a @ s.state
        p = a @ s.covariance @ a.T + cfg.process_noise_cov
    p = 0.5 * (p + p.T)
    _finite_or_diverge(x, p)
    return JointTrackState(x, p, s.tick + 1)


def kalman_gain(p: np.ndarray, c: np.ndarray, r: np.ndarray) -> np.ndarray:
    s = c @ p @ c.T + r
    cond = np.linalg.cond(s)
    if not np.isfinite(cond) or cond > MAX_CONDITION:
        raise FilterDivergenceError(f"innovation covariance ill-conditioned (cond={cond:.3g})")
    # K = P C^T S^-1, via S K^T = C P with S symmetric
    return np.linalg.solve(s, c @ p).T


def update(
    s: JointTrackState,
    z: Sequence[float],
    cfg: FilterConfig,
    observed: Sequence[bool] = (True, True),
) -> JointTrackState:
    """Measurement update.

    ``observed`` flags (rear, front); unobserved vehicles keep their
    predicted state.  The covariance is propagated in Joseph form.
    """
    z = np.asarray(z, dtype=float).reshape(MEAS_DIM)
    rows = _observed_rows(observed)
    if not rows.any():
        return JointTrackState(s.state.copy(), s.covariance.copy(), s.tick)
    if not np.all(np.isfinite(z[rows])):
        raise ValidationError("measurement has non-finite components")
    c = measurement_matrix()[rows]
    r = cfg.measurement_noise_cov[np.ix_(rows, rows)]
    k = kalman_gain(s.covariance, c, r)
    x = s.state + k @ (z[rows] - c @ s.state)
    i_kc = np.eye(STATE_DIM) - k @ c
    p = i_kc @ s.covariance @ i_kc.T + k @ r @ k.T
    p = 0.5 * (p + p.T)
    _finite_or_diverge(x, p)
    return JointTrackState(x, p, s.tick)


def step(
    s: JointTrackState,
    z: Sequence[float],
    cfg: FilterConfig,
    observed: Sequence[bool] = (True, True),
) -> JointTrackState:
    """One predict/update cycle; the posterior is the next prior."""
    return update(predict(s, cfg), z, cfg, observed)


@dataclass
class JointTracker:
    """Stateful wrapper handling per-vehicle track start-up.

    A vehicle's position is seeded from its first measurement and its
    velocity from the finite difference of its first two; only from the
    third measurement on does it take part in the Kalman update.
    """

    cfg: FilterConfig
    track: Optional[JointTrackState] = None
    _seen: list = field(default_factory=lambda: [0, 0])
    _last: list = field(default_factory=lambda: [None, None])

    def initialized(self, vehicle: int) -> bool:
        return self._seen[vehicle] >= 2

    def observe(self, z: Sequence[float], observed: Sequence[bool] = (True, True)) -> JointTrackState:
        z = np.asarray(z, dtype=float).reshape(MEAS_DIM)
        if self.track is None:
            self.track = JointTrackState(np.zeros(STATE_DIM), self.cfg.initial_covariance.copy(), 0)
        else:
            self.track = predict(self.track, self.cfg)

        mature = tuple(bool(observed[v]) and self._seen[v] >= 2 for v in (REAR, FRONT))
        if any(mature):
            self.track = update(self.track, z, self.cfg, mature)

        for v in (REAR, FRONT):
            if not observed[v] or self._seen[v] >= 2:
                continue
            zx, zy = z[2 * v], z[2 * v + 1]
            blk = slice(4 * v, 4 * v + 4)
            x = self.track.state.copy()
            p = self.track.covariance.copy()
            if self._seen[v] == 0:
                x[blk] = (zx, 0.0, zy, 0.0)
            else:
                lx, ly = self._last[v]
                t = self.cfg.sample_time
                x[blk] = (zx, (zx - lx) / t, zy, (zy - ly) / t)
            p[blk, :] = 0.0
            p[:, blk] = 0.0
            p[blk, blk] = self.cfg.initial_covariance[blk, blk]
            self.track = JointTrackState(x, p, self.track.tick)
            self._seen[v] += 1
            self._last[v] = (zx, zy)
        return self.track
