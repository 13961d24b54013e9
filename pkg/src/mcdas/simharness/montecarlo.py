"""Seeded Monte Carlo batches over a scenario."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

from ..errors import SimulationError, ValidationError
from .config import U64_MAX, ScenarioConfig
from .engine import TickRecord, run_scenario, true_closest_approach

VEHICLES = ("rear", "front")


@dataclass
class RunSummary:
    run: int
    seed: int
    ticks: int
    # keyed by vehicle role; vehicles absent from the scenario have no entry
    filtered_mse: dict = field(default_factory=dict)
    raw_mse: dict = field(default_factory=dict)
    mean_error: dict = field(default_factory=dict)
    max_error: dict = field(default_factory=dict)
    crash_zone_hit: bool = False
    error: Optional[str] = None


@dataclass
class MonteCarloReport:
    runs: int
    seeds: list
    mean_error: dict
    max_error: dict
    filtered_mse: dict
    raw_mse: dict
    crash_zone_hit_rate: float
    failures: list
    per_run: list


def _errors(records: list[TickRecord], role: str, kind: str) -> list[float]:
    out = []
    for r in records:
        tx = getattr(r, f"{role}_x")
        if tx is None:
            continue
        ex = getattr(r, f"{role}_{kind}_x")
        ey = getattr(r, f"{role}_{kind}_y")
        out.append(math.hypot(ex - tx, ey - getattr(r, f"{role}_y")))
    return out


def zone_hit(records: list[TickRecord], cfg: ScenarioConfig) -> bool:
    """Does the crash zone predicted on the unreacted course contain the true closing point?

    The zone used is the last one predicted before the host first changes
    speed or lateral position, since later predictions describe a different
    course.  A tolerance of one tick of closing motion is allowed.  When the
    rear vehicle never closes, a run scores a hit only if no zone was
    predicted.
    """
    zone = None
    for r in records:
        if r.crash_zone is not None:
            zone = r.crash_zone
        if r.host_speed != cfg.host.speed or r.host_y != cfg.host.y:
            break
    truth = true_closest_approach(cfg)
    if truth is None:
        return zone is None
    if zone is None:
        return False
    tol = cfg.tick * (cfg.rear.speed - cfg.host.speed)
    return zone.start_x - tol <= truth <= zone.end_x + tol


def summarize_run(run: int, cfg: ScenarioConfig, records: list[TickRecord]) -> RunSummary:
    s = RunSummary(run=run, seed=cfg.seed, ticks=len(records))
    for role in VEHICLES:
        est = _errors(records, role, "est")
        raw = _errors(records, role, "meas")
        if not est:
            continue
        s.filtered_mse[role] = sum(e * e for e in est) / len(est)
        s.raw_mse[role] = sum(e * e for e in raw) / len(raw)
        s.mean_error[role] = sum(est) / len(est)
        s.max_error[role] = max(est)
    s.crash_zone_hit = zone_hit(records, cfg)
    return s


def _mean(values: list[float]) -> Optional[float]:
    # fsum keeps the reduction independent of summation order
    return math.fsum(values) / len(values) if values else None


def aggregate(summaries: list[RunSummary]) -> MonteCarloReport:
    summaries = sorted(summaries, key=lambda s: s.run)
    ok = [s for s in summaries if s.error is None]
    report = MonteCarloReport(
        runs=len(summaries),
        seeds=[s.seed for s in summaries],
        mean_error={}, max_error={}, filtered_mse={}, raw_mse={},
        crash_zone_hit_rate=(sum(s.crash_zone_hit for s in ok) / len(ok)) if ok else 0.0,
        failures=[{"run": s.run, "seed": s.seed, "error": s.error} for s in summaries if s.error],
        per_run=summaries,
    )
    for role in VEHICLES:
        have = [s for s in ok if role in s.filtered_mse]
        if not have:
            continue
        report.mean_error[role] = _mean([s.mean_error[role] for s in have])
        report.max_error[role] = max(s.max_error[role] for s in have)
        report.filtered_mse[role] = _mean([s.filtered_mse[role] for s in have])
        report.raw_mse[role] = _mean([s.raw_mse[role] for s in have])
    return report


def monte_carlo(cfg: ScenarioConfig, runs: int, seed: Optional[int] = None) -> MonteCarloReport:
    """Run ``runs`` copies of ``cfg`` with seeds ``seed + i``.

    ``seed`` defaults to the scenario's own seed.  A failing run is recorded
    in ``failures`` and the batch continues.
    """
    if runs < 1:
        raise ValidationError(f"runs must be >= 1, got {runs}")
    master = cfg.seed if seed is None else seed
    summaries = []
    for i in range(runs):
        run_cfg = cfg.with_seed((master + i) % (U64_MAX + 1))
        try:
            records = run_scenario(run_cfg)
        except SimulationError as exc:
            s = summarize_run(i, run_cfg, exc.records)
            s.error = str(exc)
        else:
            s = summarize_run(i, run_cfg, records)
        summaries.append(s)
    return aggregate(summaries)
