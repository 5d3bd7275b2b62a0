"""Seeded synthetic sessions: draw workers, let them choose output, record what is observable."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from crowdlabor.agents import OutputChoice, WorkerKind, WorkerProfile, optimal_output
from crowdlabor.harness.config import MIN_BLOCK_TIME, GroupConfig, PopulationConfig
from crowdlabor.harness.records import SessionRecord
from crowdlabor.schedule import PaymentSchedule, whole_cents

USD_PER_HOUR_TO_CENTS_PER_SECOND = 100 / 3600


@dataclass(frozen=True)
class SimulatedWorker:
    """A drawn worker with its hidden parameters and chosen output."""

    worker_id: str
    group: str
    profile: WorkerProfile
    choice: OutputChoice

    def record(self) -> SessionRecord:
        y = self.choice.y
        return SessionRecord(
            worker_id=self.worker_id,
            group=self.group,
            y=y,
            t_bar=self.profile.block_time if y > 0 else 0.0,
            earnings=self.choice.earnings,
        )


def worker_rng(seed: int, group_index: int, worker_index: int) -> np.random.Generator:
    # Substream depends only on (seed, group, worker), never on evaluation order.
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(group_index, worker_index)))


def _block_time(rng: np.random.Generator, group: GroupConfig) -> float:
    sd = group.sd
    if sd == 0:
        return max(group.block_time_mean, MIN_BLOCK_TIME)
    while True:
        t = rng.normal(group.block_time_mean, sd)
        if t >= MIN_BLOCK_TIME:
            return float(t)


def draw_worker(config: PopulationConfig, group_index: int, worker_index: int) -> SimulatedWorker:
    group = config.groups[group_index]
    rng = worker_rng(config.seed, group_index, worker_index)
    omega_usd = math.exp(rng.normal(config.mu, config.sigma))
    block_time = _block_time(rng, group)
    is_target = rng.random() < config.rho
    targets, weights = config.targets_for(group)
    target = int(targets[rng.choice(len(targets), p=weights)])
    if is_target:
        profile = WorkerProfile(
            omega=omega_usd * USD_PER_HOUR_TO_CENTS_PER_SECOND,
            block_time=block_time,
            kind=WorkerKind.TARGET_EARNER,
            target=target,
            wage_floor=config.target_wage_floor * USD_PER_HOUR_TO_CENTS_PER_SECOND,
        )
    else:
        profile = WorkerProfile(omega=omega_usd * USD_PER_HOUR_TO_CENTS_PER_SECOND, block_time=block_time)
    worker_id = f"{group.label}-{worker_index:05d}"
    return SimulatedWorker(worker_id, group.label, profile, optimal_output(group.schedule, profile))


def simulate_workers(config: PopulationConfig) -> list[SimulatedWorker]:
    return [
        draw_worker(config, g, i) for g in range(len(config.groups)) for i in range(config.n_workers)
    ]


def simulate_experiment(config: PopulationConfig, censor_nonstarters: bool = False) -> list[SessionRecord]:
    """Deterministic list of session records (sorted by worker_id) for ``config``."""
    records = [w.record() for w in simulate_workers(config)]
    if censor_nonstarters:
        records = [r for r in records if r.y > 0]
    return sorted(records, key=lambda r: r.worker_id)


def proportional_null_workers(
    schedule: PaymentSchedule,
    n: int,
    max_y: int,
    seed: int,
    block_time: float = 6.0,
) -> list[WorkerProfile]:
    """Rational workers whose whole-cent earnings are uniform over the realizable amounts.

    Each worker gets a whole-cent amount drawn uniformly from the distinct values
    of ``floor(P(y))`` for y in 1..max_y, a stopping point drawn uniformly among
    the outputs that earn it, and a reservation wage drawn uniformly inside that
    stopping point's bracket ``(p(y+1)/t, p(y)/t)``. This is the population the
    focal-point test's proportionality null describes.
    """
    if not 1 <= max_y < schedule.cap:
        raise ValueError(f"max_y must lie in [1, {schedule.cap - 1}]")
    by_amount: dict[int, list[int]] = {}
    for y in range(1, max_y + 1):
        by_amount.setdefault(whole_cents(schedule.total_payment(y)), []).append(y)
    amounts = sorted(by_amount)
    rng = np.random.default_rng(seed)
    workers = []
    for _ in range(n):
        ys = by_amount[amounts[rng.integers(len(amounts))]]
        y = ys[rng.integers(len(ys))]
        hi = schedule.marginal_payment(y) / block_time
        lo = schedule.marginal_payment(y + 1) / block_time
        omega = lo + (hi - lo) * (1.0 - rng.random())  # in (lo, hi]
        workers.append(WorkerProfile(omega=omega, block_time=block_time))
    return workers
