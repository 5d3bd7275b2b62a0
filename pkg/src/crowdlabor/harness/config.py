"""Population and experiment-group configuration for synthetic sessions."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path

from crowdlabor.schedule import DEFAULT_CAP, DEFAULT_HALF_LIFE, PaymentSchedule, make_schedule

# Log reservation wage parameters (log dollars/hour) fitted on the pooled experiments.
DEFAULT_MU = 0.074
DEFAULT_SIGMA = 1.634

FULL_AMOUNT_WEIGHT = 0.25
MIN_BLOCK_TIME = 0.5


@dataclass(frozen=True)
class GroupConfig:
    """One treatment arm: its pay schedule and how long a block takes."""

    label: str
    pbar: float
    half_life: float = DEFAULT_HALF_LIFE
    cap: int = DEFAULT_CAP
    show_up_fee: float = 0.0
    block_time_mean: float = 6.0
    block_time_sd: float | None = None

    def __post_init__(self) -> None:
        if not self.label or "," in self.label:
            raise ValueError(f"invalid group label {self.label!r}")
        if not self.block_time_mean > 0:
            raise ValueError(f"block_time_mean must be positive, got {self.block_time_mean}")
        if self.block_time_sd is not None and self.block_time_sd < 0:
            raise ValueError(f"block_time_sd must be non-negative, got {self.block_time_sd}")
        self.schedule  # validates the schedule fields

    @property
    def schedule(self) -> PaymentSchedule:
        return make_schedule(self.pbar, self.half_life, self.cap, self.show_up_fee)

    @property
    def sd(self) -> float:
        return 0.2 * self.block_time_mean if self.block_time_sd is None else self.block_time_sd


def default_targets(pbar: float) -> dict[int, float]:
    """Multiples of 5 below the asymptote share 0.75 evenly; the full amount gets 0.25."""
    full = math.floor(pbar)
    fives = [v for v in range(5, full, 5)]
    if not fives:
        return {full: 1.0}
    weights = {v: (1 - FULL_AMOUNT_WEIGHT) / len(fives) for v in fives}
    weights[full] = weights.get(full, 0.0) + FULL_AMOUNT_WEIGHT
    return weights


@dataclass(frozen=True)
class PopulationConfig:
    n_workers: int = 99
    mu: float = DEFAULT_MU
    sigma: float = DEFAULT_SIGMA
    rho: float = 0.0
    target_distribution: dict[int, float] | None = None
    # dollars/hour; a target earner abandons an unreachable target below this marginal wage
    target_wage_floor: float = 0.2
    groups: tuple[GroupConfig, ...] = field(
        default_factory=lambda: (GroupConfig("HIGH", 30.0), GroupConfig("LOW", 10.0))
    )
    seed: int = 0

    def __post_init__(self) -> None:
        if self.n_workers < 1:
            raise ValueError(f"n_workers must be >= 1, got {self.n_workers}")
        if not self.sigma > 0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")
        if not 0.0 <= self.rho <= 1.0:
            raise ValueError(f"rho must lie in [0, 1], got {self.rho}")
        if self.target_wage_floor < 0:
            raise ValueError("target_wage_floor must be non-negative")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        groups = tuple(g if isinstance(g, GroupConfig) else GroupConfig(**g) for g in self.groups)
        if not groups:
            raise ValueError("at least one group is required")
        if len({g.label for g in groups}) != len(groups):
            raise ValueError("group labels must be unique")
        object.__setattr__(self, "groups", groups)
        if self.target_distribution is not None:
            dist = {int(k): float(v) for k, v in self.target_distribution.items()}
            if any(k < 0 for k in dist) or any(v < 0 for v in dist.values()) or sum(dist.values()) <= 0:
                raise ValueError("target weights must be non-negative with positive total on targets >= 0")
            object.__setattr__(self, "target_distribution", dist)

    def targets_for(self, group: GroupConfig) -> tuple[list[int], list[float]]:
        dist = self.target_distribution or default_targets(group.pbar + group.show_up_fee)
        targets = sorted(dist)
        total = sum(dist.values())
        return targets, [dist[t] / total for t in targets]

    def to_dict(self) -> dict:
        d = asdict(self)
        if self.target_distribution is not None:
            d["target_distribution"] = {str(k): v for k, v in self.target_distribution.items()}
        return d

    @classmethod
    def from_dict(cls, data: dict) -> PopulationConfig:
        known = set(cls.__dataclass_fields__)
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config fields: {sorted(unknown)}")
        data = dict(data)
        if "groups" in data:
            data["groups"] = tuple(GroupConfig(**g) for g in data["groups"])
        return cls(**data)

    @classmethod
    def load(cls, path: str | Path) -> PopulationConfig:
        return cls.from_dict(json.loads(Path(path).read_text()))


def experiment_a(**overrides) -> PopulationConfig:
    """Difficulty arms: same 10-cent schedule, ~6 s vs ~11 s per block."""
    groups = (
        GroupConfig("EASY", 10.0, block_time_mean=6.0),
        GroupConfig("HARD", 10.0, block_time_mean=11.0),
    )
    return PopulationConfig(**{"n_workers": 46, "groups": groups, **overrides})


def experiment_b(**overrides) -> PopulationConfig:
    """Price arms: 30-cent vs 10-cent asymptote, same task."""
    groups = (
        GroupConfig("HIGH", 30.0, block_time_mean=6.0),
        GroupConfig("LOW", 10.0, block_time_mean=6.0),
    )
    return PopulationConfig(**{"n_workers": 99, "groups": groups, **overrides})


PRESETS = {"experiment-a": experiment_a, "experiment-b": experiment_b}
