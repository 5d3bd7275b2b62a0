"""Worker behaviour against a concave schedule: rational stopping, quadratic costs, target earning."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from crowdlabor.schedule import PaymentSchedule, whole_cents


class WorkerKind(str, enum.Enum):
    RATIONAL = "rational"
    TARGET_EARNER = "target-earner"


class StopReason(str, enum.Enum):
    WAGE_BELOW_RESERVATION = "wage-below-reservation"
    TARGET_REACHED = "target-reached"
    TARGET_UNREACHABLE = "target-unreachable"
    CAP_REACHED = "cap-reached"
    NEVER_STARTED = "never-started"


@dataclass(frozen=True)
class WorkerProfile:
    """Behavioural parameters of one worker.

    ``omega`` and ``wage_floor`` are in cents per second, ``block_time`` in
    seconds per block, ``nu`` in cents, ``target`` in whole cents.
    """

    omega: float
    block_time: float
    kind: WorkerKind = WorkerKind.RATIONAL
    nu: float = 0.0
    target: int | None = None
    wage_floor: float = 0.0

    def __post_init__(self) -> None:
        for name in ("omega", "nu", "wage_floor"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value >= 0):
                raise ValueError(f"{name} must be finite and non-negative, got {value}")
        if not (math.isfinite(self.block_time) and self.block_time > 0):
            raise ValueError(f"block_time must be positive, got {self.block_time}")
        object.__setattr__(self, "kind", WorkerKind(self.kind))
        if self.kind is WorkerKind.TARGET_EARNER:
            if self.target is None or self.target < 0 or int(self.target) != self.target:
                raise ValueError(f"a target earner needs a whole-cent target >= 0, got {self.target}")
            object.__setattr__(self, "target", int(self.target))


@dataclass(frozen=True)
class OutputChoice:
    y: int
    earnings: float
    stop_reason: StopReason


def _choice(s: PaymentSchedule, y: int, reason: StopReason) -> OutputChoice:
    return OutputChoice(y=y, earnings=s.total_payment(y), stop_reason=reason)


def _require_rational(w: WorkerProfile) -> None:
    if w.kind is not WorkerKind.RATIONAL:
        raise ValueError("profile is a target earner; use target_output")


def rational_output(s: PaymentSchedule, w: WorkerProfile) -> OutputChoice:
    """Keep working while the offered marginal wage ``p(y)/t`` is at least ``omega``."""
    _require_rational(w)
    if w.nu != 0:
        raise ValueError("profile has a quadratic cost term; use quadratic_cost_output")
    y = 0
    for p in s.marginals:
        if p / w.block_time < w.omega:
            break
        y += 1
    if y == 0:
        return _choice(s, 0, StopReason.NEVER_STARTED)
    if y == s.cap:
        return _choice(s, y, StopReason.CAP_REACHED)
    return _choice(s, y, StopReason.WAGE_BELOW_RESERVATION)


def _quadratic_increment(nu: float, y: int) -> float:
    # Forward difference of nu * (y - 1)**2, with the term absent at y = 0.
    if y <= 1:
        return 0.0
    return nu * (2 * y - 3)


def quadratic_cost_output(s: PaymentSchedule, w: WorkerProfile) -> OutputChoice:
    """Stopping rule for costs ``omega*t*y + nu*(y-1)**2``.

    A block is worked when its payment covers its marginal cost
    ``omega*t + nu*((y-1)**2 - (y-2)**2)``; for ``y = 1`` the quadratic part is zero.
    """
    _require_rational(w)
    if w.nu < 0:
        raise ValueError(f"nu must be non-negative, got {w.nu}")
    time_cost = w.omega * w.block_time
    y = 0
    for j, p in enumerate(s.marginals, start=1):
        if p < time_cost + _quadratic_increment(w.nu, j):
            break
        y = j
    if y == 0:
        return _choice(s, 0, StopReason.NEVER_STARTED)
    if y == s.cap:
        return _choice(s, y, StopReason.CAP_REACHED)
    return _choice(s, y, StopReason.WAGE_BELOW_RESERVATION)


def brute_force_output(s: PaymentSchedule, omega: float, t: float, nu: float = 0.0) -> int:
    """Smallest maximiser of ``P(y) - omega*t*y - nu*(y-1)**2`` over every y in [0, cap]."""
    if not (t > 0 and math.isfinite(omega) and math.isfinite(t) and math.isfinite(nu)):
        raise ValueError("inputs must be finite with t > 0")
    best_y, best_value = 0, 0.0
    for y in range(1, s.cap + 1):
        value = s.total_payment(y) - omega * t * y - nu * (y - 1) ** 2
        if value > best_value:
            best_y, best_value = y, value
    return best_y


def optimal_output(s: PaymentSchedule, w: WorkerProfile) -> OutputChoice:
    """Dispatch to the behavioural rule matching the profile."""
    if w.kind is WorkerKind.TARGET_EARNER:
        return target_output(s, w)
    if w.nu > 0:
        return quadratic_cost_output(s, w)
    return rational_output(s, w)


def target_output(s: PaymentSchedule, w: WorkerProfile) -> OutputChoice:
    """Work until whole-cent earnings reach the target.

    The worker gives up (``target-unreachable``) once the next block would pay
    less than ``wage_floor`` per second; with a zero floor an unreachable target
    means grinding on to the cap.
    """
    if w.kind is not WorkerKind.TARGET_EARNER:
        raise ValueError("profile is rational; use rational_output")
    y = 0
    while True:
        if whole_cents(s.total_payment(y)) >= w.target:
            return _choice(s, y, StopReason.TARGET_REACHED)
        if y == s.cap:
            return _choice(s, y, StopReason.CAP_REACHED)
        if s.marginal_payment(y + 1) / w.block_time < w.wage_floor:
            return _choice(s, y, StopReason.TARGET_UNREACHABLE)
        y += 1
