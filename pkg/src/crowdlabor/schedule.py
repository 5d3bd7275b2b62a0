"""Concave payment schedules P(y) = pbar * (1 - exp(-k y)) and their discrete marginals.

All amounts are in cents, output ``y`` is in whole blocks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

# Tolerance (cents) used when an amount is compared against a whole-cent boundary.
CENT_TOL = 1e-9

DEFAULT_CAP = 200
DEFAULT_HALF_LIFE = 10.0


def _check_output(y: int, lo: int, hi: int) -> int:
    if isinstance(y, bool) or int(y) != y:
        raise ValueError(f"output must be a whole number of blocks, got {y!r}")
    y = int(y)
    if not lo <= y <= hi:
        raise ValueError(f"output {y} outside [{lo}, {hi}]")
    return y


@dataclass(frozen=True)
class PaymentSchedule:
    """Total earnings ``pbar * (1 - exp(-k*y))`` plus a show-up fee paid with the first block.

    Instances are immutable; the marginal payment table is computed once on demand.
    """

    pbar: float
    k: float
    cap: int = DEFAULT_CAP
    show_up_fee: float = 0.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.pbar) and self.pbar > 0):
            raise ValueError(f"pbar must be positive, got {self.pbar}")
        if not (math.isfinite(self.k) and self.k > 0):
            raise ValueError(f"k must be positive, got {self.k}")
        if isinstance(self.cap, bool) or int(self.cap) != self.cap or self.cap < 1:
            raise ValueError(f"cap must be a positive integer, got {self.cap}")
        if not (math.isfinite(self.show_up_fee) and self.show_up_fee >= 0):
            raise ValueError(f"show_up_fee must be non-negative, got {self.show_up_fee}")
        object.__setattr__(self, "cap", int(self.cap))

    @property
    def half_life(self) -> float:
        return math.log(2.0) / self.k

    @property
    def supremum(self) -> float:
        """Least upper bound of total earnings (never attained)."""
        return self.pbar + self.show_up_fee

    def total_payment(self, y: int) -> float:
        y = _check_output(y, 0, self.cap)
        return self._total(y)

    def _total(self, y: int) -> float:
        # Unchecked; also used to extrapolate past the cap.
        if y == 0:
            return 0.0
        return self.pbar * -math.expm1(-self.k * y) + self.show_up_fee

    def marginal_payment(self, y: int) -> float:
        """Payment for the y-th block, ``P(y) - P(y-1)``."""
        y = _check_output(y, 1, self.cap)
        return self.marginals[y - 1]

    def extrapolated_marginal(self, y: int) -> float:
        """``P(y) - P(y-1)`` for any y >= 1, evaluating the formula past the cap if needed."""
        if y < 1:
            raise ValueError(f"marginal payment undefined for y={y}")
        if y <= self.cap:
            return self.marginals[y - 1]
        return self._total(y) - self._total(y - 1)

    @cached_property
    def marginals(self) -> tuple[float, ...]:
        totals = [self._total(y) for y in range(self.cap + 1)]
        return tuple(totals[y] - totals[y - 1] for y in range(1, self.cap + 1))

    def totals(self) -> np.ndarray:
        """``P(0), P(1), ..., P(cap)`` as an array."""
        return np.array([self._total(y) for y in range(self.cap + 1)])

    def scale(self, gamma: float) -> PaymentSchedule:
        return scale(self, gamma)


def make_schedule(
    pbar: float,
    half_life: float = DEFAULT_HALF_LIFE,
    cap: int = DEFAULT_CAP,
    show_up_fee: float = 0.0,
) -> PaymentSchedule:
    """Build a schedule whose earnings reach ``pbar / 2`` after ``half_life`` blocks."""
    if not (math.isfinite(half_life) and half_life > 0):
        raise ValueError(f"half_life must be positive, got {half_life}")
    return PaymentSchedule(pbar=pbar, k=math.log(2.0) / half_life, cap=cap, show_up_fee=show_up_fee)


def scale(s: PaymentSchedule, gamma: float) -> PaymentSchedule:
    """Multiply every payment (show-up fee included) by ``gamma``."""
    if not (math.isfinite(gamma) and gamma > 0):
        raise ValueError(f"gamma must be positive, got {gamma}")
    return PaymentSchedule(pbar=s.pbar * gamma, k=s.k, cap=s.cap, show_up_fee=s.show_up_fee * gamma)


@dataclass(frozen=True)
class CentSplit:
    whole: int
    frac: float


def whole_cents(earnings: float) -> int:
    """Floor of ``earnings``, treating values within CENT_TOL below an integer as that integer."""
    return math.floor(earnings + CENT_TOL)


def split_cents(earnings: float) -> CentSplit:
    if not (math.isfinite(earnings) and earnings >= 0):
        raise ValueError(f"earnings must be non-negative, got {earnings}")
    whole = whole_cents(earnings)
    return CentSplit(whole=whole, frac=max(earnings - whole, 0.0))


def stochastic_payout(earnings: float, random_draw: float) -> int:
    """Pay the whole cents for sure and one extra cent with probability equal to the fraction.

    ``random_draw`` is a uniform draw on [0, 1); the payout is ``h + 1`` when
    ``random_draw < f``, which makes the expected payout exactly ``h + f``.
    """
    if not 0.0 <= random_draw < 1.0:
        raise ValueError(f"random_draw must lie in [0, 1), got {random_draw}")
    split = split_cents(earnings)
    return split.whole + 1 if random_draw < split.frac else split.whole
