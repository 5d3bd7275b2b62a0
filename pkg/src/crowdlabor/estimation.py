"""Reservation-wage imputation from a worker's observed stopping point."""

from __future__ import annotations

import math
from dataclasses import dataclass

from crowdlabor.schedule import PaymentSchedule


def dollars_per_hour(omega: float) -> float:
    """Convert cents per second to dollars per hour."""
    if omega < 0:
        raise ValueError(f"wage must be non-negative, got {omega}")
    return omega * 3600 / 100


@dataclass(frozen=True)
class WageEstimate:
    """Imputed reservation wage with its bracket, all in cents per second.

    The true wage satisfies ``lower < omega <= upper`` whenever the worker
    stopped strictly before the cap. ``censored`` marks workers at the cap,
    whose lower bound is an extrapolation past the last offered block.
    """

    omega_hat: float
    lower: float
    upper: float
    y: int
    t_bar: float
    censored: bool = False

    @property
    def omega_usd_per_hr(self) -> float:
        return dollars_per_hour(self.omega_hat)

    @property
    def lower_usd_per_hr(self) -> float:
        return dollars_per_hour(self.lower)

    @property
    def upper_usd_per_hr(self) -> float:
        return dollars_per_hour(self.upper)


def impute_wage(s: PaymentSchedule, y: int, t_bar: float) -> WageEstimate:
    """Midpoint of the marginal wages of the last block worked and the first block declined.

    For ``y = 1`` the first block's payment carries the schedule's show-up fee.
    ``y = 0`` is rejected: a non-starter only reveals ``omega > p(1)/t``.
    """
    if not (math.isfinite(t_bar) and t_bar > 0):
        raise ValueError(f"t_bar must be positive, got {t_bar}")
    if isinstance(y, bool) or int(y) != y:
        raise ValueError(f"output must be a whole number of blocks, got {y!r}")
    y = int(y)
    if y == 0:
        raise ValueError("reservation wage is not identified for y = 0")
    if not 1 <= y <= s.cap:
        raise ValueError(f"output {y} outside [1, {s.cap}]")
    upper = s.marginal_payment(y) / t_bar
    lower = s.extrapolated_marginal(y + 1) / t_bar
    return WageEstimate(
        omega_hat=(upper + lower) / 2,
        lower=lower,
        upper=upper,
        y=y,
        t_bar=t_bar,
        censored=y == s.cap,
    )
