"""Test for bunching of whole-cent earnings at multiples of a modulus (5 by default).

Under the null, the share of workers whose whole-cent earnings are divisible
by the modulus equals the share of realizable whole-cent amounts that are.
The observed count is compared with an exact binomial upper tail.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal, Sequence

from crowdlabor.schedule import PaymentSchedule, whole_cents

PwMode = Literal["set", "multiset"]


@dataclass(frozen=True)
class FocalTestResult:
    successes: int
    n: int
    q: float
    p_value: float
    modulus: int = 5
    realizable: list[int] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "successes": self.successes,
            "n": self.n,
            "q": self.q,
            "p_value": self.p_value,
            "modulus": self.modulus,
            "realizable": list(self.realizable),
        }


def terminal_band(s: PaymentSchedule) -> int:
    """Largest whole-cent amount the schedule approaches but whose successor it never reaches."""
    return math.ceil(s.supremum) - 1


def realizable_whole_cents(
    s: PaymentSchedule,
    max_y: int,
    mode: PwMode = "set",
    exclude_terminal: bool = False,
) -> list[int]:
    """``floor(P(y))`` for y in 1..max_y; deduplicated and sorted in ``set`` mode."""
    if max_y < 1:
        raise ValueError(f"max_y must be >= 1, got {max_y}")
    if max_y > s.cap:
        raise ValueError(f"max_y {max_y} exceeds the schedule cap {s.cap}")
    if mode not in ("set", "multiset"):
        raise ValueError(f"unknown mode {mode!r}")
    values = [whole_cents(s.total_payment(y)) for y in range(1, max_y + 1)]
    if exclude_terminal:
        band = terminal_band(s)
        values = [v for v in values if v < band]
        if not values:
            raise ValueError("no realizable amounts left after excluding the terminal band")
    if mode == "set":
        return sorted(set(values))
    return values


def divisible_fraction(values: Sequence[int], m: int = 5) -> float:
    if len(values) == 0:
        raise ValueError("divisible_fraction of an empty list")
    if m < 1:
        raise ValueError(f"modulus must be >= 1, got {m}")
    return sum(1 for v in values if v % m == 0) / len(values)


def binom_upper_tail(n: int, q: float, s: int, inclusive: bool = True) -> float:
    """Exact binomial tail ``Pr(X >= s)`` for ``X ~ Bin(n, q)``.

    With ``inclusive=False`` the strict tail ``Pr(X > s)`` is returned instead.
    Terms are formed in log space and summed with ``math.fsum``.
    """
    if n < 0 or not 0 <= s <= n:
        raise ValueError(f"need 0 <= s <= n, got s={s}, n={n}")
    if not 0.0 < q < 1.0:
        raise ValueError(f"q must lie in (0, 1), got {q}")
    start = s if inclusive else s + 1
    if start <= 0:
        return 1.0
    if start > n:
        return 0.0
    log_q, log_1mq = math.log(q), math.log1p(-q)
    lg_n = math.lgamma(n + 1)
    terms = [
        math.exp(lg_n - math.lgamma(j + 1) - math.lgamma(n - j + 1) + j * log_q + (n - j) * log_1mq)
        for j in range(start, n + 1)
    ]
    return min(math.fsum(terms), 1.0)


def focal_point_test(
    outputs: Sequence[int],
    s: PaymentSchedule,
    m: int = 5,
    mode: PwMode = "set",
    max_y: int | None = None,
    exclude_terminal: bool = False,
) -> FocalTestResult:
    """Binomial test of how many workers stopped at earnings divisible by ``m``.

    ``max_y`` bounds the realizable set and defaults to the largest observed output.
    """
    if len(outputs) == 0:
        raise ValueError("focal test needs at least one output")
    ys = [int(y) for y in outputs]
    if min(ys) < 1:
        raise ValueError("all outputs must be >= 1; non-starters earn nothing")
    if max_y is None:
        max_y = max(ys)
    realizable = realizable_whole_cents(s, max_y, mode=mode, exclude_terminal=exclude_terminal)
    q = divisible_fraction(realizable, m)
    n = len(ys)
    successes = sum(1 for y in ys if whole_cents(s.total_payment(y)) % m == 0)
    if q >= 1.0:
        p_value = 1.0
    elif q <= 0.0:
        p_value = 1.0 if successes == 0 else 0.0
    else:
        p_value = binom_upper_tail(n, q, successes)
    return FocalTestResult(
        successes=successes, n=n, q=q, p_value=p_value, modulus=m, realizable=realizable
    )
