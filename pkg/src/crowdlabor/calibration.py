"""Log-normal reservation-wage calibration, extensive-margin supply and elasticity.

Wages here are in dollars per hour; ``mu`` and ``sigma`` describe log wages.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from crowdlabor.stats import norm_cdf, norm_pdf

DEFAULT_PROBS = (0.25, 0.5, 0.75)


@dataclass(frozen=True)
class CalibrationResult:
    mu: float
    sigma: float
    n: int
    quantiles: dict[float, float] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "mu": self.mu,
            "sigma": self.sigma,
            "n": self.n,
            "quantiles": {f"{p:g}": q for p, q in self.quantiles.items()},
        }


def empirical_quantiles(wages: Sequence[float], probs: Sequence[float]) -> list[float]:
    """Order-statistic quantiles, interpolating linearly between neighbours."""
    x = np.sort(np.asarray(wages, dtype=float))
    if x.size == 0:
        raise ValueError("quantiles of an empty sample")
    out = []
    for p in probs:
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"probability {p} outside [0, 1]")
        h = (x.size - 1) * p
        lo = math.floor(h)
        hi = min(lo + 1, x.size - 1)
        out.append(float(x[lo] + (h - lo) * (x[hi] - x[lo])))
    return out


def fit_lognormal(wages: Sequence[float], probs: Sequence[float] = DEFAULT_PROBS) -> CalibrationResult:
    """Mean and (n-1) standard deviation of log wages, plus empirical quantiles."""
    w = np.asarray(wages, dtype=float)
    if w.size < 2:
        raise ValueError(f"need at least 2 wages, got {w.size}")
    if np.any(~(w > 0)) or not np.all(np.isfinite(w)):
        raise ValueError("wages must be finite and strictly positive")
    logs = np.log(w)
    mu = float(logs.mean())
    sigma = float(logs.std(ddof=1))
    if not sigma > 0:
        raise ValueError("degenerate sample: all wages equal, sigma = 0")
    qs = empirical_quantiles(w, probs)
    return CalibrationResult(mu=mu, sigma=sigma, n=int(w.size), quantiles=dict(zip(probs, qs)))


def _z(mu: float, sigma: float, w: float) -> float:
    if not w > 0:
        raise ValueError(f"wage must be positive, got {w}")
    if not sigma > 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    return (math.log(w) - mu) / sigma


def supply_fraction(mu: float, sigma: float, w: float) -> float:
    """Share of workers whose reservation wage is at most ``w``."""
    return norm_cdf(_z(mu, sigma, w))


def supply_curve(n_s: float, mu: float, sigma: float, w: float) -> float:
    return n_s * supply_fraction(mu, sigma, w)


def point_elasticity(mu: float, sigma: float, w: float) -> float:
    """``d ln S / d ln w`` for log-normal reservation wages."""
    z = _z(mu, sigma, w)
    cdf = norm_cdf(z)
    if cdf == 0.0:
        # Mills-ratio asymptote phi(z)/Phi(z) ~ -z for z -> -inf.
        return -z / sigma
    return norm_pdf(z) / (sigma * cdf)


def elasticity_table(result: CalibrationResult, wages: dict[str, float]) -> list[dict]:
    """Rows of (label, wage, elasticity) evaluated at the fitted log-normal."""
    return [
        {"label": label, "wage_usd_per_hr": w, "elasticity": point_elasticity(result.mu, result.sigma, w)}
        for label, w in wages.items()
    ]
