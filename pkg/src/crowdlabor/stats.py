"""Small statistics kernel: robust OLS, Gaussian KDE, geometric means, standard normal."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

SQRT2 = math.sqrt(2.0)
INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)


def norm_pdf(z: float) -> float:
    return INV_SQRT_2PI * math.exp(-0.5 * z * z)


def norm_cdf(z: float) -> float:
    # erfc keeps full relative precision in the lower tail, where 1 + erf(x) cancels.
    return 0.5 * math.erfc(-z / SQRT2)


@dataclass(frozen=True)
class RegressionFit:
    coefficients: np.ndarray
    robust_se: np.ndarray
    r_squared: float
    n: int
    names: tuple[str, ...] = ()
    variant: str = "HC1"

    def coef(self, name: str) -> float:
        return float(self.coefficients[self.names.index(name)])

    def se(self, name: str) -> float:
        return float(self.robust_se[self.names.index(name)])

    def to_dict(self) -> dict:
        names = self.names or tuple(f"x{i}" for i in range(len(self.coefficients)))
        return {
            "n": self.n,
            "r_squared": self.r_squared,
            "variant": self.variant,
            "coefficients": {k: float(v) for k, v in zip(names, self.coefficients)},
            "robust_se": {k: float(v) for k, v in zip(names, self.robust_se)},
        }


def ols_robust(
    design: np.ndarray,
    response: np.ndarray,
    variant: Literal["HC0", "HC1"] = "HC1",
    names: Sequence[str] = (),
) -> RegressionFit:
    """Least squares via QR with heteroskedasticity-consistent (sandwich) standard errors.

    HC1 multiplies the HC0 covariance by ``n / (n - p)``. When ``n == p`` the
    fit is exact, every residual is zero and the standard errors are reported as 0.
    """
    X = np.asarray(design, dtype=float)
    y = np.asarray(response, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    n, p = X.shape
    if y.shape != (n,):
        raise ValueError(f"response has shape {y.shape}, expected ({n},)")
    if variant not in ("HC0", "HC1"):
        raise ValueError(f"unknown robust variant {variant!r}")
    if n < p or n == 0:
        raise ValueError(f"need at least as many observations as regressors (n={n}, p={p})")
    if names and len(names) != p:
        raise ValueError("one name per regressor column required")

    Q, R = np.linalg.qr(X, mode="reduced")
    diag = np.abs(np.diag(R))
    if diag.min() <= 1e-10 * max(diag.max(), 1.0):
        raise ValueError("design matrix is rank deficient")
    beta = np.linalg.solve(R, Q.T @ y)
    resid = np.zeros(n) if n == p else y - X @ beta

    r_inv = np.linalg.inv(R)
    bread = r_inv @ r_inv.T  # (X'X)^-1
    meat = (X * resid[:, None] ** 2).T @ X
    cov = bread @ meat @ bread
    if variant == "HC1" and n > p:
        cov = cov * (n / (n - p))
    se = np.sqrt(np.clip(np.diag(cov), 0.0, None))

    sst = float(np.sum((y - y.mean()) ** 2))
    ssr = float(resid @ resid)
    # clipped against rounding; designs used here always carry an intercept
    r2 = 0.0 if sst == 0.0 else min(max(1.0 - ssr / sst, 0.0), 1.0)
    return RegressionFit(
        coefficients=beta, robust_se=se, r_squared=r2, n=n, names=tuple(names), variant=variant
    )


def silverman_bandwidth(data: np.ndarray) -> float:
    x = np.asarray(data, dtype=float)
    n = x.size
    sd = float(np.std(x, ddof=1)) if n > 1 else 0.0
    q75, q25 = np.percentile(x, [75, 25])
    iqr = float(q75 - q25) / 1.34
    spread = min(sd, iqr) if iqr > 0 else sd
    if spread <= 0:
        raise ValueError("data have no spread; pass an explicit bandwidth")
    return 0.9 * spread * n ** (-0.2)


def kde(data, eval_points, bandwidth: float | None = None) -> np.ndarray:
    """Gaussian kernel density estimate at ``eval_points`` (Silverman bandwidth by default)."""
    x = np.asarray(data, dtype=float).ravel()
    if x.size == 0:
        raise ValueError("kde needs at least one observation")
    if bandwidth is None:
        bandwidth = silverman_bandwidth(x)
    elif not bandwidth > 0:
        raise ValueError(f"bandwidth must be positive, got {bandwidth}")
    grid = np.asarray(eval_points, dtype=float)
    u = (grid[..., None] - x) / bandwidth
    return np.exp(-0.5 * u * u).sum(axis=-1) * INV_SQRT_2PI / (x.size * bandwidth)


def geometric_mean(values) -> float:
    v = np.asarray(values, dtype=float)
    if v.size == 0:
        raise ValueError("geometric mean of an empty sample")
    if np.any(~(v > 0)):
        raise ValueError("geometric mean needs strictly positive values")
    return float(np.exp(np.mean(np.log(v))))
