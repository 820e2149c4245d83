"""Skellam-mollified discrete uniform distribution ``Y = V + Z``.

``V`` is uniform on ``{1, ..., m}`` and ``Z ~ Skellam(lambda, lambda)``
is an independent symmetric integer mollifier.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache

import numpy as np

from .errors import ConvergenceError, TruncationError
from .numerics import _scalar_or_array, bessel_i_scaled

__all__ = [
    "SkellamSpec",
    "DiscreteMollifiedUniform",
    "uniform_raw_moment",
    "uniform_central_moment",
    "skellam_moment",
    "kurtosis_argmax",
    "MAX_TRUNCATION",
]

# Largest one-sided truncation point K(lambda) the Skellam tables may use.
MAX_TRUNCATION = 5_000_000
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def _check_int(value, name: str) -> int:
    if isinstance(value, (bool, np.bool_)) or not isinstance(value, (int, np.integer)):
        raise ValueError(f"{name} must be an integer, got {value!r}")
    return int(value)


@dataclass(frozen=True)
class SkellamSpec:
    """Symmetric Skellam law ``Sk(lambda, lambda)``, a difference of Poissons."""

    lam: float

    def __post_init__(self):
        lam = float(self.lam)
        if not (lam > 0 and math.isfinite(lam)):
            raise ValueError(f"Skellam lambda must be finite and > 0, got {self.lam!r}")
        object.__setattr__(self, "lam", lam)

    @property
    def variance(self) -> float:
        return 2.0 * self.lam

    @property
    def kurtosis(self) -> float:
        return 3.0 + 1.0 / (2.0 * self.lam)

    @cached_property
    def truncation(self) -> int:
        """One-sided support bound ``K``; ``P(|Z| > K) < 1e-13``."""
        v = 2.0 * self.lam
        k = math.ceil(v + 12.0 * math.sqrt(v) + 30.0)
        if k > MAX_TRUNCATION:
            raise TruncationError(
                f"Skellam truncation point {k} exceeds budget {MAX_TRUNCATION}"
            )
        return k

    @cached_property
    def _lower_cdf_table(self) -> np.ndarray:
        # cumulative mass of k = -K .. 0, summed from the far tail inward
        K = self.truncation
        ks = np.arange(K, -1, -1)
        mass = bessel_i_scaled(ks, 2.0 * self.lam)
        return np.cumsum(mass)

    def pmf(self, k):
        """``P(Z = k) = exp(-2 lambda) I_|k|(2 lambda)``."""
        k = np.asarray(k)
        if not np.all(np.equal(np.mod(k, 1), 0)):
            raise ValueError("Skellam pmf is defined on the integers")
        return _scalar_or_array(np.asarray(bessel_i_scaled(np.abs(k), 2.0 * self.lam)))

    def cdf(self, k):
        """``P(Z <= k)``.

        Sums the tabulated masses for ``k < 0`` and uses
        ``P(Z <= k) = 1 - P(Z <= -k - 1)`` otherwise, so the symmetry
        identity holds to rounding.
        """
        k = np.asarray(k)
        if not np.all(np.equal(np.mod(k, 1), 0)):
            raise ValueError("Skellam cdf is defined on the integers")
        k = k.astype(np.int64)
        table = self._lower_cdf_table
        K = self.truncation

        def lower(j):
            # P(Z <= j) for j <= -1
            idx = j + K
            return np.where(idx >= 0, table[np.clip(idx, 0, K)], 0.0)

        out = np.where(k < 0, lower(np.minimum(k, -1)), 1.0 - lower(np.minimum(-k - 1, -1)))
        return _scalar_or_array(np.asarray(out))

    def moment(self, n: int) -> float:
        return skellam_moment(self.lam, n)


@lru_cache(maxsize=None)
def _uniform_central_moment_exact(m: int, n: int) -> Fraction:
    centre = Fraction(m + 1, 2)
    return sum((Fraction(k) - centre) ** n for k in range(1, m + 1)) / m


def uniform_raw_moment(m: int, n: int) -> float:
    """``E[V^n]`` for ``V`` uniform on ``{1..m}``, by exact power sums."""
    m = _check_int(m, "m")
    n = _check_int(n, "n")
    if m < 2:
        raise ValueError("m must be >= 2")
    if not 0 <= n <= 12:
        raise ValueError("uniform moment order must be in 0..12")
    return float(Fraction(sum(k**n for k in range(1, m + 1)), m))


def uniform_central_moment(m: int, n: int) -> float:
    """``E[(V - (m+1)/2)^n]``; odd orders vanish."""
    m = _check_int(m, "m")
    n = _check_int(n, "n")
    if m < 2:
        raise ValueError("m must be >= 2")
    if not 0 <= n <= 12:
        raise ValueError("uniform moment order must be in 0..12")
    return float(_uniform_central_moment_exact(m, n))


def skellam_moment(lam: float, n: int) -> float:
    """``E[Z^n]`` for ``Z ~ Sk(lambda, lambda)``.

    Every even cumulant equals ``2 lambda`` and every odd one is zero;
    moments follow from the cumulant recursion
    ``mu_n = sum_k C(n-1, k-1) kappa_k mu_{n-k}``.
    """
    n = _check_int(n, "n")
    if n < 0:
        raise ValueError("moment order must be >= 0")
    mu = [1.0]
    for j in range(1, n + 1):
        mu.append(
            sum(math.comb(j - 1, k - 1) * 2.0 * lam * mu[j - k] for k in range(2, j + 1, 2))
        )
    return mu[n]


@dataclass(frozen=True)
class DiscreteMollifiedUniform:
    """``Y = V + Z`` with ``V ~ U{1..m}`` and ``Z ~ Sk(lambda, lambda)``."""

    m: int
    lam: float

    def __post_init__(self):
        m = _check_int(self.m, "m")
        if m < 2:
            raise ValueError(f"m must be >= 2, got {m}")
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "lam", SkellamSpec(self.lam).lam)

    @cached_property
    def skellam(self) -> SkellamSpec:
        return SkellamSpec(self.lam)

    @property
    def mean(self) -> float:
        return (self.m + 1) / 2.0

    @property
    def support_bound(self) -> int:
        """``K`` such that mass outside ``[1 - K, m + K]`` is below 1e-13."""
        return self.skellam.truncation

    def pmf(self, y):
        """``(P(Z <= y - 1) - P(Z <= y - m - 1)) / m``."""
        y = np.asarray(y).astype(np.int64)
        z = self.skellam
        out = (z.cdf(y - 1) - z.cdf(y - self.m - 1)) / self.m
        return _scalar_or_array(np.maximum(np.asarray(out), 0.0))

    def pmf_convolution(self, y):
        """Direct convolution ``sum_k P(Z = y - k) / m``; reference form."""
        y = np.asarray(y).astype(np.int64)
        ks = np.arange(1, self.m + 1)
        mass = self.skellam.pmf(y[..., None] - ks)
        return _scalar_or_array(np.asarray(mass.sum(axis=-1) / self.m))

    def cdf(self, y):
        """``sum_k P(Z <= y - k) / m``."""
        y = np.asarray(y).astype(np.int64)
        ks = np.arange(1, self.m + 1)
        out = self.skellam.cdf(y[..., None] - ks).sum(axis=-1) / self.m
        return _scalar_or_array(np.clip(np.asarray(out), 0.0, 1.0))

    def central_moment(self, n: int) -> float:
        """``E[(Y - (m+1)/2)^n]`` for ``n <= 8``; odd orders are exactly 0."""
        n = _check_int(n, "n")
        if not 0 <= n <= 8:
            raise ValueError("central moment order must be in 0..8")
        if n % 2:
            return 0.0
        return sum(
            math.comb(n, k)
            * uniform_central_moment(self.m, n - k)
            * skellam_moment(self.lam, k)
            for k in range(0, n + 1, 2)
        )

    @property
    def variance(self) -> float:
        return (self.m**2 - 1) / 12.0 + 2.0 * self.lam

    def kurtosis(self) -> float:
        m2 = self.m**2
        vz = 2.0 * self.lam
        kz = 3.0 + 1.0 / (2.0 * self.lam)
        num = (3.0 * m2 * m2 - 10.0 * m2 + 7.0) / 240.0 + 0.5 * (m2 - 1) * vz + vz * vz * kz
        return num / ((m2 - 1) / 12.0 + vz) ** 2

    def excess_kurtosis(self) -> float:
        """``kurtosis() - 3`` without the cancellation near 3.

        Fourth cumulants add under convolution: the uniform contributes
        ``mu4 - 3 mu2^2`` (exact rational) and the Skellam ``2 lambda``.
        """
        fourth_v = _uniform_central_moment_exact(self.m, 4) - 3 * _uniform_central_moment_exact(self.m, 2) ** 2
        return (float(fourth_v) + 2.0 * self.lam) / self.variance**2

    @classmethod
    def uniform_limit_kurtosis(cls, m: int) -> float:
        """Kurtosis of ``V`` alone, the ``lambda -> 0`` limit."""
        m = _check_int(m, "m")
        return float(_uniform_central_moment_exact(m, 4) / _uniform_central_moment_exact(m, 2) ** 2)


def _golden_max(f, lo: float, hi: float, tol: float, max_iter: int = 500):
    a, b = lo, hi
    x1 = b - _GOLDEN * (b - a)
    x2 = a + _GOLDEN * (b - a)
    f1, f2 = f(x1), f(x2)
    for _ in range(max_iter):
        if b - a <= tol:
            x = 0.5 * (a + b)
            return x, f(x)
        if f1 < f2:
            a, x1, f1 = x1, x2, f2
            x2 = a + _GOLDEN * (b - a)
            f2 = f(x2)
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - _GOLDEN * (b - a)
            f1 = f(x1)
    raise ConvergenceError("golden-section search did not converge", last=(0.5 * (a + b)))


def kurtosis_argmax(
    m: int, log_lo: float = -8.0, log_hi: float = 12.0, grid_points: int = 401
) -> tuple[float, float]:
    """Maximize the kurtosis of ``Y`` over ``lambda > 0``.

    Scans ``log10(lambda)`` on a grid, then refines the best cell by
    golden-section search in ``ln(lambda)``.  The objective is the
    excess kurtosis, which is evaluated without cancellation.

    Returns
    -------
    (lambda_star, kappa_max)
    """
    m = _check_int(m, "m")
    if m < 2:
        raise ValueError("m must be >= 2")

    def objective(log_lam: float) -> float:
        return DiscreteMollifiedUniform(m, math.exp(log_lam)).excess_kurtosis()

    grid = np.linspace(log_lo, log_hi, grid_points) * math.log(10.0)
    values = np.array([objective(g) for g in grid])
    i = int(np.argmax(values))
    if i == 0 or i == grid.size - 1:
        raise ConvergenceError(
            f"kurtosis maximum not interior to lambda in [1e{log_lo:g}, 1e{log_hi:g}]",
            last=math.exp(grid[i]),
        )
    log_star, excess = _golden_max(objective, grid[i - 1], grid[i + 1], tol=1e-11)
    return math.exp(log_star), 3.0 + excess
