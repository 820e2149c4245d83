"""The mollified uniform distribution ``X = U + L``.

``U`` is uniform on (0, 1) and ``L`` an independent centered symmetric
mollifier, so ``X`` is symmetric about 1/2 with density
``F_L(x) - F_L(x - 1)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np

from . import softclip
from .errors import ConvergenceError
from .mollifiers import Family, MollifierSpec
from .numerics import _scalar_or_array

__all__ = [
    "MollifiedUniform",
    "MAX_MOMENT_ORDER",
    "UNIFORM_KURTOSIS",
    "kurtosis_from_variance",
    "kurtosis_curve",
]

MAX_MOMENT_ORDER = 30
UNIFORM_KURTOSIS = 9.0 / 5.0

_QF_CDF_TOL = 1e-13
_QF_MAX_ITER = 200


def _centered_uniform_moment(j: int) -> Fraction:
    # E[(U - 1/2)^j]
    if j % 2:
        return Fraction(0)
    return Fraction(1, 2**j * (j + 1))


def _check_order(n) -> int:
    if not isinstance(n, (int, np.integer)) or n < 0:
        raise ValueError(f"moment order must be a non-negative integer, got {n!r}")
    if n > MAX_MOMENT_ORDER:
        raise ValueError(f"moment order {n} exceeds {MAX_MOMENT_ORDER}")
    return int(n)


def kurtosis_from_variance(variance: float, mollifier_kurtosis: float) -> float:
    """Kurtosis of ``U + L`` given ``V[L]`` and ``kappa(L)``.

    ``variance == 0`` is the pure uniform limit 9/5.
    """
    v = float(variance)
    if v < 0:
        raise ValueError("variance must be >= 0")
    return (1.0 / 80.0 + 0.5 * v + v * v * mollifier_kurtosis) / (1.0 / 12.0 + v) ** 2


@dataclass(frozen=True)
class MollifiedUniform:
    """Mollified uniform distribution with the given mollifier."""

    mollifier: MollifierSpec

    @classmethod
    def of(cls, family: Family | str, scale: float) -> "MollifiedUniform":
        return cls(MollifierSpec(Family.parse(family), scale))

    @property
    def family(self) -> Family:
        return self.mollifier.family

    @property
    def scale(self) -> float:
        return self.mollifier.scale

    # -- density, cdf, qf ----------------------------------------------

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        if self.family is Family.LOGISTIC:
            return softclip.sc_deriv(x, self.scale)
        # Fold onto x <= 1/2 so the difference never involves two values near 1.
        y = np.minimum(x, 1.0 - x)
        out = self.mollifier.cdf(y) - self.mollifier.cdf(y - 1.0)
        return _scalar_or_array(np.maximum(np.asarray(out), 0.0))

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        if self.family is Family.LOGISTIC:
            return softclip.sc(x, self.scale)
        with np.errstate(invalid="ignore"):
            t0 = self.mollifier._integrated_tail(np.abs(x))
            t1 = self.mollifier._integrated_tail(np.abs(x - 1.0))
        t0 = np.where(np.isinf(x), 0.0, t0)
        t1 = np.where(np.isinf(x), 0.0, t1)
        out = np.clip(x, 0.0, 1.0) + t0 - t1
        return _scalar_or_array(np.clip(out, 0.0, 1.0))

    def qf(self, q):
        """Quantile function for ``0 < q < 1``.

        Closed form for the logistic mollifier; otherwise a safeguarded
        Newton iteration on the cdf, evaluated for ``q <= 1/2`` and
        reflected so that ``qf(1 - q) == 1 - qf(q)``.
        """
        q = np.asarray(q, dtype=float)
        if np.any(~((q > 0) & (q < 1))):
            raise ValueError("qf requires 0 < q < 1")
        if self.family is Family.LOGISTIC:
            return softclip.sc_inv(q, self.scale)
        solve = np.frompyfunc(self._qf_scalar, 1, 1)
        return _scalar_or_array(np.asarray(solve(q), dtype=float))

    def _qf_scalar(self, q: float) -> float:
        if q == 0.5:
            return 0.5
        if q > 0.5:
            return 1.0 - self._qf_lower(1.0 - q)
        return self._qf_lower(q)

    def _qf_lower(self, q: float) -> float:
        hi = 0.5
        width = 1.0 + self.scale
        lo = hi - width
        while float(self.cdf(lo)) >= q:
            width *= 2.0
            lo = hi - width
            if width > 1e300:
                raise ConvergenceError(f"cannot bracket quantile {q}")
        x = max(lo, min(hi, q))
        for _ in range(_QF_MAX_ITER):
            fx = float(self.cdf(x)) - q
            if abs(fx) <= _QF_CDF_TOL * max(q, 1e-3):
                return x
            if fx > 0:
                hi = x
            else:
                lo = x
            d = float(self.pdf(x))
            step_ok = False
            if d > 0:
                x_new = x - fx / d
                step_ok = lo < x_new < hi
            if not step_ok:
                x_new = 0.5 * (lo + hi)
            if x_new == x or hi - lo <= 4.0 * np.spacing(max(abs(lo), abs(hi))):
                return x_new
            x = x_new
        raise ConvergenceError(f"quantile iteration for q={q} did not converge", last=x)

    # -- moments -------------------------------------------------------

    @property
    def mean(self) -> float:
        return 0.5

    @property
    def variance(self) -> float:
        return 1.0 / 12.0 + self.mollifier.variance

    def raw_moment(self, n: int) -> float:
        """``E[X^n]`` by the binomial expansion over ``U`` and ``L``."""
        n = _check_order(n)
        total = 0.0
        for k in range(0, n + 1, 2):
            coeff = Fraction(math.comb(n, k), n - k + 1)
            total += float(coeff) * self.mollifier.even_moment(k)
        return total

    def central_moment(self, n: int) -> float:
        """``E[(X - 1/2)^n]``; exactly zero for odd ``n``.

        Expands ``X - 1/2 = (U - 1/2) + L`` so that every summand is
        non-negative.  Summing raw moments against powers of ``-1/2``
        gives the same value but cancels badly for large ``n``.
        """
        n = _check_order(n)
        if n % 2:
            return 0.0
        total = 0.0
        for k in range(0, n + 1, 2):
            coeff = math.comb(n, k) * _centered_uniform_moment(n - k)
            total += float(coeff) * self.mollifier.even_moment(k)
        return total

    def kurtosis(self) -> float:
        v, kappa = self.mollifier.variance_and_kurtosis()
        return kurtosis_from_variance(v, kappa)

    # -- sampling ------------------------------------------------------

    def sample(self, count: int, rng: np.random.Generator) -> np.ndarray:
        """``count`` independent draws of ``U + L``.

        All uniforms are drawn first, then all mollifier variates, so the
        result depends only on ``count`` and the generator state.
        """
        if count < 1:
            raise ValueError("count must be >= 1")
        u = rng.random(count)
        return u + self.mollifier.sample(rng, count)


def kurtosis_curve(
    family: Family | str,
    variance_grid: Iterable[float],
    include_limit: bool = True,
) -> list[tuple[str, float, float]]:
    """Rows ``(family, V[L], kappa(X))`` over a grid of mollifier variances.

    With ``include_limit`` a leading ``V[L] = 0`` row carries the uniform
    limit 9/5.
    """
    family = Family.parse(family)
    grid = [float(v) for v in variance_grid]
    if any(not (v > 0 and math.isfinite(v)) for v in grid):
        raise ValueError("variance grid must be positive and finite")
    rows = []
    if include_limit:
        rows.append((family.value, 0.0, UNIFORM_KURTOSIS))
    for v in grid:
        dist = MollifiedUniform(MollifierSpec.from_variance(family, v))
        rows.append((family.value, v, dist.kurtosis()))
    return rows
