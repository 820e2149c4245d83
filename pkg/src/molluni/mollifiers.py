"""Centered symmetric mollifiers: normal, logistic and Laplace.

A :class:`MollifierSpec` is an immutable value.  All evaluation methods
are vectorized over ``x``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtri

from .numerics import (
    _scalar_or_array,
    bernoulli_number,
    log1p_exp,
    std_normal_cdf,
    std_normal_pdf,
)

__all__ = ["Family", "MollifierSpec", "MAX_MOMENT_ORDER"]

MAX_MOMENT_ORDER = 60


class Family(str, enum.Enum):
    NORMAL = "normal"
    LOGISTIC = "logistic"
    LAPLACE = "laplace"

    @classmethod
    def parse(cls, value: "Family | str") -> "Family":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            names = ", ".join(f.value for f in cls)
            raise ValueError(f"unknown mollifier family {value!r} (choose from {names})") from None


# Kurtosis of each family; constant in the scale.
_KURTOSIS = {Family.NORMAL: 3.0, Family.LOGISTIC: 21.0 / 5.0, Family.LAPLACE: 6.0}


@dataclass(frozen=True)
class MollifierSpec:
    """A centered symmetric mollifier ``L``.

    Attributes
    ----------
    family : Family
        Distribution family of ``L``.
    scale : float
        ``sigma`` for the normal, ``c`` for the logistic, ``b`` for the
        Laplace family.  Must be strictly positive.
    """

    family: Family
    scale: float

    def __post_init__(self):
        object.__setattr__(self, "family", Family.parse(self.family))
        scale = float(self.scale)
        if not (scale > 0 and math.isfinite(scale)):
            raise ValueError(f"mollifier scale must be finite and > 0, got {self.scale!r}")
        object.__setattr__(self, "scale", scale)

    @classmethod
    def normal(cls, sigma: float) -> "MollifierSpec":
        return cls(Family.NORMAL, sigma)

    @classmethod
    def logistic(cls, c: float) -> "MollifierSpec":
        return cls(Family.LOGISTIC, c)

    @classmethod
    def laplace(cls, b: float) -> "MollifierSpec":
        return cls(Family.LAPLACE, b)

    @classmethod
    def from_variance(cls, family: Family | str, variance: float) -> "MollifierSpec":
        """Mollifier of the given family with ``V[L] == variance``."""
        family = Family.parse(family)
        if not variance > 0:
            raise ValueError("variance must be > 0")
        if family is Family.NORMAL:
            scale = math.sqrt(variance)
        elif family is Family.LOGISTIC:
            scale = math.sqrt(3.0 * variance) / math.pi
        else:
            scale = math.sqrt(variance / 2.0)
        return cls(family, scale)

    # -- density and distribution ------------------------------------

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        s = self.scale
        z = np.abs(x) / s
        if self.family is Family.NORMAL:
            out = std_normal_pdf(z) / s
        elif self.family is Family.LOGISTIC:
            out = np.exp(-z - 2.0 * log1p_exp(-z)) / s
        else:
            out = 0.5 * np.exp(-z) / s
        return _scalar_or_array(np.asarray(out))

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        s = self.scale
        if self.family is Family.NORMAL:
            out = std_normal_cdf(x / s)
        elif self.family is Family.LOGISTIC:
            with np.errstate(over="ignore"):
                out = 1.0 / (1.0 + np.exp(-x / s))
        else:
            with np.errstate(over="ignore"):
                half_tail = 0.5 * np.exp(-np.abs(x) / s)
            out = np.where(x < 0, half_tail, 1.0 - half_tail)
        return _scalar_or_array(np.asarray(out, dtype=float))

    def sf(self, x):
        """Survival function ``P(L > x) = cdf(-x)``."""
        return self.cdf(-np.asarray(x, dtype=float))

    def integrated_cdf(self, x):
        """Antiderivative ``G(x) = int_{-inf}^x F_L(t) dt``.

        Returned as ``max(x, 0) + tail(|x|)`` where ``tail`` is the
        non-negative smooth correction; this form is free of cancellation
        and makes ``G(x) - G(x - 1)`` the mollified uniform cdf.
        """
        x = np.asarray(x, dtype=float)
        return _scalar_or_array(np.maximum(x, 0.0) + self._integrated_tail(np.abs(x)))

    def _integrated_tail(self, v):
        s = self.scale
        u = v / s
        if self.family is Family.NORMAL:
            # phi(u) - u * (1 - Phi(u)): from the antiderivative phi + u*Phi of Phi
            out = s * (std_normal_pdf(u) - u * std_normal_cdf(-u))
            return np.maximum(out, 0.0)
        if self.family is Family.LOGISTIC:
            return s * np.log1p(np.exp(-u))
        return 0.5 * s * np.exp(-u)

    def quantile(self, u):
        """Inverse cdf; used for inverse-transform sampling."""
        u = np.asarray(u, dtype=float)
        if np.any(~((u > 0) & (u < 1))):
            raise ValueError("quantile requires 0 < u < 1")
        s = self.scale
        if self.family is Family.NORMAL:
            out = s * ndtri(u)
        elif self.family is Family.LOGISTIC:
            out = s * (np.log(u) - np.log1p(-u))
        else:
            out = np.where(u < 0.5, s * np.log(2.0 * u), -s * np.log(2.0 * (1.0 - u)))
        return _scalar_or_array(np.asarray(out))

    # -- moments -----------------------------------------------------

    def even_moment(self, k: int) -> float:
        """``E[L^k]`` for even ``k`` between 0 and 60."""
        if not isinstance(k, (int, np.integer)) or k < 0 or k % 2:
            raise ValueError(f"even_moment needs an even non-negative order, got {k!r}")
        if k > MAX_MOMENT_ORDER:
            raise ValueError(f"moment order {k} exceeds {MAX_MOMENT_ORDER}")
        k = int(k)
        if k == 0:
            return 1.0
        s = self.scale
        if self.family is Family.NORMAL:
            return s**k * math.prod(range(k - 1, 0, -2))
        if self.family is Family.LAPLACE:
            return s**k * math.factorial(k)
        # (2^k - 2) |B_k| (pi c)^k
        coeff = (2**k - 2) * abs(bernoulli_number(k))
        return float(coeff) * (math.pi * s) ** k

    def moment(self, k: int) -> float:
        """``E[L^k]`` for any order; odd orders vanish by symmetry."""
        if not isinstance(k, (int, np.integer)) or k < 0:
            raise ValueError(f"moment order must be a non-negative integer, got {k!r}")
        if k % 2:
            return 0.0
        return self.even_moment(k)

    @property
    def variance(self) -> float:
        s = self.scale
        if self.family is Family.NORMAL:
            return s * s
        if self.family is Family.LOGISTIC:
            return math.pi**2 * s * s / 3.0
        return 2.0 * s * s

    @property
    def kurtosis(self) -> float:
        return _KURTOSIS[self.family]

    def variance_and_kurtosis(self) -> tuple[float, float]:
        return self.variance, self.kurtosis

    # -- sampling ----------------------------------------------------

    def sample(self, rng: np.random.Generator, size=None):
        """Draw from ``L`` using the caller's generator.

        Logistic and Laplace variates use inverse transform of one uniform
        each; normal variates use the generator's exact normal method.
        """
        if self.family is Family.NORMAL:
            return self.scale * rng.standard_normal(size)
        u = rng.random(size)
        # rng.random() can return exactly 0
        u = np.where(u == 0.0, np.nextafter(0.0, 1.0), u)
        return self.quantile(u)
