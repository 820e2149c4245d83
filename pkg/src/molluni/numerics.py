"""Special functions, stable kernels and numerical oracles.

Everything here is a pure function of its inputs.  Array inputs are
accepted wherever the operation is elementwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
from scipy import integrate as _integrate
from scipy import special

from .errors import DegenerateRecursionError, QuadratureError

__all__ = [
    "QuadratureResult",
    "log1p_exp",
    "log1m_exp",
    "std_normal_pdf",
    "std_normal_cdf",
    "bessel_i_scaled",
    "bernoulli_number",
    "integrate",
    "durbin_levinson",
]

_SQRT2 = math.sqrt(2.0)
_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)
_BERNOULLI_MAX = 60


def _scalar_or_array(out: np.ndarray):
    return out[()] if out.ndim == 0 else out


def log1p_exp(x):
    """Softplus ``ln(1 + exp(x))`` without overflow.

    Uses ``max(x, 0) + log1p(exp(-|x|))``, which keeps full relative
    precision in both tails.
    """
    x = np.asarray(x, dtype=float)
    out = np.maximum(x, 0.0) + np.log1p(np.exp(-np.abs(x)))
    return _scalar_or_array(out)


def log1m_exp(t):
    """``ln(1 - exp(-t))`` for ``t > 0``.

    Switches between ``log(-expm1(-t))`` and ``log1p(-exp(-t))`` at
    ``ln 2`` (Maechler's rule) so neither branch loses precision.
    """
    t = np.asarray(t, dtype=float)
    with np.errstate(divide="ignore"):
        out = np.where(
            t <= math.log(2.0),
            np.log(-np.expm1(-t)),
            np.log1p(-np.exp(-t)),
        )
    return _scalar_or_array(out)


def std_normal_pdf(x):
    x = np.asarray(x, dtype=float)
    return _scalar_or_array(_INV_SQRT_2PI * np.exp(-0.5 * x * x))


def std_normal_cdf(x):
    """Standard normal cdf via ``erfc``, accurate in the lower tail."""
    x = np.asarray(x, dtype=float)
    return _scalar_or_array(0.5 * special.erfc(-x / _SQRT2))


def bessel_i_scaled(order, z):
    """Exponentially scaled modified Bessel function ``exp(-z) * I_order(z)``.

    Parameters
    ----------
    order : int or array of int
        Non-negative integer order.
    z : float or array
        Argument, must be non-negative.
    """
    order = np.asarray(order)
    z = np.asarray(z, dtype=float)
    if np.any(z < 0):
        raise ValueError("bessel_i_scaled requires z >= 0")
    if np.any(order < 0) or not np.all(np.equal(np.mod(order, 1), 0)):
        raise ValueError("bessel_i_scaled requires a non-negative integer order")
    return _scalar_or_array(np.asarray(special.ive(order.astype(float), z)))


@lru_cache(maxsize=1)
def _bernoulli_table() -> tuple[Fraction, ...]:
    # sum_{k=0}^{n} C(n+1, k) B_k = 0, with B_0 = 1 (B_1 = -1/2 convention).
    table = [Fraction(1)]
    for n in range(1, _BERNOULLI_MAX + 1):
        acc = sum(math.comb(n + 1, k) * table[k] for k in range(n))
        table.append(-acc / (n + 1))
    return tuple(table)


def bernoulli_number(even_index: int) -> Fraction:
    """Exact Bernoulli number ``B_n`` for even ``n`` in ``2..60``."""
    if (
        not isinstance(even_index, (int, np.integer))
        or even_index <= 0
        or even_index % 2
        or even_index > _BERNOULLI_MAX
    ):
        raise ValueError(
            f"bernoulli_number needs an even index in [2, {_BERNOULLI_MAX}], "
            f"got {even_index!r}"
        )
    return _bernoulli_table()[int(even_index)]


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    abs_error_estimate: float

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise QuadratureError(f"non-finite integral value {self.value!r}")
        if not self.abs_error_estimate >= 0:
            raise QuadratureError("negative error estimate")


def integrate(
    f: Callable[[float], float],
    lower: float,
    upper: float,
    tol: float = 1e-12,
    points: Sequence[float] | None = None,
    limit: int = 500,
) -> QuadratureResult:
    """Adaptive Gauss-Kronrod integration of ``f`` over ``[lower, upper]``.

    Infinite endpoints are allowed.  ``points`` are interior break points
    (kinks or steep transitions); the interval is split there and each
    piece is integrated separately so the sub-panels resolve the feature.

    Raises
    ------
    QuadratureError
        If any piece fails to reach ``tol`` within ``limit`` subdivisions.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    if lower == upper:
        return QuadratureResult(0.0, 0.0)
    sign = 1.0
    if lower > upper:
        lower, upper, sign = upper, lower, -1.0

    edges = [lower]
    for p in sorted(points or ()):
        if lower < p < upper and p != edges[-1]:
            edges.append(float(p))
    edges.append(upper)

    total = 0.0
    err = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        out = _integrate.quad(
            f, a, b, epsabs=tol, epsrel=tol, limit=limit, full_output=1
        )
        value, abserr, info = out[0], out[1], out[2]
        ier = 0 if len(out) == 3 else 1
        target = max(tol, tol * abs(value))
        if ier and abserr > 10.0 * target:
            raise QuadratureError(
                f"quadrature on [{a}, {b}] stalled at error {abserr:.3g} "
                f"after {info['last']} subdivisions: {out[3]}"
            )
        total += value
        err += abserr
    return QuadratureResult(sign * total, err)


def durbin_levinson(acf: Sequence[float], max_lag: int) -> np.ndarray:
    """Partial autocorrelations at lags ``1..max_lag`` from an acf.

    Parameters
    ----------
    acf : sequence of float
        Autocorrelations ``rho(0), rho(1), ...`` with ``rho(0) == 1``.
    max_lag : int
        Highest lag; ``len(acf)`` must exceed it.

    Returns
    -------
    numpy.ndarray
        ``pacf[h - 1]`` is the partial autocorrelation at lag ``h``.
    """
    rho = np.asarray(acf, dtype=float)
    if max_lag < 1:
        raise ValueError("max_lag must be positive")
    if rho.ndim != 1 or rho.size <= max_lag:
        raise ValueError(f"need at least {max_lag + 1} autocorrelations")
    if abs(rho[0] - 1.0) > 1e-12:
        raise ValueError("acf[0] must equal 1")
    if np.any(np.abs(rho) > 1.0 + 1e-12):
        raise ValueError("autocorrelations must lie in [-1, 1]")

    pacf = np.empty(max_lag)
    phi = np.zeros(0)
    v = 1.0
    for h in range(1, max_lag + 1):
        num = rho[h] - np.dot(phi, rho[h - 1 : 0 : -1])
        if abs(v) < 1e-14:
            raise DegenerateRecursionError(
                f"prediction variance vanished at lag {h}"
            )
        phi_hh = num / v
        phi = np.append(phi - phi_hh * phi[::-1], phi_hh)
        v *= 1.0 - phi_hh * phi_hh
        pacf[h - 1] = phi_hh
    return pacf
