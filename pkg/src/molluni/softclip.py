"""Soft-clipping response function, its inverse, and the cReLU limit.

``sc(x, c)`` is the cdf of the logistic-mollified uniform distribution.
It is a smooth, strictly increasing map of the real line onto (0, 1)
that tends to ``crelu`` as ``c -> 0``.  Only the overflow-free forms are
evaluated here.
"""

from __future__ import annotations

import math

import numpy as np

from .numerics import _scalar_or_array, log1m_exp, log1p_exp

__all__ = [
    "check_scale",
    "crelu",
    "sc",
    "sc_inv",
    "sc_sf",
    "sc_isf",
    "log_sc",
    "sc_deriv",
    "sc_deriv2",
]

# Below this x/c the leading-order expansion of log sc is exact in double
# precision (the neglected term is of order exp(2x/c)).
_LOG_SC_ASYMPTOTIC = -30.0


def check_scale(c) -> float:
    c = float(c)
    if not (c > 0 and math.isfinite(c)):
        raise ValueError(f"soft-clipping scale c must be finite and > 0, got {c!r}")
    return c


def crelu(x):
    """Clipped ReLU ``min(1, max(0, x))``."""
    x = np.asarray(x, dtype=float)
    return _scalar_or_array(np.clip(x, 0.0, 1.0))


def _softplus_tail(u):
    # ln(1 + exp(-|u|)), the smooth correction around each kink
    return np.log1p(np.exp(-np.abs(u)))


def sc(x, c):
    """Soft clipping function ``sc_c(x)``.

    Evaluated as ``crelu(x) + c*ln(1+e^{-|x|/c}) - c*ln(1+e^{-|1-x|/c})``.
    """
    c = check_scale(c)
    x = np.asarray(x, dtype=float)
    out = np.clip(x, 0.0, 1.0) + c * (_softplus_tail(x / c) - _softplus_tail((1.0 - x) / c))
    return _scalar_or_array(out)


def sc_inv(q, c):
    """Inverse soft clipping ``sc_c^{-1}(q)`` for ``0 < q < 1``."""
    c = check_scale(c)
    q = np.asarray(q, dtype=float)
    if np.any(~((q > 0) & (q < 1))):
        raise ValueError("sc_inv requires 0 < q < 1")
    out = q + c * (log1m_exp(q / c) - log1m_exp((1.0 - q) / c))
    return _scalar_or_array(np.asarray(out))


def sc_sf(x, c):
    """Upper tail ``1 - sc_c(x)``, accurate where ``sc_c(x)`` rounds to 1."""
    return sc(1.0 - np.asarray(x, dtype=float), c)


def sc_isf(p, c):
    """Inverse of :func:`sc_sf`: the ``x`` with ``1 - sc_c(x) == p``."""
    return 1.0 - np.asarray(sc_inv(p, c))


def log_sc(x, c):
    """``ln sc_c(x)``, finite even where ``sc_c(x)`` underflows.

    ``ln(1 - sc_c(x))`` is ``log_sc(1 - x, c)`` by symmetry.
    """
    c = check_scale(c)
    x = np.asarray(x, dtype=float)
    u = x / c
    with np.errstate(divide="ignore"):
        direct = np.log(sc(x, c))
    e = np.exp(np.minimum(u, _LOG_SC_ASYMPTOTIC))
    asym = (
        math.log(c)
        + u
        + float(log1m_exp(1.0 / c))
        + np.log1p(-0.5 * e * (1.0 + math.exp(-1.0 / c)))
    )
    out = np.where(u < _LOG_SC_ASYMPTOTIC, asym, direct)
    return _scalar_or_array(out)


def sc_deriv(x, c):
    """First derivative of ``sc_c``: the logistic-mollified uniform pdf."""
    c = check_scale(c)
    x = np.asarray(x, dtype=float)
    log_f = (
        -log1p_exp(-x / c)
        + log1m_exp(1.0 / c)
        - log1p_exp((x - 1.0) / c)
    )
    return _scalar_or_array(np.exp(log_f))


def _logistic_pdf(x, c):
    z = -np.abs(x) / c
    return np.exp(z - 2.0 * log1p_exp(z)) / c


def sc_deriv2(x, c):
    """Second derivative of ``sc_c``: difference of logistic densities."""
    c = check_scale(c)
    x = np.asarray(x, dtype=float)
    return _scalar_or_array(_logistic_pdf(x, c) - _logistic_pdf(x - 1.0, c))
