"""AR(1)-like soft-clipping model for bounded counts.

``Y_t | Y_{t-1} ~ Bin(n, sc_c(a + b Y_{t-1} / n))`` is a finite Markov
chain on ``{0, ..., n}``; its marginal and serial dependence structure
are computed exactly from the transition matrix.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from . import softclip
from .errors import SingularSystemError
from .numerics import durbin_levinson

__all__ = [
    "Ar1ScModel",
    "StationaryAnalysis",
    "MAX_LAG",
    "transition_matrix",
    "log_transition_matrix",
    "stationary_distribution",
    "autocorrelations",
    "stationary_analysis",
    "sweep_figure3",
    "default_b_grid",
    "simulate_path",
]

MAX_LAG = 10
_RESIDUAL_TOL = 1e-12


@dataclass(frozen=True)
class Ar1ScModel:
    n: int
    a: float
    b: float
    c: float

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ValueError(f"state bound n must be a positive integer, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "c", softclip.check_scale(self.c))
        for name in ("a", "b"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")

    def transition_probs(self) -> np.ndarray:
        """Success probability ``pi_i`` in each state ``i = 0..n``."""
        return softclip.sc(self.a + self.b * np.arange(self.n + 1) / self.n, self.c)


@dataclass(frozen=True)
class StationaryAnalysis:
    stationary: np.ndarray
    mean: float
    variance: float
    acf: np.ndarray
    pacf: np.ndarray
    n: int

    @property
    def mean_norm(self) -> float:
        return self.mean / self.n

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "mean": self.mean,
            "mean_norm": self.mean_norm,
            "variance": self.variance,
            "acf": [float(v) for v in self.acf],
            "pacf": [float(v) for v in self.pacf],
            "stationary": [float(v) for v in self.stationary],
        }


def transition_matrix(model: Ar1ScModel) -> np.ndarray:
    """Row-stochastic ``(n+1) x (n+1)`` matrix of binomial pmf rows.

    Entries are assembled in the log domain (see
    :func:`log_transition_matrix`) and exponentiated once, so nothing
    overflows; entries below the double range round to 0.
    """
    return np.exp(log_transition_matrix(model))


def log_transition_matrix(model: Ar1ScModel) -> np.ndarray:
    """Elementwise log of the transition matrix, always finite.

    Built from log-gamma terms and ``ln sc``, ``ln(1 - sc)``.
    """
    n = model.n
    eta = model.a + model.b * np.arange(n + 1) / n
    log_p = softclip.log_sc(eta, model.c)[:, None]
    log_q = softclip.log_sc(1.0 - eta, model.c)[:, None]
    j = np.arange(n + 1)[None, :]
    log_comb = gammaln(n + 1.0) - gammaln(j + 1.0) - gammaln(n - j + 1.0)
    return log_comb + j * log_p + (n - j) * log_q


def stationary_distribution(P: np.ndarray) -> np.ndarray:
    """Unique left fixed vector ``pi P = pi`` with ``sum(pi) == 1``.

    Solves ``(P^T - I) pi = 0`` with one balance equation replaced by the
    normalization row.

    Raises
    ------
    SingularSystemError
        If the system is singular or the residual exceeds 1e-12.
    """
    P = np.asarray(P, dtype=float)
    if P.ndim != 2 or P.shape[0] != P.shape[1]:
        raise ValueError("transition matrix must be square")
    k = P.shape[0]
    A = P.T - np.eye(k)
    A[-1, :] = 1.0
    rhs = np.zeros(k)
    rhs[-1] = 1.0
    try:
        pi = np.linalg.solve(A, rhs)
    except np.linalg.LinAlgError as exc:
        raise SingularSystemError(f"stationary system is singular: {exc}") from exc
    residual = float(np.max(np.abs(pi @ P - pi)))
    if not residual < _RESIDUAL_TOL or np.any(pi < -_RESIDUAL_TOL):
        raise SingularSystemError(f"stationary solve residual {residual:.3g} too large")
    pi = np.maximum(pi, 0.0)
    return pi / pi.sum()


def autocorrelations(P: np.ndarray, stationary: np.ndarray, max_lag: int) -> np.ndarray:
    """``rho(0..max_lag)`` of the stationary chain on states ``0..k-1``."""
    s = np.arange(P.shape[0], dtype=float)
    mean = float(stationary @ s)
    var = float(stationary @ (s - mean) ** 2)
    out = np.empty(max_lag + 1)
    v = s - mean
    weighted = stationary * (s - mean)
    for h in range(max_lag + 1):
        out[h] = float(weighted @ v) / var
        v = P @ v
    out[0] = 1.0
    return out


def stationary_analysis(model: Ar1ScModel, max_lag: int = 2) -> StationaryAnalysis:
    """Stationary law, mean, variance, acf and pacf of the chain."""
    if not 2 <= max_lag <= MAX_LAG:
        raise ValueError(f"max_lag must be in 2..{MAX_LAG}")
    P = transition_matrix(model)
    pi = stationary_distribution(P)
    s = np.arange(model.n + 1, dtype=float)
    mean = float(pi @ s)
    variance = float(pi @ (s - mean) ** 2)
    acf = autocorrelations(P, pi, max_lag)
    pacf = durbin_levinson(acf, max_lag)
    return StationaryAnalysis(pi, mean, variance, acf, pacf, model.n)


def default_b_grid(step: float = 0.1, limit: float = 0.9) -> np.ndarray:
    """Symmetric slope grid ``-limit, ..., limit`` with the given step."""
    count = int(round(limit / step))
    if count < 1 or not math.isclose(count * step, limit, rel_tol=1e-9):
        raise ValueError("limit must be a positive multiple of step")
    return np.round(np.arange(-count, count + 1) * step, 12)


def _sweep_cell(args):
    n, c, b, target_mean = args
    res = stationary_analysis(Ar1ScModel(n, target_mean * (1.0 - b), b, c), max_lag=2)
    return (c, b, res.mean_norm, float(res.pacf[0]), float(res.pacf[1]))


def sweep_figure3(
    n: int = 30,
    c_values=(0.01, 0.1),
    b_grid=None,
    target_mean: float = 0.3,
    jobs: int = 1,
) -> list[tuple[float, float, float, float, float]]:
    """Rows ``(c, b, mean/n, pacf(1), pacf(2))`` with ``a = target_mean (1 - b)``.

    Under exact linearity the normalized mean would equal
    ``target_mean`` and the pacf would be ``b`` at lag 1 and 0 at lag 2.
    """
    grid = default_b_grid() if b_grid is None else np.asarray(b_grid, dtype=float)
    if np.any(np.abs(grid) >= 1.0):
        raise ValueError("slopes must lie in (-1, 1)")
    tasks = [(int(n), float(c), float(b), float(target_mean)) for c in c_values for b in grid]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_sweep_cell, tasks))
    return [_sweep_cell(t) for t in tasks]


def simulate_path(
    model: Ar1ScModel, length: int, y0: int, rng: np.random.Generator
) -> np.ndarray:
    """Trajectory ``Y_0 = y0, Y_1, ..., Y_{length-1}`` of the chain."""
    if length < 1:
        raise ValueError("length must be >= 1")
    if not 0 <= y0 <= model.n:
        raise ValueError(f"y0 must lie in [0, {model.n}]")
    probs = model.transition_probs().tolist()
    n = model.n
    binomial = rng.binomial
    path = np.empty(length, dtype=np.int64)
    y = int(y0)
    path[0] = y
    for t in range(1, length):
        y = binomial(n, probs[y])
        path[t] = y
    return path
