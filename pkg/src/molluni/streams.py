"""Deterministic random streams.

Every task draws from its own generator derived from ``(seed, index)``,
so results do not depend on how tasks are scheduled across workers.
"""

from __future__ import annotations

import os

import numpy as np

DEFAULT_SEED = 20240917
SEED_ENV_VAR = "MOLLUNI_SEED"


def default_seed() -> int:
    """The master seed, overridable through ``$MOLLUNI_SEED``."""
    raw = os.environ.get(SEED_ENV_VAR)
    if raw is None or raw.strip() == "":
        return DEFAULT_SEED
    try:
        seed = int(raw, 0)
    except ValueError:
        raise ValueError(f"{SEED_ENV_VAR} must be an integer, got {raw!r}") from None
    return check_seed(seed)


def check_seed(seed: int) -> int:
    seed = int(seed)
    if not 0 <= seed < 2**64:
        raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed}")
    return seed


def generator(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(check_seed(seed))))


def substream(seed: int, index: int) -> np.random.Generator:
    """Generator for task ``index`` under master ``seed``.

    Equivalent to the ``index``-th child of ``SeedSequence(seed).spawn``.
    """
    ss = np.random.SeedSequence(check_seed(seed), spawn_key=(int(index),))
    return np.random.Generator(np.random.PCG64(ss))
