"""Deterministic random finitely supported vectors for the property harness."""

from __future__ import annotations

import numpy as np

from .lp_core import FinSeq, norm_p

MAX_SUPPORT = 50
MAX_INDEX = 200


def sample_rng(seed: int, i: int) -> np.random.Generator:
    """Independent stream for sample ``i``; reproducible regardless of order."""
    return np.random.default_rng([int(seed), int(i)])


def random_finseq(
    rng: np.random.Generator,
    p: float,
    norm_range: tuple[float, float] = (1e-3, 1e3),
    max_support: int = MAX_SUPPORT,
    max_index: int = MAX_INDEX,
) -> FinSeq:
    """Support size uniform in 1..max_support, indices drawn without
    replacement from 1..max_index, complex Gaussian coordinates, then
    rescaled to a norm that is log-uniform over ``norm_range``."""
    k = int(rng.integers(1, max_support + 1))
    idx = rng.choice(np.arange(1, max_index + 1), size=min(k, max_index), replace=False)
    vals = rng.standard_normal(idx.size) + 1j * rng.standard_normal(idx.size)
    x = FinSeq(idx, vals, p)
    lo, hi = norm_range
    target = float(np.exp(rng.uniform(np.log(lo), np.log(hi)))) if lo != hi else float(lo)
    return x.scale(target / norm_p(x))
