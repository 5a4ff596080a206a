"""Poisson Monte-Carlo error propagation for estimators over count matrices."""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable, Sequence

import numpy as np

from .state import CountMatrix


class BootstrapError(RuntimeError):
    def __init__(self, index: int, cause: Exception):
        super().__init__(f"estimator failed on resample {index}: {cause}")
        self.index = index


@dataclass(frozen=True)
class BootstrapResult:
    mean: float
    std: float
    n_resamples: int
    seed: int
    samples: np.ndarray | None = None


def resample(counts: Sequence[CountMatrix], seed: int, index: int) -> list[CountMatrix]:
    """One parametric resample: every N replaced by an independent Poisson(N) draw.

    The stream depends only on (seed, index), so resamples can be generated in any order.
    """
    rng = np.random.default_rng([seed, index])
    return [replace(c, counts=rng.poisson(c.counts)) for c in counts]


def poisson_bootstrap(
    counts: Sequence[CountMatrix],
    estimator: Callable[[list[CountMatrix]], float],
    n_resamples: int = 1000,
    seed: int = 0,
    keep_samples: bool = False,
) -> BootstrapResult:
    if n_resamples < 2:
        raise ValueError("need at least 2 resamples")
    counts = list(counts)
    values = np.empty(n_resamples)
    for i in range(n_resamples):
        try:
            values[i] = estimator(resample(counts, seed, i))
        except Exception as exc:
            raise BootstrapError(i, exc) from exc
    return BootstrapResult(
        mean=float(values.mean()),
        std=float(values.std(ddof=1)),
        n_resamples=n_resamples,
        seed=seed,
        samples=values if keep_samples else None,
    )
