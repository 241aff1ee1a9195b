"""Seeded percentile bootstrap, resampling independently within each group."""

from __future__ import annotations

import math
from typing import Callable, Mapping, Sequence

import numpy as np

from umwelt_lab.errors import DataError

Statistic = Callable[[Mapping[str, np.ndarray]], "float | None"]


def bootstrap_ci(
    groups: Mapping[str, Sequence[float]],
    statistic: Statistic,
    resamples: int = 10_000,
    seed: int = 0,
    level: float = 0.95,
    max_redraws: int | None = None,
) -> tuple[float, float]:
    """Percentile interval for ``statistic`` over within-group resamples.

    ``groups`` maps a group label (usually a condition) to its per-trial
    values. A resample on which the statistic is undefined (None or NaN) is
    redrawn; more than ``max_redraws`` redraws (default: ``resamples``) is an error.
    """
    if not groups or any(len(v) == 0 for v in groups.values()):
        raise DataError("every group needs at least one record")
    arrays = {k: np.asarray(v, dtype=float) for k, v in groups.items()}
    labels = sorted(arrays)
    rng = np.random.default_rng(seed)
    budget = resamples if max_redraws is None else max_redraws
    stats = np.empty(resamples)
    i = redraws = 0
    while i < resamples:
        sample = {k: arrays[k][rng.integers(0, len(arrays[k]), len(arrays[k]))] for k in labels}
        value = statistic(sample)
        if value is None or math.isnan(value):
            redraws += 1
            if redraws > budget:
                raise DataError(f"statistic undefined on more than {budget} resamples")
            continue
        stats[i] = value
        i += 1
    tail = 100 * (1 - level) / 2
    lo, hi = np.percentile(stats, [tail, 100 - tail])
    return float(lo), float(hi)


def delta_pp(treated: str, control: str) -> Statistic:
    """Statistic: 100 × (mean of ``treated`` − mean of ``control``)."""
    return lambda s: 100.0 * (float(s[treated].mean()) - float(s[control].mean()))
