"""Effect sizes and normalizations. Undefined results come back as None."""

from __future__ import annotations

import math
from typing import Sequence


def cohens_d(p1: float, n1: int, p0: float, n0: int, standardizer: str = "pooled") -> float | None:
    """Standardized difference of two proportions.

    ``pooled`` divides by sqrt(p̄(1−p̄)) with p̄ the count-weighted pooled
    proportion. ``average`` divides by sqrt((p1(1−p1) + p0(1−p0)) / 2).
    """
    if n1 <= 0 or n0 <= 0:
        raise ValueError("group sizes must be positive")
    if standardizer == "pooled":
        pbar = (p1 * n1 + p0 * n0) / (n1 + n0)
        var = pbar * (1 - pbar)
    elif standardizer == "average":
        var = (p1 * (1 - p1) + p0 * (1 - p0)) / 2
    else:
        raise ValueError(f"unknown standardizer {standardizer!r}")
    if p1 == p0:
        return 0.0
    if var <= 0:
        return None
    return (p1 - p0) / math.sqrt(var)


def gap_normalized(delta_pp: float, control_acc: float) -> float | None:
    """Delta as a percentage of the control's headroom; None at the ceiling."""
    if control_acc >= 1:
        return None
    return 100.0 * delta_pp / (100.0 * (1.0 - control_acc))


def pearson_r(x: Sequence[float], y: Sequence[float]) -> float | None:
    if len(x) != len(y):
        raise ValueError("x and y differ in length")
    if len(x) < 2:
        raise ValueError("need at least two points")
    # Test variance on the raw values: float rounding in the mean can leave
    # a constant vector with tiny non-zero deviations.
    if min(x) == max(x) or min(y) == max(y):
        return None
    n = len(x)
    mx, my = math.fsum(x) / n, math.fsum(y) / n
    dx = [v - mx for v in x]
    dy = [v - my for v in y]
    # r is scale-invariant; normalising first keeps the squares clear of under/overflow.
    kx, ky = max(map(abs, dx)), max(map(abs, dy))
    if kx == 0 or ky == 0:
        return None
    dx = [v / kx for v in dx]
    dy = [v / ky for v in dy]
    sxx = math.fsum(v * v for v in dx)
    syy = math.fsum(v * v for v in dy)
    r = math.fsum(a * b for a, b in zip(dx, dy)) / math.sqrt(sxx * syy)
    return max(-1.0, min(1.0, r))
