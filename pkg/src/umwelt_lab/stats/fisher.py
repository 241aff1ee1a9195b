"""Two-sided Fisher exact test on a 2×2 table."""

from __future__ import annotations

import math

# Tables whose probability is within this relative factor of the observed one count as "as extreme".
REL_TOL = 1e-7


def _log_choose(n: int, k: int) -> float:
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def fisher_exact(a: int, b: int, c: int, d: int, method: str = "minlike") -> float:
    """Two-sided p for the table [[a, b], [c, d]].

    ``minlike`` sums every table with the same margins whose hypergeometric
    probability does not exceed the observed one; ``doubling`` doubles the
    smaller one-sided tail (capped at 1).
    """
    if min(a, b, c, d) < 0:
        raise ValueError("cell counts must be non-negative")
    row1, col1, n = a + b, a + c, a + b + c + d
    if n == 0:
        return 1.0
    lo, hi = max(0, col1 - (n - row1)), min(row1, col1)
    denom = _log_choose(n, col1)

    def logp(x: int) -> float:
        return _log_choose(row1, x) + _log_choose(n - row1, col1 - x) - denom

    if method == "doubling":
        left = sum(math.exp(logp(x)) for x in range(lo, a + 1))
        right = sum(math.exp(logp(x)) for x in range(a, hi + 1))
        return min(1.0, 2.0 * min(left, right))
    if method != "minlike":
        raise ValueError(f"unknown method {method!r}")
    observed = logp(a)
    threshold = observed + math.log1p(REL_TOL)
    p = math.fsum(math.exp(lp) for lp in (logp(x) for x in range(lo, hi + 1)) if lp <= threshold)
    return min(1.0, p)
