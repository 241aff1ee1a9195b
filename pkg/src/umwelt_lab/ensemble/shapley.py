"""Exact Shapley attribution for the coverage game v(S) = |∪_{i∈S} covered(i)|."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from umwelt_lab.ensemble.coverage import CoverageMatrix
from umwelt_lab.errors import BudgetExceededError

MAX_EXACT_AGENTS = 24


@dataclass(frozen=True)
class ShapleyResult:
    agents: tuple[str, ...]
    values: tuple[float, ...]

    @property
    def total(self) -> float:
        return math.fsum(self.values)

    @property
    def shares(self) -> tuple[float, ...]:
        t = self.total
        if t == 0:
            return tuple(0.0 for _ in self.values)
        return tuple(v / t for v in self.values)

    def value(self, agent: str) -> float:
        return self.values[self.agents.index(agent)]

    def share(self, agent: str) -> float:
        return self.shares[self.agents.index(agent)]

    def to_dict(self) -> dict:
        return {
            a: {"value": v, "share": s} for a, v, s in zip(self.agents, self.values, self.shares)
        }


def _coalition_values(masks: list[int], n_findings: int) -> np.ndarray:
    """v(S) for every coalition bitmask S over the agents, built by doubling."""
    words = max(1, (n_findings + 63) // 64)
    # Each agent's finding set split into 64-bit words so popcounts stay vectorized.
    rows = np.array([[(m >> (64 * w)) & 0xFFFFFFFFFFFFFFFF for w in range(words)] for m in masks], dtype=np.uint64)
    unions = np.zeros((1, words), dtype=np.uint64)
    for row in rows:
        unions = np.concatenate([unions, unions | row])
    return np.bitwise_count(unions).sum(axis=1).astype(np.int64)


def shapley(matrix: CoverageMatrix) -> ShapleyResult:
    """φ_i = Σ_{S ∌ i} |S|!(n−|S|−1)!/n! · (v(S ∪ {i}) − v(S)), by full subset enumeration."""
    n = matrix.n_agents
    if n > MAX_EXACT_AGENTS:
        raise BudgetExceededError(
            f"exact Shapley limited to {MAX_EXACT_AGENTS} agents (got {n}); 2^{n} coalitions", 2**n
        )
    v = _coalition_values(matrix.masks(), matrix.n_findings)
    coalitions = np.arange(1 << n, dtype=np.int64)
    sizes = np.zeros(1 << n, dtype=np.int64)
    for i in range(n):
        sizes += (coalitions >> i) & 1
    weight_by_size = np.array(
        [math.factorial(s) * math.factorial(n - s - 1) / math.factorial(n) for s in range(n)]
    )
    values = []
    for i in range(n):
        bit = 1 << i
        without = coalitions[(coalitions & bit) == 0]
        gain = v[without | bit] - v[without]
        # Integer gains summed per coalition size keep the weighted sum short and exact-ish.
        per_size = np.bincount(sizes[without], weights=gain, minlength=n)
        values.append(math.fsum(float(w * g) for w, g in zip(weight_by_size, per_size)))
    return ShapleyResult(matrix.agents, tuple(values))
