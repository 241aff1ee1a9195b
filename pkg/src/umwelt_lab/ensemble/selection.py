"""Ensemble selection and redundancy: greedy minimal ensembles, exhaustive k-subsets, Jaccard."""

from __future__ import annotations

import math
import statistics
from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations

from umwelt_lab.ensemble.coverage import CoverageMatrix
from umwelt_lab.ensemble.shapley import ShapleyResult
from umwelt_lab.errors import BudgetExceededError, DataError

SUBSET_BUDGET = 10**7


def greedy_minimal(matrix: CoverageMatrix, shapley: ShapleyResult) -> list[str]:
    """Add the agent with the largest coverage gain until the full ensemble's coverage is reached.

    Ties go to the higher Shapley value, then to the alphabetically first name.
    """
    if tuple(shapley.agents) != matrix.agents:
        raise DataError("Shapley result was computed on a different agent list")
    masks = matrix.masks()
    target = 0
    for m in masks:
        target |= m
    chosen: list[str] = []
    union = 0
    while union != target:
        remaining = [i for i, agent in enumerate(matrix.agents) if agent not in chosen]
        best = min(
            remaining,
            key=lambda i: (-(masks[i] & ~union).bit_count(), -shapley.values[i], matrix.agents[i]),
        )
        chosen.append(matrix.agents[best])
        union |= masks[best]
    if not chosen:
        # Nothing to cover: the smallest ensemble still needs one member.
        chosen.append(min(matrix.agents))
    return chosen


@dataclass
class SubsetReport:
    k: int
    n_findings: int
    full_coverage: int
    n_subsets: int
    distribution: dict[int, int]
    perfect: list[tuple[str, ...]] = field(default_factory=list)

    @property
    def n_perfect(self) -> int:
        return len(self.perfect)

    @property
    def perfect_fraction(self) -> float:
        return self.n_perfect / self.n_subsets

    @property
    def minimum(self) -> int:
        return min(self.distribution)

    @property
    def median(self) -> float:
        return statistics.median(Counter(self.distribution).elements())

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "n_findings": self.n_findings,
            "full_coverage": self.full_coverage,
            "n_subsets": self.n_subsets,
            "n_perfect": self.n_perfect,
            "perfect_fraction": self.perfect_fraction,
            "minimum": self.minimum,
            "median": self.median,
            "distribution": {str(k): v for k, v in sorted(self.distribution.items())},
            "perfect": [list(p) for p in self.perfect],
        }


def enumerate_subsets(matrix: CoverageMatrix, k: int, budget: int = SUBSET_BUDGET) -> SubsetReport:
    """Coverage of every k-subset; perfect subsets match the full ensemble's coverage."""
    n = matrix.n_agents
    if not 1 <= k <= n:
        raise DataError(f"k must lie in 1..{n} (got {k})")
    total = math.comb(n, k)
    if total > budget:
        raise BudgetExceededError(f"C({n},{k}) = {total} subsets exceeds the budget of {budget}", total)
    masks = matrix.masks()
    full = 0
    for m in masks:
        full |= m
    dist: Counter[int] = Counter()
    perfect = []
    for combo in combinations(range(n), k):
        union = 0
        for i in combo:
            union |= masks[i]
        dist[union.bit_count()] += 1
        if union == full:
            perfect.append(tuple(matrix.agents[i] for i in combo))
    return SubsetReport(k, matrix.n_findings, full.bit_count(), total, dict(dist), perfect)


@dataclass(frozen=True)
class JaccardResult:
    pairs: dict[tuple[str, str], float]
    # Pairs where both agents cover nothing; their overlap is defined as 1.0.
    flagged: frozenset[tuple[str, str]]

    def get(self, a: str, b: str) -> float:
        return self.pairs[(a, b)] if (a, b) in self.pairs else self.pairs[(b, a)]

    def to_dict(self) -> dict:
        return {
            "pairs": [{"a": a, "b": b, "jaccard": v, "both_empty": (a, b) in self.flagged} for (a, b), v in self.pairs.items()]
        }


def jaccard_pairs(matrix: CoverageMatrix) -> JaccardResult:
    masks = matrix.masks()
    pairs, flagged = {}, set()
    for i, j in combinations(range(matrix.n_agents), 2):
        a, b = matrix.agents[i], matrix.agents[j]
        union = (masks[i] | masks[j]).bit_count()
        if union == 0:
            pairs[(a, b)] = 1.0
            flagged.add((a, b))
        else:
            pairs[(a, b)] = (masks[i] & masks[j]).bit_count() / union
    return JaccardResult(pairs, frozenset(flagged))
