"""Ensemble orthogonality analysis over agent × finding coverage."""

from umwelt_lab.ensemble.coverage import CoverageMatrix, load_matrix, synthetic_matrix, union_coverage
from umwelt_lab.ensemble.judge import (
    Claim,
    DivergenceMap,
    Finding,
    build_coverage,
    divergence_map,
    extract_claims,
    match_ground_truth,
)
from umwelt_lab.ensemble.selection import (
    JaccardResult,
    SubsetReport,
    enumerate_subsets,
    greedy_minimal,
    jaccard_pairs,
)
from umwelt_lab.ensemble.shapley import ShapleyResult, shapley

__all__ = [
    "Claim",
    "CoverageMatrix",
    "DivergenceMap",
    "Finding",
    "JaccardResult",
    "ShapleyResult",
    "SubsetReport",
    "build_coverage",
    "divergence_map",
    "enumerate_subsets",
    "extract_claims",
    "greedy_minimal",
    "jaccard_pairs",
    "load_matrix",
    "match_ground_truth",
    "shapley",
    "synthetic_matrix",
    "union_coverage",
]
