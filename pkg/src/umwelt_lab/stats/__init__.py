"""Statistical battery over trial ledgers."""

from umwelt_lab.stats.bootstrap import bootstrap_ci, delta_pp
from umwelt_lab.stats.effects import cohens_d, gap_normalized, pearson_r
from umwelt_lab.stats.fisher import fisher_exact
from umwelt_lab.stats.tables import (
    CellSummary,
    EffectRow,
    accounting,
    accuracy_table,
    compliance_filter,
    cross_model_correlations,
    effect_rows,
    wordcount_table,
)

__all__ = [
    "CellSummary",
    "EffectRow",
    "accounting",
    "accuracy_table",
    "bootstrap_ci",
    "cohens_d",
    "compliance_filter",
    "cross_model_correlations",
    "delta_pp",
    "effect_rows",
    "fisher_exact",
    "gap_normalized",
    "pearson_r",
    "wordcount_table",
]
