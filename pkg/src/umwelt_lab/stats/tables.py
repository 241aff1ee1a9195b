"""Accuracy, effect, word-count, compliance, and accounting tables over a trial ledger."""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import asdict, dataclass
from itertools import combinations
from typing import Iterable

from umwelt_lab.constraints.tokenize import word_count
from umwelt_lab.extraction import CORRECT, NO_MATCH, UNSCORED
from umwelt_lab.runner.ledger import effective_records
from umwelt_lab.runner.models import TASK_TYPES, TrialKey, TrialRecord
from umwelt_lab.stats.bootstrap import bootstrap_ci, delta_pp
from umwelt_lab.stats.effects import cohens_d, gap_normalized, pearson_r
from umwelt_lab.stats.fisher import fisher_exact

POOLED = "pooled"
CONDITION_ORDER = ("control", "no_have", "e_prime")


def round_half_away(x: float) -> int:
    return int(math.copysign(math.floor(abs(x) + 0.5), x))


def _effective(records: Iterable[TrialRecord]) -> list[TrialRecord]:
    return list(effective_records(list(records)).values())


def _task_rank(task: str) -> tuple:
    return (TASK_TYPES.index(task) if task in TASK_TYPES else len(TASK_TYPES), task)


def _cond_rank(cond: str) -> tuple:
    return (CONDITION_ORDER.index(cond) if cond in CONDITION_ORDER else len(CONDITION_ORDER), cond)


@dataclass(frozen=True)
class CellSummary:
    task_type: str
    condition: str
    model: str
    n_scoreable: int
    n_correct: int

    @property
    def accuracy(self) -> float:
        return self.n_correct / self.n_scoreable

    def to_dict(self) -> dict:
        return {**asdict(self), "accuracy": self.accuracy}


def accuracy_table(
    records: Iterable[TrialRecord], by_model: bool = False
) -> tuple[list[CellSummary], list[str]]:
    """Cells grouped by (task, condition[, model]); unscored and error trials are excluded.

    Groups with no scoreable trial are omitted and reported in the notices.
    """
    counts: dict[tuple, list[int]] = defaultdict(lambda: [0, 0])
    for rec in _effective(records):
        group = (rec.task_type or "unknown", rec.key.condition, rec.key.model if by_model else POOLED)
        cell = counts[group]
        if rec.ok and rec.outcome != UNSCORED:
            cell[0] += 1
            cell[1] += rec.outcome == CORRECT
    cells, notices = [], []
    for (task, cond, model), (n, k) in sorted(
        counts.items(), key=lambda kv: (_task_rank(kv[0][0]), kv[0][2], _cond_rank(kv[0][1]))
    ):
        if n == 0:
            notices.append(f"no scoreable trials for {task}/{cond}/{model}; cell omitted")
            continue
        cells.append(CellSummary(task, cond, model, n, k))
    return cells, notices


@dataclass(frozen=True)
class EffectRow:
    task_type: str
    model: str
    condition: str
    control_acc: float
    treated_acc: float
    delta_pp: float
    p_value: float
    d: float | None
    gap_pct: float | None
    ci: tuple[float, float] | None = None

    def to_dict(self) -> dict:
        d = asdict(self)
        d["ci"] = list(self.ci) if self.ci is not None else None
        return d


def _outcome_values(records: list[TrialRecord], task: str, cond: str, model: str) -> list[float]:
    return [
        1.0 if r.outcome == CORRECT else 0.0
        for r in records
        if r.ok
        and r.outcome != UNSCORED
        and r.task_type == task
        and r.key.condition == cond
        and (model == POOLED or r.key.model == model)
    ]


def effect_rows(
    cells: list[CellSummary],
    control: str = "control",
    treatments: tuple[str, ...] = ("no_have", "e_prime"),
    standardizer: str = "pooled",
    records: Iterable[TrialRecord] | None = None,
    resamples: int = 0,
    seed: int = 0,
) -> list[EffectRow]:
    """Treatment-vs-control rows. With ``records`` and ``resamples`` > 0, adds bootstrap CIs on delta."""
    index = {(c.task_type, c.condition, c.model): c for c in cells}
    eff = _effective(records) if records is not None and resamples > 0 else None
    rows = []
    for (task, cond, model), cell in index.items():
        if cond not in treatments or (task, control, model) not in index:
            continue
        base = index[(task, control, model)]
        p0, p1 = base.accuracy, cell.accuracy
        delta = 100.0 * (p1 - p0)
        p = fisher_exact(
            cell.n_correct, cell.n_scoreable - cell.n_correct, base.n_correct, base.n_scoreable - base.n_correct
        )
        gap = gap_normalized(delta, p0) if delta > 0 else None
        ci = None
        if eff is not None:
            groups = {
                "treated": _outcome_values(eff, task, cond, model),
                "control": _outcome_values(eff, task, control, model),
            }
            ci = bootstrap_ci(groups, delta_pp("treated", "control"), resamples=resamples, seed=seed)
        rows.append(
            EffectRow(task, model, cond, p0, p1, delta, p, cohens_d(p1, cell.n_scoreable, p0, base.n_scoreable, standardizer), gap, ci)
        )
    rows.sort(key=lambda r: (_task_rank(r.task_type), r.model, _cond_rank(r.condition)))
    return rows


def compliance_filter(records: Iterable[TrialRecord], condition: str) -> list[TrialRecord]:
    """Ok trials of ``condition`` with zero constraint violations."""
    return [r for r in _effective(records) if r.key.condition == condition and r.ok and r.violations == 0]


@dataclass(frozen=True)
class WordCountRow:
    task_type: str
    means: dict[str, float]
    delta_pct: dict[str, int]


def wordcount_table(
    records: Iterable[TrialRecord], control: str = "control", treatments: tuple[str, ...] = ("e_prime", "no_have")
) -> list[WordCountRow]:
    """Mean word count per task×condition over ok trials; deltas are integer percent vs control."""
    sums: dict[tuple[str, str], list[int]] = defaultdict(lambda: [0, 0])
    for r in _effective(records):
        if r.ok:
            s = sums[(r.task_type or "unknown", r.key.condition)]
            s[0] += r.word_count
            s[1] += 1
    tasks = sorted({t for t, _ in sums}, key=_task_rank)
    rows = []
    for task in tasks:
        means = {c: s / n for (t, c), (s, n) in sums.items() if t == task}
        deltas = {}
        if means.get(control):
            for cond in treatments:
                if cond in means:
                    deltas[cond] = round_half_away(100.0 * (means[cond] / means[control] - 1.0))
        rows.append(WordCountRow(task, dict(sorted(means.items(), key=lambda kv: _cond_rank(kv[0]))), deltas))
    return rows


def accounting(records: Iterable[TrialRecord], plan: Iterable[TrialKey] | None = None) -> dict[str, int]:
    """The trial accounting chain: planned ⊇ completed ⊇ parseable ⊇ scoreable.

    ``planned`` is the plan size when given, else the number of distinct keys in the ledger.
    A completed trial is parseable when its response holds at least one word, and
    scoreable when an answer was extracted from it.
    """
    eff = effective_records(list(records))
    keys = list(plan) if plan is not None else list(eff)
    completed = parseable = scoreable = errors = 0
    for key in keys:
        rec = eff.get(key)
        if rec is None:
            continue
        if not rec.ok:
            errors += 1
            continue
        completed += 1
        if word_count(rec.response) > 0:
            parseable += 1
            if rec.extraction.rule != NO_MATCH:
                scoreable += 1
    return {
        "planned": len(keys),
        "completed": completed,
        "parseable": parseable,
        "scoreable": scoreable,
        "errors": errors,
        "unparseable": completed - parseable,
        "no_match": parseable - scoreable,
        "missing": len(keys) - completed - errors,
    }


def cross_model_correlations(cells: list[CellSummary], condition: str, control: str = "control") -> dict[str, float | None]:
    """Pearson r between models' per-task deltas for ``condition``, over tasks all models share."""
    index = {(c.task_type, c.condition, c.model): c.accuracy for c in cells if c.model != POOLED}
    models = sorted({m for _, _, m in index})
    deltas = {}
    for m in models:
        deltas[m] = {
            t: 100.0 * (index[(t, condition, m)] - index[(t, control, m)])
            for (t, c, mm) in index
            if mm == m and c == condition and (t, control, m) in index
        }
    out = {}
    for a, b in combinations(models, 2):
        shared = sorted(set(deltas[a]) & set(deltas[b]), key=_task_rank)
        if len(shared) < 2:
            out[f"{a} vs {b}"] = None
            continue
        out[f"{a} vs {b}"] = pearson_r([deltas[a][t] for t in shared], [deltas[b][t] for t in shared])
    return out
