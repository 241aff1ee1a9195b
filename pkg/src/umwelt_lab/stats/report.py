"""Machine-readable stats report plus aligned-text renderings."""

from __future__ import annotations

from typing import Iterable

from umwelt_lab.runner.models import TrialRecord
from umwelt_lab.stats.tables import (
    accounting,
    accuracy_table,
    compliance_filter,
    cross_model_correlations,
    effect_rows,
    wordcount_table,
)

TREATMENTS = ("no_have", "e_prime")


def build_report(
    records: Iterable[TrialRecord],
    resamples: int = 10_000,
    seed: int = 0,
    standardizer: str = "pooled",
    compliance: bool = True,
) -> dict:
    records = list(records)
    cells, notices = accuracy_table(records)
    model_cells, model_notices = accuracy_table(records, by_model=True)
    report = {
        "accounting": accounting(records),
        "accuracy": [c.to_dict() for c in cells],
        "effects": [
            r.to_dict()
            for r in effect_rows(cells, standardizer=standardizer, records=records, resamples=resamples, seed=seed)
        ],
        "model_effects": [r.to_dict() for r in effect_rows(model_cells, standardizer=standardizer)],
        "word_counts": [
            {"task_type": w.task_type, "means": w.means, "delta_pct": w.delta_pct} for w in wordcount_table(records)
        ],
        "correlations": {c: cross_model_correlations(model_cells, c) for c in TREATMENTS},
        "notices": notices + model_notices,
        "seed": seed,
        "resamples": resamples,
    }
    if compliance:
        filtered = {}
        for cond in TREATMENTS:
            kept = compliance_filter(records, cond)
            others = [r for r in records if r.key.condition != cond]
            fcells, _ = accuracy_table(others + kept)
            filtered[cond] = {
                "retained": len(kept),
                "effects": [
                    r.to_dict() for r in effect_rows(fcells, treatments=(cond,), standardizer=standardizer)
                ],
            }
        report["compliance_filtered"] = filtered
    return report


def _fmt_pct(x: float | None, signed: bool = False) -> str:
    if x is None:
        return "---"
    return f"{x:+.1f}" if signed else f"{x:.1f}"


def _stars(p: float) -> str:
    return "***" if p < 0.001 else "**" if p < 0.01 else "*" if p < 0.05 else ""


def render_text(report: dict) -> str:
    acc = {(c["task_type"], c["condition"]): c for c in report["accuracy"]}
    eff = {(e["task_type"], e["condition"]): e for e in report["effects"]}
    tasks = list(dict.fromkeys(c["task_type"] for c in report["accuracy"]))
    lines = ["Accuracy by task (all models pooled)", ""]
    header = f"{'Task':<24}{'Ctrl':>8}{'NH':>8}{'EP':>8}{'Δ(NH)':>10}{'Δ(EP)':>10}{'N':>7}"
    lines += [header, "-" * len(header)]
    for t in tasks:
        row = [f"{t:<24}"]
        n = 0
        for cond in ("control", "no_have", "e_prime"):
            c = acc.get((t, cond))
            row.append(f"{100 * c['accuracy']:>8.1f}" if c else f"{'---':>8}")
            n += c["n_scoreable"] if c else 0
        for cond in ("no_have", "e_prime"):
            e = eff.get((t, cond))
            row.append(f"{_fmt_pct(e['delta_pp'], True) + _stars(e['p_value']):>10}" if e else f"{'---':>10}")
        row.append(f"{n:>7}")
        lines.append("".join(row))
    lines += ["", "Word count by condition", ""]
    header = f"{'Task':<24}{'Control':>9}{'E-Prime':>9}{'Δ%':>6}{'No-Have':>9}"
    lines += [header, "-" * len(header)]
    for w in report["word_counts"]:
        m = w["means"]
        d = w["delta_pct"].get("e_prime")
        lines.append(
            f"{w['task_type']:<24}"
            + "".join(f"{m[c]:>9.0f}" if c in m else f"{'---':>9}" for c in ("control", "e_prime"))
            + (f"{d:>+5d}%" if d is not None else f"{'---':>6}")
            + (f"{m['no_have']:>9.0f}" if "no_have" in m else f"{'---':>9}")
        )
    a = report["accounting"]
    lines += [
        "",
        "Accounting: planned {planned} → completed {completed} → parseable {parseable} → scoreable {scoreable}".format(**a),
    ]
    if "compliance_filtered" in report:
        for cond, f in report["compliance_filtered"].items():
            lines.append(f"Compliance-filtered {cond}: N retained = {f['retained']}")
    return "\n".join(lines) + "\n"
