"""Orthogonality analysis report for a coverage matrix."""

from __future__ import annotations

from umwelt_lab.ensemble.coverage import CoverageMatrix, union_coverage
from umwelt_lab.ensemble.judge import prompt_hashes
from umwelt_lab.ensemble.selection import enumerate_subsets, greedy_minimal, jaccard_pairs
from umwelt_lab.ensemble.shapley import shapley


def analyze(matrix: CoverageMatrix, k: int = 3, control: str | None = "control") -> dict:
    sv = shapley(matrix)
    greedy = greedy_minimal(matrix, sv)
    subsets = enumerate_subsets(matrix, k)
    individual = sorted(
        ({"agent": a, "covered": len(matrix.covered(a)), "coverage": union_coverage(matrix, [a])} for a in matrix.agents),
        key=lambda r: (-r["covered"], r["agent"]),
    )
    unique = {}
    for f_idx, f in enumerate(matrix.findings):
        owners = [a for a, row in zip(matrix.agents, matrix.rows) if row[f_idx]]
        if len(owners) == 1:
            unique.setdefault(owners[0], []).append(f)
    ensembles = [{"name": "full", "agents": list(matrix.agents), "coverage": union_coverage(matrix, matrix.agents)}]
    ensembles.append({"name": "greedy_minimal", "agents": greedy, "coverage": union_coverage(matrix, greedy)})
    if control in matrix.agents:
        ensembles.append({"name": "control", "agents": [control], "coverage": union_coverage(matrix, [control])})
    return {
        "n_agents": matrix.n_agents,
        "n_findings": matrix.n_findings,
        "individual": individual,
        "ensembles": ensembles,
        "unique_findings": unique,
        "shapley": sv.to_dict(),
        "jaccard": jaccard_pairs(matrix).to_dict(),
        "subsets": subsets.to_dict(),
        "prompt_hashes": prompt_hashes(),
    }


def render_text(report: dict) -> str:
    n = report["n_findings"]
    lines = ["Individual agent coverage", ""]
    lines += [f"{r['agent']:<20}{r['covered']:>4}/{n}  {100 * r['coverage']:5.1f}%" for r in report["individual"]]
    lines += ["", "Ensembles", ""]
    for e in report["ensembles"]:
        lines.append(f"{e['name']:<16}{len(e['agents']):>3} agents  {100 * e['coverage']:5.1f}%  {', '.join(e['agents']) if len(e['agents']) <= 4 else ''}".rstrip())
    lines += ["", "Shapley shares", ""]
    for agent, sv in sorted(report["shapley"].items(), key=lambda kv: -kv[1]["value"]):
        lines.append(f"{agent:<20}{sv['value']:8.3f}  {100 * sv['share']:5.2f}%")
    s = report["subsets"]
    lines += [
        "",
        f"{s['k']}-agent subsets: {s['n_subsets']}; perfect {s['n_perfect']} ({100 * s['perfect_fraction']:.1f}%); "
        f"median {s['median']:g}/{n}; minimum {s['minimum']}/{n}",
    ]
    return "\n".join(lines) + "\n"
