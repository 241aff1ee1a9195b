"""Agents × findings coverage matrices."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable

from umwelt_lab.errors import DataError


@dataclass(frozen=True)
class CoverageMatrix:
    agents: tuple[str, ...]
    findings: tuple[str, ...]
    rows: tuple[tuple[bool, ...], ...]

    def __post_init__(self):
        if not self.agents or not self.findings:
            raise DataError("coverage matrix needs at least one agent and one finding")
        if len(set(self.agents)) != len(self.agents):
            raise DataError("agent names must be unique")
        if len(set(self.findings)) != len(self.findings):
            raise DataError("finding ids must be unique")
        if len(self.rows) != len(self.agents) or any(len(r) != len(self.findings) for r in self.rows):
            raise DataError("row dimensions do not match agents × findings")

    @classmethod
    def build(cls, agents: Iterable[str], findings: Iterable[str], rows: Iterable[Iterable]) -> CoverageMatrix:
        return cls(tuple(agents), tuple(findings), tuple(tuple(bool(x) for x in r) for r in rows))

    @classmethod
    def from_sets(cls, covered: dict[str, Iterable[str]], findings: Iterable[str] | None = None) -> CoverageMatrix:
        sets = {a: set(fs) for a, fs in covered.items()}
        if findings is None:
            findings = sorted(set().union(*sets.values()))
        findings = tuple(findings)
        return cls.build(sets, findings, ([f in sets[a] for f in findings] for a in sets))

    @property
    def n_agents(self) -> int:
        return len(self.agents)

    @property
    def n_findings(self) -> int:
        return len(self.findings)

    def index(self, agent: str) -> int:
        try:
            return self.agents.index(agent)
        except ValueError:
            raise DataError(f"unknown agent {agent!r}") from None

    def covered(self, agent: str) -> frozenset[str]:
        row = self.rows[self.index(agent)]
        return frozenset(f for f, hit in zip(self.findings, row) if hit)

    def masks(self) -> list[int]:
        """Each agent's row as an int bitmask; bit j is finding j."""
        return [sum(1 << j for j, hit in enumerate(row) if hit) for row in self.rows]

    def to_dict(self) -> dict:
        return {"agents": list(self.agents), "findings": list(self.findings), "rows": [list(r) for r in self.rows]}

    @classmethod
    def from_dict(cls, data: dict) -> CoverageMatrix:
        try:
            return cls.build(data["agents"], data["findings"], data["rows"])
        except KeyError as exc:
            raise DataError(f"coverage matrix missing field {exc}") from None

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["agent", *self.findings])
        for agent, row in zip(self.agents, self.rows):
            w.writerow([agent, *(int(x) for x in row)])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> CoverageMatrix:
        reader = list(csv.reader(io.StringIO(text)))
        if not reader:
            raise DataError("empty CSV")
        header, body = reader[0], [r for r in reader[1:] if r]
        truthy = {"1", "true", "yes", "x"}
        return cls.build(
            [r[0] for r in body], header[1:], ([c.strip().lower() in truthy for c in r[1:]] for r in body)
        )


def load_matrix(path: str | Path) -> CoverageMatrix:
    path = Path(path)
    try:
        text = path.read_text("utf-8")
    except OSError as exc:
        raise DataError(f"cannot read coverage matrix {path}: {exc}") from None
    if path.suffix.lower() == ".csv":
        return CoverageMatrix.from_csv(text)
    try:
        return CoverageMatrix.from_dict(json.loads(text))
    except json.JSONDecodeError as exc:
        raise DataError(f"coverage matrix {path} is not valid JSON: {exc}") from None


def synthetic_matrix() -> CoverageMatrix:
    """The shipped 16 × 51 matrix engineered to match the published coverage structure."""
    text = resources.files("umwelt_lab.data").joinpath("coverage_synthetic.json").read_text("utf-8")
    return CoverageMatrix.from_dict(json.loads(text))


def union_coverage(matrix: CoverageMatrix, subset: Iterable[str]) -> float:
    subset = list(subset)
    if not subset:
        raise DataError("subset must name at least one agent")
    masks = matrix.masks()
    union = 0
    for agent in subset:
        union |= masks[matrix.index(agent)]
    return union.bit_count() / matrix.n_findings
