"""Condition and agent specifications, loaded from a JSON registry file."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from importlib import resources
from pathlib import Path

from umwelt_lab.constraints.checkers import VALIDATORS
from umwelt_lab.errors import ConfigError


@dataclass(frozen=True)
class ConditionSpec:
    name: str
    system_prompt: str
    validator: str = "none"


@dataclass(frozen=True)
class AgentSpec:
    name: str
    axis: str
    system_prompt: str
    summary: str = ""


@dataclass
class Registry:
    conditions: dict[str, ConditionSpec] = field(default_factory=dict)
    agents: dict[str, AgentSpec] = field(default_factory=dict)
    taxonomy: list[dict] = field(default_factory=list)

    def condition(self, name: str) -> ConditionSpec:
        try:
            return self.conditions[name]
        except KeyError:
            raise ConfigError(f"unknown condition {name!r}; known: {sorted(self.conditions)}") from None

    def agent(self, name: str) -> AgentSpec:
        try:
            return self.agents[name]
        except KeyError:
            raise ConfigError(f"unknown agent {name!r}") from None

    def to_dict(self) -> dict:
        return {
            "conditions": [asdict(c) for c in self.conditions.values()],
            "agents": [asdict(a) for a in self.agents.values()],
            "taxonomy": list(self.taxonomy),
        }


def _unique(entries, kind: str) -> dict:
    out = {}
    for e in entries:
        if e.name in out:
            raise ConfigError(f"duplicate {kind} name {e.name!r}")
        out[e.name] = e
    return out


def registry_from_dict(data: dict) -> Registry:
    try:
        conditions = [ConditionSpec(**c) for c in data.get("conditions", [])]
        agents = [AgentSpec(**a) for a in data.get("agents", [])]
    except TypeError as exc:
        raise ConfigError(f"malformed registry entry: {exc}") from None
    for c in conditions:
        if c.validator not in VALIDATORS:
            raise ConfigError(f"condition {c.name!r}: unknown validator {c.validator!r}")
        if c.validator == "none" and c.name != "control":
            raise ConfigError(f"condition {c.name!r}: only 'control' may use validator 'none'")
    return Registry(
        _unique(conditions, "condition"),
        _unique(agents, "agent"),
        list(data.get("taxonomy", [])),
    )


def load_registry(path: str | Path | None = None) -> Registry:
    """Load a registry file; with no path, the shipped default."""
    if path is None:
        text = resources.files("umwelt_lab.data").joinpath("registry.json").read_text("utf-8")
    else:
        try:
            text = Path(path).read_text("utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read registry {path}: {exc}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"registry is not valid JSON: {exc}") from None
    return registry_from_dict(data)
