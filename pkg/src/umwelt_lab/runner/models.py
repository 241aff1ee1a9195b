"""Trial-grid data types and their JSON shapes."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from umwelt_lab.errors import ConfigError, DataError
from umwelt_lab.extraction import NO_EXTRACTION, UNSCORED, AnswerFormat, Extraction

TASK_TYPES = (
    "syllogistic",
    "causal",
    "math_word",
    "analogical",
    "classification",
    "epistemic_calibration",
    "ethical_dilemma",
)
DIFFICULTIES = ("easy", "medium", "hard")
STATUSES = ("ok", "transport_error", "timeout")

GREEDY_TEMPERATURE = 0.0
SAMPLED_TEMPERATURE = 0.7


def temperature_for(repetition: int) -> float:
    return GREEDY_TEMPERATURE if repetition == 0 else SAMPLED_TEMPERATURE


@dataclass(frozen=True)
class TaskItem:
    id: str
    task_type: str
    difficulty: str
    prompt: str
    options: tuple[str, ...]
    truth: str
    format: AnswerFormat

    @classmethod
    def from_dict(cls, data: dict) -> TaskItem:
        try:
            fmt = AnswerFormat.named(data.get("format", "letter4"))
            item = cls(
                id=str(data["id"]),
                task_type=data["task_type"],
                difficulty=data["difficulty"],
                prompt=data["prompt"],
                options=tuple(data.get("options", ())),
                truth=data["truth"],
                format=fmt,
            )
        except KeyError as exc:
            raise DataError(f"task item missing field {exc}") from None
        if item.task_type not in TASK_TYPES:
            raise DataError(f"item {item.id}: unknown task type {item.task_type!r}")
        if item.difficulty not in DIFFICULTIES:
            raise DataError(f"item {item.id}: unknown difficulty {item.difficulty!r}")
        if item.truth not in fmt.allowed:
            raise DataError(f"item {item.id}: truth {item.truth!r} not allowed for {fmt.kind}")
        return item

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "task_type": self.task_type,
            "difficulty": self.difficulty,
            "prompt": self.prompt,
            "options": list(self.options),
            "truth": self.truth,
            "format": self.format.kind,
        }


def load_bank(path: str | Path) -> list[TaskItem]:
    try:
        data = json.loads(Path(path).read_text("utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read task bank {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise DataError(f"task bank {path} is not valid JSON: {exc}") from None
    if not isinstance(data, list):
        raise DataError("task bank must be a JSON array of items")
    items = [TaskItem.from_dict(d) for d in data]
    seen = set()
    for it in items:
        if it.id in seen:
            raise DataError(f"duplicate item id {it.id!r}")
        seen.add(it.id)
    return items


@dataclass(frozen=True, order=True)
class TrialKey:
    item_id: str
    condition: str
    model: str
    repetition: int

    def to_dict(self) -> dict:
        return {
            "item_id": self.item_id,
            "condition": self.condition,
            "model": self.model,
            "repetition": self.repetition,
        }

    @classmethod
    def from_dict(cls, data: dict) -> TrialKey:
        return cls(str(data["item_id"]), data["condition"], data["model"], int(data["repetition"]))


@dataclass(frozen=True)
class ModelEndpoint:
    name: str
    base_url: str
    auth_env_var: str
    max_output_tokens: int = 2048
    # Wire protocol adapter; "openai_chat" or "anthropic_messages".
    adapter: str = "openai_chat"
    # Vendor-side model identifier, when it differs from the short name used in keys.
    model_id: str | None = None

    def __post_init__(self):
        if self.max_output_tokens <= 0:
            raise ConfigError(f"endpoint {self.name}: max_output_tokens must be positive")

    @property
    def remote_model(self) -> str:
        return self.model_id or self.name


@dataclass
class TrialRecord:
    key: TrialKey
    temperature: float
    status: str
    response: str | None = None
    task_type: str | None = None
    extraction: Extraction = NO_EXTRACTION
    outcome: str = UNSCORED
    violations: int = 0
    word_count: int = 0
    chain_depth: int = 0
    grounded: int = 0
    bare: int = 0
    latency_ms: int = 0
    timestamp: str = ""
    error: str | None = field(default=None, compare=False)

    @property
    def ok(self) -> bool:
        return self.status == "ok"

    def to_dict(self) -> dict:
        d = {
            "key": self.key.to_dict(),
            "task_type": self.task_type,
            "temperature": self.temperature,
            "response": self.response,
            "status": self.status,
            "extraction": self.extraction.to_dict(),
            "outcome": self.outcome,
            "violations": self.violations,
            "word_count": self.word_count,
            "chain_depth": self.chain_depth,
            "grounded": self.grounded,
            "bare": self.bare,
            "latency_ms": self.latency_ms,
            "timestamp": self.timestamp,
        }
        if self.error is not None:
            d["error"] = self.error
        return d

    @classmethod
    def from_dict(cls, data: dict) -> TrialRecord:
        status = data["status"]
        if status not in STATUSES:
            raise DataError(f"unknown trial status {status!r}")
        return cls(
            key=TrialKey.from_dict(data["key"]),
            temperature=float(data["temperature"]),
            status=status,
            response=data.get("response"),
            task_type=data.get("task_type"),
            extraction=Extraction.from_dict(data.get("extraction") or {}),
            outcome=data.get("outcome", UNSCORED),
            violations=int(data.get("violations", 0)),
            word_count=int(data.get("word_count", 0)),
            chain_depth=int(data.get("chain_depth", 0)),
            grounded=int(data.get("grounded", 0)),
            bare=int(data.get("bare", 0)),
            latency_ms=int(data.get("latency_ms", 0)),
            timestamp=data.get("timestamp", ""),
            error=data.get("error"),
        )
