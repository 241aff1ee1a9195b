"""Trial planning, execution, and crash-safe resumable runs."""

from __future__ import annotations

import json
import random
import time
from concurrent.futures import FIRST_COMPLETED, ThreadPoolExecutor, wait
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable

from umwelt_lab.constraints.checkers import validate
from umwelt_lab.constraints.registry import ConditionSpec, load_registry
from umwelt_lab.constraints.tokenize import word_count
from umwelt_lab.errors import ConfigError, DataError
from umwelt_lab.extraction import NO_MATCH, extract_answer, score_trial
from umwelt_lab.runner.client import ChatClient, MalformedReply, RetryPolicy, TimeoutFailure, TransientError
from umwelt_lab.runner.ledger import LedgerWriter, effective_records, read_ledger
from umwelt_lab.runner.metrics import chain_depth, epistemic_specificity
from umwelt_lab.runner.models import ModelEndpoint, TaskItem, TrialKey, TrialRecord, load_bank, temperature_for

LETTERS = "ABCDEFGHIJ"


def plan_trials(
    bank: list[TaskItem], conditions: list[ConditionSpec], models: list[ModelEndpoint], reps: int
) -> list[TrialKey]:
    """Full grid in (item, condition, model, repetition) order."""
    if reps < 1:
        raise ConfigError("reps must be at least 1")
    if not bank or not conditions or not models:
        raise ConfigError("bank, conditions, and models must all be non-empty")
    ids = [it.id for it in bank]
    if len(set(ids)) != len(ids):
        dup = next(i for i in ids if ids.count(i) > 1)
        raise DataError(f"duplicate item id {dup!r}")
    return [
        TrialKey(it.id, c.name, m.name, r)
        for it in bank
        for c in conditions
        for m in models
        for r in range(reps)
    ]


def resume_filter(
    plan: list[TrialKey], ledger_path: str | Path, requeue_errors: bool = True
) -> tuple[list[TrialKey], int]:
    """Drop keys already done. Returns the remaining plan and the number of quarantined lines.

    A key is done when it holds an ok record, or, with ``requeue_errors`` off, any record.
    """
    contents = read_ledger(ledger_path)
    done = set()
    for rec in contents.records:
        if rec.ok or not requeue_errors:
            done.add(rec.key)
    return [k for k in plan if k not in done], contents.quarantined


def user_prompt(item: TaskItem) -> str:
    parts = [item.prompt.strip()]
    if item.options:
        parts.append("\n".join(f"{LETTERS[i]}. {opt}" for i, opt in enumerate(item.options)))
    if item.format.kind == "valid_invalid":
        parts.append("End your response with a line of the form 'Answer: VALID' or 'Answer: INVALID'.")
    else:
        parts.append("End your response with a line of the form 'Answer: X', where X is the letter of your choice.")
    return "\n\n".join(parts)


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="milliseconds").replace("+00:00", "Z")


def score_response(record: TrialRecord, item: TaskItem, condition: ConditionSpec) -> TrialRecord:
    """Fill the derived fields of an ok record from its response text."""
    text = record.response or ""
    record.extraction = extract_answer(text, item.format)
    record.outcome = score_trial(record.extraction, item.truth, item.format)
    record.violations = validate(condition, text).count
    record.word_count = word_count(text)
    record.chain_depth = chain_depth(text)
    spec = epistemic_specificity(text)
    record.grounded, record.bare = spec["grounded"], spec["bare"]
    return record


def execute_trial(
    key: TrialKey,
    item: TaskItem,
    condition: ConditionSpec,
    endpoint: ModelEndpoint,
    client: ChatClient | None = None,
    seed: int = 0,
) -> TrialRecord:
    """Run one trial. Authentication failures propagate; other failures become error records."""
    own = client is None
    client = client or ChatClient(endpoint)
    temperature = temperature_for(key.repetition)
    rng = random.Random(f"{seed}:{key.item_id}:{key.condition}:{key.model}:{key.repetition}")
    started = time.monotonic()
    record = TrialRecord(key, temperature, status="ok", task_type=item.task_type)
    try:
        record.response = client.complete(condition.system_prompt, user_prompt(item), temperature, rng)
    except TimeoutFailure as exc:
        record.status, record.error = "timeout", str(exc)
    except (TransientError, MalformedReply) as exc:
        record.status, record.error = "transport_error", str(exc)
    finally:
        if own:
            client.close()
    record.latency_ms = int(round((time.monotonic() - started) * 1000))
    record.timestamp = _now()
    if record.ok:
        score_response(record, item, condition)
    return record


@dataclass
class RunConfig:
    models: list[ModelEndpoint]
    conditions: list[str]
    bank_path: Path
    ledger_path: Path
    reps: int = 4
    concurrency: int = 8
    retry: RetryPolicy = field(default_factory=RetryPolicy)
    registry_path: Path | None = None
    requeue_errors: bool = True
    seed: int = 0

    @classmethod
    def from_dict(cls, data: dict, base_dir: str | Path = ".") -> RunConfig:
        base = Path(base_dir)

        def resolve(p):
            p = Path(p)
            return p if p.is_absolute() else base / p

        try:
            models = [ModelEndpoint(**m) for m in data["models"]]
            cfg = cls(
                models=models,
                conditions=list(data.get("conditions", ["control", "no_have", "e_prime"])),
                bank_path=resolve(data["bank"]),
                ledger_path=resolve(data["ledger"]),
                reps=int(data.get("reps", 4)),
                concurrency=int(data.get("concurrency", 8)),
                retry=RetryPolicy(**data.get("retry", {})),
                registry_path=resolve(data["registry"]) if data.get("registry") else None,
                requeue_errors=bool(data.get("requeue_errors", True)),
                seed=int(data.get("seed", 0)),
            )
        except KeyError as exc:
            raise ConfigError(f"config missing field {exc}") from None
        except TypeError as exc:
            raise ConfigError(f"malformed config: {exc}") from None
        if cfg.concurrency < 1:
            raise ConfigError("concurrency must be at least 1")
        if len({m.name for m in models}) != len(models):
            raise ConfigError("model names must be unique")
        return cfg


def load_config(path: str | Path) -> RunConfig:
    path = Path(path)
    try:
        data = json.loads(path.read_text("utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from None
    return RunConfig.from_dict(data, path.parent)


@dataclass
class RunSummary:
    planned: int
    completed: int
    errors: int
    unscored: int
    executed: int = 0
    quarantined: int = 0

    def to_dict(self) -> dict:
        return {
            "planned": self.planned,
            "completed": self.completed,
            "errors": self.errors,
            "unscored": self.unscored,
            "executed": self.executed,
            "quarantined": self.quarantined,
        }


def summarize(plan: list[TrialKey], ledger_path: str | Path) -> RunSummary:
    """Reconcile a plan against ledger contents."""
    contents = read_ledger(ledger_path)
    eff = effective_records(contents.records)
    completed = errors = unscored = 0
    for key in plan:
        rec = eff.get(key)
        if rec is None:
            continue
        if rec.ok:
            completed += 1
            if rec.extraction.rule == NO_MATCH:
                unscored += 1
        else:
            errors += 1
    return RunSummary(len(plan), completed, errors, unscored, quarantined=contents.quarantined)


def run_experiment(
    config: RunConfig,
    on_record: Callable[[TrialRecord], None] | None = None,
    progress: Callable[[int, int], None] | None = None,
) -> RunSummary:
    """Execute the resume-filtered plan; each record is durable before the next is scheduled."""
    registry = load_registry(config.registry_path)
    conditions = [registry.condition(n) for n in config.conditions]
    by_condition = {c.name: c for c in conditions}
    bank = load_bank(config.bank_path)
    items = {it.id: it for it in bank}
    endpoints = {m.name: m for m in config.models}
    plan = plan_trials(bank, conditions, config.models, config.reps)
    remaining, _ = resume_filter(plan, config.ledger_path, config.requeue_errors)

    executed = 0
    if remaining:
        # Credentials are checked for every endpoint before the first request goes out.
        clients = {m.name: ChatClient(m, config.retry) for m in config.models}
        pool = ThreadPoolExecutor(max_workers=config.concurrency)
        writer = LedgerWriter(config.ledger_path)
        try:
            queue = iter(remaining)
            pending = set()

            def fill():
                while len(pending) < config.concurrency:
                    key = next(queue, None)
                    if key is None:
                        return
                    pending.add(
                        pool.submit(
                            execute_trial,
                            key,
                            items[key.item_id],
                            by_condition[key.condition],
                            endpoints[key.model],
                            clients[key.model],
                            config.seed,
                        )
                    )

            fill()
            while pending:
                done, pending = wait(pending, return_when=FIRST_COMPLETED)
                for fut in done:
                    record = fut.result()
                    writer.append(record)
                    executed += 1
                    if progress is not None:
                        progress(executed, len(remaining))
                    if on_record is not None:
                        on_record(record)
                fill()
        finally:
            pool.shutdown(wait=True, cancel_futures=True)
            writer.close()
            for c in clients.values():
                c.close()

    summary = summarize(plan, config.ledger_path)
    summary.executed = executed
    return summary
