"""Synthetic ledgers whose counts match published aggregate marginals.

Per-trial data behind the published tables does not exist, so statistics that
need trials (bootstrap, accounting) run on a ledger rebuilt from cell counts.
"""

from __future__ import annotations

import json
import random
from importlib import resources

from umwelt_lab.constraints.tokenize import word_count
from umwelt_lab.extraction import LETTER4, extract_answer, score_trial
from umwelt_lab.runner.models import TrialKey, TrialRecord, temperature_for

MODELS = ("haiku", "gpt4o_mini", "gemini_flash_lite")
REPS = 4


def load_table1_counts() -> list[dict]:
    text = resources.files("umwelt_lab.data").joinpath("table1_counts.json").read_text("utf-8")
    return json.loads(text)["cells"]


def _ok(key, task, text, truth="A") -> TrialRecord:
    rec = TrialRecord(key, temperature_for(key.repetition), "ok", response=text, task_type=task)
    rec.extraction = extract_answer(text, LETTER4)
    rec.outcome = score_trial(rec.extraction, truth, LETTER4)
    rec.word_count = word_count(text)
    rec.timestamp = "2026-01-01T00:00:00.000Z"
    return rec


def reconstruct_ledger(
    cells: list[dict] | None = None,
    transport_errors: int = 30,
    timeouts: int = 180,
    empty: int = 41,
    no_match: int = 85,
    seed: int = 0,
) -> list[TrialRecord]:
    """One record per planned key; non-scoreable slots are spread over cells by seeded shuffle.

    Every cell's planned size (items × models × reps) minus its scoreable count
    gives its non-scoreable slots; those slots are labelled transport error,
    timeout, empty response, then no-match, in shuffled order.
    """
    cells = cells if cells is not None else load_table1_counts()
    rng = random.Random(seed)
    slots = []
    for ci, cell in enumerate(cells):
        planned = cell["items"] * len(MODELS) * REPS
        slots += [ci] * (planned - cell["n_scoreable"])
    kinds = ["transport_error"] * transport_errors + ["timeout"] * timeouts + ["empty"] * empty + ["no_match"] * no_match
    if len(kinds) != len(slots):
        raise ValueError(f"{len(slots)} non-scoreable slots but {len(kinds)} injected failures")
    rng.shuffle(slots)
    per_cell: dict[int, list[str]] = {}
    for ci, kind in zip(slots, kinds):
        per_cell.setdefault(ci, []).append(kind)

    records = []
    for ci, cell in enumerate(cells):
        task, cond = cell["task_type"], cell["condition"]
        keys = [
            TrialKey(f"{task}-{i:02d}", cond, m, r)
            for i in range(cell["items"])
            for m in MODELS
            for r in range(REPS)
        ]
        rng.shuffle(keys)
        fails = per_cell.get(ci, [])
        n, k = cell["n_scoreable"], cell["n_correct"]
        for j, key in enumerate(keys):
            if j < k:
                records.append(_ok(key, task, "Weighing each option in turn.\nAnswer: A"))
            elif j < n:
                records.append(_ok(key, task, "Weighing each option in turn.\nAnswer: C"))
            else:
                kind = fails[j - n]
                if kind == "empty":
                    records.append(_ok(key, task, ""))
                elif kind == "no_match":
                    records.append(_ok(key, task, "Several options seem defensible and none clearly wins."))
                else:
                    records.append(
                        TrialRecord(key, temperature_for(key.repetition), kind, task_type=task, timestamp="2026-01-01T00:00:00.000Z")
                    )
    records.sort(key=lambda r: r.key)
    return records


def wordcount_fixture(means: dict[str, dict[str, int]], per_cell: int = 3) -> list[TrialRecord]:
    """Ok records whose per task×condition mean word counts equal ``means`` exactly.

    Counts are spread symmetrically around each mean (m−1, m, m+1, …).
    """
    records = []
    offsets = [0] + [s * d for d in range(1, per_cell) for s in (-1, 1)]
    offsets = offsets[:per_cell] if per_cell % 2 else offsets[: per_cell - 1] + [0]
    for task, by_cond in means.items():
        for cond, mean in by_cond.items():
            for i, off in enumerate(offsets):
                n = mean + off
                text = " ".join(["word"] * (n - 2) + ["Answer:", "A"])
                records.append(_ok(TrialKey(f"{task}-{i:02d}", cond, "fixture", 0), task, text))
    return records
