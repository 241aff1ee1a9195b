"""Append-only JSON-Lines trial ledger.

Each record is one line, written and fsynced before the trial counts as done.
A line that fails to parse (typically the torn tail of a killed writer) is
copied once to ``<ledger>.quarantine`` and otherwise ignored; the ledger
itself is never rewritten.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from pathlib import Path

from umwelt_lab.errors import DataError
from umwelt_lab.runner.models import TrialKey, TrialRecord


def quarantine_path(ledger: str | Path) -> Path:
    ledger = Path(ledger)
    return ledger.with_name(ledger.name + ".quarantine")


@dataclass
class LedgerContents:
    records: list[TrialRecord]
    quarantined: int


def _quarantine(ledger: Path, bad: list[tuple[int, str]]) -> None:
    qpath = quarantine_path(ledger)
    seen = set()
    if qpath.exists():
        for line in qpath.read_text("utf-8").splitlines():
            try:
                entry = json.loads(line)
                seen.add((entry["line"], entry["text"]))
            except (json.JSONDecodeError, KeyError, TypeError):
                continue
    fresh = [(n, t) for n, t in bad if (n, t) not in seen]
    if not fresh:
        return
    with qpath.open("a", encoding="utf-8") as fh:
        for n, t in fresh:
            fh.write(json.dumps({"line": n, "text": t}, ensure_ascii=False) + "\n")
        fh.flush()
        os.fsync(fh.fileno())


def read_ledger(path: str | Path, quarantine: bool = True) -> LedgerContents:
    path = Path(path)
    if not path.exists():
        return LedgerContents([], 0)
    records, bad = [], []
    with path.open("r", encoding="utf-8", errors="replace") as fh:
        for n, line in enumerate(fh, start=1):
            text = line.rstrip("\n")
            if not text.strip():
                continue
            try:
                records.append(TrialRecord.from_dict(json.loads(text)))
            except (json.JSONDecodeError, KeyError, TypeError, ValueError, DataError):
                bad.append((n, text))
    if bad and quarantine:
        _quarantine(path, bad)
    return LedgerContents(records, len(bad))


def effective_records(records: list[TrialRecord]) -> dict[TrialKey, TrialRecord]:
    """One record per key: the first ok record if any, otherwise the latest attempt."""
    out: dict[TrialKey, TrialRecord] = {}
    for rec in records:
        prev = out.get(rec.key)
        if prev is None or not prev.ok:
            out[rec.key] = rec
    return out


class LedgerWriter:
    """Single-writer appender. Not thread-safe by design; the runner's main thread owns it."""

    def __init__(self, path: str | Path, durable: bool = True):
        self.path = Path(path)
        self.durable = durable
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._fh = self.path.open("a+b")
        self._repair_tail()

    def _repair_tail(self) -> None:
        # A torn final line would otherwise swallow the next record.
        self._fh.seek(0, os.SEEK_END)
        if self._fh.tell() == 0:
            return
        self._fh.seek(-1, os.SEEK_END)
        if self._fh.read(1) != b"\n":
            self._fh.write(b"\n")
            self._sync()

    def _sync(self) -> None:
        self._fh.flush()
        if self.durable:
            os.fsync(self._fh.fileno())

    def append(self, record: TrialRecord) -> None:
        line = json.dumps(record.to_dict(), ensure_ascii=False, separators=(",", ":")) + "\n"
        self._fh.write(line.encode("utf-8"))
        self._sync()

    def close(self) -> None:
        if not self._fh.closed:
            self._fh.close()

    def __enter__(self) -> LedgerWriter:
        return self

    def __exit__(self, *exc) -> None:
        self.close()


def write_records(path: str | Path, records, durable: bool = False) -> None:
    """Bulk-append records (fixtures, re-scored ledgers); fsync per line only when ``durable``."""
    with LedgerWriter(path, durable=durable) as w:
        for r in records:
            w.append(r)
