"""Final-answer extraction from free-form multiple-choice responses.

Patterns are grouped into ordered tiers. A match in a higher tier always
beats a lower one; inside a tier the match nearest the end of the response
wins, since models often revise before committing.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from umwelt_lab.errors import DataError

NO_MATCH = "no_match"
CORRECT, INCORRECT, UNSCORED = "correct", "incorrect", "unscored"


@dataclass(frozen=True)
class AnswerFormat:
    kind: str
    allowed: frozenset[str]

    @classmethod
    def named(cls, kind: str) -> AnswerFormat:
        if kind == "letter4":
            return LETTER4
        if kind == "valid_invalid":
            return VALID_INVALID
        raise DataError(f"unknown answer format {kind!r}")


LETTER4 = AnswerFormat("letter4", frozenset("ABCD"))
VALID_INVALID = AnswerFormat("valid_invalid", frozenset({"VALID", "INVALID"}))


@dataclass(frozen=True)
class Extraction:
    answer: str | None
    rule: str
    location: int | None

    def to_dict(self) -> dict:
        return {"answer": self.answer, "rule": self.rule, "location": self.location}

    @classmethod
    def from_dict(cls, data: dict) -> Extraction:
        return cls(data.get("answer"), data.get("rule", NO_MATCH), data.get("location"))


NO_EXTRACTION = Extraction(None, NO_MATCH, None)

# Answer slots. A letter must stand alone: "B", "(b)", "B.", but not the article in "A cat".
_LETTER = r"\(?(?P<ans>[A-Da-d])\)?(?![A-Za-z])"
_VERDICT = r"(?P<ans>not\s+valid|invalid|valid)\b"

# Separators tolerate Markdown emphasis: "**Final Answer:** **B**".
_MARKERS = r"(?:final\s+answer|answer)[\s*]*(?:is\b|:|=|-)?[\s*]*"
_RELATIONS = (
    r"(?:lies|resides)\s+(?:in|with)|rests\s+(?:with|on)|falls\s+(?:on|under)"
    r"|corresponds\s+to|points\s+to"
)


def _tiers(slot: str) -> list[tuple[str, re.Pattern]]:
    return [
        ("explicit_marker", re.compile(r"\b" + _MARKERS + slot, re.IGNORECASE)),
        (
            "boxed",
            re.compile(r"\\boxed\{\s*(?:\\text\{\s*)?" + slot + r"\s*\}?\s*\}", re.IGNORECASE),
        ),
        ("option", re.compile(r"\b(?:option|choice)\s+" + slot, re.IGNORECASE)),
        ("relational", re.compile(r"\b(?:" + _RELATIONS + r")\s+(?:the\s+)?" + slot, re.IGNORECASE)),
    ]


_LETTER_TIERS = _tiers(_LETTER)
_VERDICT_TIERS = _tiers(_VERDICT)

_FINAL_LETTER = re.compile(r"(?<![A-Za-z])\(?(?P<ans>[A-Da-d])\)?(?![A-Za-z])")
_ARTICLE_USE = re.compile(r"\s+[a-z]")
_FINAL_VERDICT = re.compile(r"\b" + _VERDICT, re.IGNORECASE)


def _canonical(raw: str, fmt: AnswerFormat) -> str | None:
    if fmt.kind == "valid_invalid":
        word = " ".join(raw.split()).upper()
        return "INVALID" if word in ("INVALID", "NOT VALID") else "VALID"
    letter = raw.upper()
    return letter if letter in fmt.allowed else None


def _lowercase_ok(m: re.Match, text: str) -> bool:
    """A lowercase letter counts only when bracketed or not followed by another word."""
    if not m.group("ans").islower() or m.group(0).startswith("("):
        return True
    return _ARTICLE_USE.match(text, m.end()) is None


def _last_match(pattern: re.Pattern, text: str, fmt: AnswerFormat):
    best = None
    for m in pattern.finditer(text):
        if fmt.kind == "letter4" and not _lowercase_ok(m, text):
            continue
        answer = _canonical(m.group("ans"), fmt)
        if answer is not None:
            best = (answer, m.start("ans"))
    return best


def _final_line(text: str, fmt: AnswerFormat):
    lines = [(m.start(), m.group()) for m in re.finditer(r"[^\n]*", text) if m.group().strip()]
    if not lines:
        return None
    offset, line = lines[-1]
    if fmt.kind == "valid_invalid":
        pattern = _FINAL_VERDICT
    else:
        pattern = _FINAL_LETTER
    best = None
    for m in pattern.finditer(line):
        if fmt.kind == "letter4":
            rest = line[m.end():]
            if m.group("ans").isupper() and not m.group(0).endswith(")") and _ARTICLE_USE.match(rest):
                continue
            if m.group("ans").islower() and not m.group(0).startswith("("):
                continue
        answer = _canonical(m.group("ans"), fmt)
        if answer is not None:
            best = (answer, offset + m.start("ans"))
    return best


def extract_answer(response: str | None, fmt: AnswerFormat = LETTER4) -> Extraction:
    if not response:
        return NO_EXTRACTION
    tiers = _VERDICT_TIERS if fmt.kind == "valid_invalid" else _LETTER_TIERS
    for rule, pattern in tiers:
        hit = _last_match(pattern, response, fmt)
        if hit is not None:
            return Extraction(hit[0], rule, hit[1])
    hit = _final_line(response, fmt)
    if hit is not None:
        return Extraction(hit[0], "final_line", hit[1])
    return NO_EXTRACTION


def score_trial(extraction: Extraction, truth: str, fmt: AnswerFormat = LETTER4) -> str:
    if truth not in fmt.allowed:
        raise DataError(f"truth {truth!r} is not an allowed {fmt.kind} answer")
    if extraction.answer is None:
        return UNSCORED
    return CORRECT if extraction.answer == truth else INCORRECT
