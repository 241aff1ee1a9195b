"""Per-response reasoning metrics: step-marker depth and grounded/bare assertions."""

from __future__ import annotations

import re

from umwelt_lab.constraints.tokenize import words

_NUMBERED_LINE = re.compile(r"^\s*\d+[.)\]:]\s", re.MULTILINE)
_STEP = re.compile(r"\bstep\s+\d+", re.IGNORECASE)

DEFAULT_GROUNDING = frozenset(
    {"because", "since", "given", "evidence", "observed", "according", "implies", "therefore"}
)

# A sentence runs to terminal punctuation (possibly repeated, possibly followed by a closing
# quote/bracket) or to the end of the text.
_SENTENCE = re.compile(r"[^.!?]+(?:[.!?]+[\"'”’)\]]*|$)")


def chain_depth(text: str | None) -> int:
    """Count numbered lines plus "step N" markers on lines that are not themselves numbered."""
    if not text:
        return 0
    depth = 0
    for line in text.splitlines():
        if _NUMBERED_LINE.match(line + " "):
            depth += 1
        else:
            depth += len(_STEP.findall(line))
    return depth


def sentences(text: str) -> list[str]:
    return [s.strip() for s in _SENTENCE.findall(text) if s.strip()]


def epistemic_specificity(text: str | None, lexicon=DEFAULT_GROUNDING) -> dict[str, int]:
    grounded = bare = 0
    for sent in sentences(text or ""):
        toks = {t.norm for t in words(sent)}
        if not toks:
            continue
        if toks & lexicon:
            grounded += 1
        elif not sent.endswith("?"):
            bare += 1
    return {"grounded": grounded, "bare": bare}
