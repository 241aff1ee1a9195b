"""E-Prime and No-Have violation detectors."""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from umwelt_lab.constraints import lexicon
from umwelt_lab.constraints.tokenize import Token, split_contraction, tokenize
from umwelt_lab.errors import ConfigError

VALIDATORS = ("none", "e_prime", "no_have")

_QUOTED = re.compile(r'"[^"]*"|“[^”]*”')


@dataclass(frozen=True)
class CheckerConfig:
    s_heads: frozenset[str] = frozenset(lexicon.DEFAULT_S_HEADS)
    skip_words: frozenset[str] = frozenset(lexicon.DEFAULT_SKIP_WORDS)
    max_skips: int = 2
    quote_exempt: bool = False
    # "have to go" (obligation) is flagged unless this is switched off.
    flag_have_to: bool = True


DEFAULT_CONFIG = CheckerConfig()


@dataclass(frozen=True)
class Violation:
    span: tuple[int, int]
    matched_form: str
    rule: str


@dataclass(frozen=True)
class ViolationReport:
    constraint: str
    violations: tuple[Violation, ...] = field(default_factory=tuple)

    @property
    def count(self) -> int:
        return len(self.violations)

    def to_dict(self) -> dict:
        return {
            "constraint": self.constraint,
            "count": self.count,
            "violations": [
                {"span": list(v.span), "matched_form": v.matched_form, "rule": v.rule}
                for v in self.violations
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> ViolationReport:
        vs = tuple(
            Violation(tuple(v["span"]), v["matched_form"], v["rule"]) for v in data["violations"]
        )
        return cls(data["constraint"], vs)


def _quoted_ranges(text: str) -> list[tuple[int, int]]:
    return [m.span() for m in _QUOTED.finditer(text)]


def _candidate_words(text: str, config: CheckerConfig) -> list[tuple[int, Token]]:
    tokens = tokenize(text)
    quoted = _quoted_ranges(text) if config.quote_exempt else []
    out = []
    for i, tok in enumerate(tokens):
        if not tok.is_word:
            continue
        if quoted and any(a <= tok.start < b for a, b in quoted):
            continue
        out.append((i, tok))
    return out


def _violation(tok: Token, rule: str) -> Violation:
    return Violation((tok.start, tok.end), tok.lower, rule)


def check_eprime(text: str, config: CheckerConfig = DEFAULT_CONFIG) -> ViolationReport:
    found = []
    for _, tok in _candidate_words(text, config):
        norm = tok.norm
        if norm in lexicon.BE_FORMS or norm in lexicon.BE_NEGATIONS:
            found.append(_violation(tok, "be_form"))
            continue
        head, suffix = split_contraction(tok)
        if suffix in ("m", "re") or (suffix == "s" and head in config.s_heads):
            found.append(_violation(tok, "be_contraction"))
    return ViolationReport("e_prime", tuple(found))


def is_participle(word: str) -> bool:
    if word in lexicon.IRREGULAR_PARTICIPLES:
        return True
    if word in lexicon.NON_PARTICIPLE_ED_EN or len(word) < 4:
        return False
    return word.endswith("ed") or word.endswith("en")


def _next_word(tokens: list[Token], i: int, config: CheckerConfig) -> Token | None:
    """Next word token after ``tokens[i]``, skipping up to ``max_skips`` adverbs/negations.

    Returns None at end of text or when punctuation intervenes.
    """
    skipped = 0
    for tok in tokens[i + 1 :]:
        if not tok.is_word:
            return None
        if tok.norm in config.skip_words and skipped < config.max_skips:
            skipped += 1
            continue
        return tok
    return None


def check_nohave(text: str, config: CheckerConfig = DEFAULT_CONFIG) -> ViolationReport:
    tokens = tokenize(text)
    found = []
    for i, tok in _candidate_words(text, config):
        norm = tok.norm
        _, suffix = split_contraction(tok)
        if norm in lexicon.HAVE_FORMS or norm in lexicon.HAVE_NEGATIONS:
            rule = "have_form"
        elif suffix in ("ve", "d"):
            rule = "have_contraction"
        else:
            continue
        nxt = _next_word(tokens, i, config)
        follower = nxt.norm if nxt is not None else None
        if follower is not None and is_participle(follower):
            continue
        if suffix == "d" and follower in lexicon.BASE_VERBS:
            continue
        if follower == "to" and not config.flag_have_to:
            continue
        found.append(_violation(tok, rule))
    return ViolationReport("no_have", tuple(found))


def validate(condition, text: str, config: CheckerConfig = DEFAULT_CONFIG) -> ViolationReport:
    """Run the checker named by ``condition.validator`` (a ConditionSpec or a bare identifier)."""
    validator = getattr(condition, "validator", condition)
    if validator == "none":
        return ViolationReport("none")
    if validator == "e_prime":
        return check_eprime(text, config)
    if validator == "no_have":
        return check_nohave(text, config)
    raise ConfigError(f"unknown validator {validator!r}; expected one of {VALIDATORS}")


__all__ = [
    "CheckerConfig",
    "Violation",
    "ViolationReport",
    "check_eprime",
    "check_nohave",
    "is_participle",
    "validate",
]
