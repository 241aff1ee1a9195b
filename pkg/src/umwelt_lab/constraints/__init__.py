"""Vocabulary-constraint checking and the condition/agent registry."""

from umwelt_lab.constraints.checkers import (
    CheckerConfig,
    Violation,
    ViolationReport,
    check_eprime,
    check_nohave,
    is_participle,
    validate,
)
from umwelt_lab.constraints.registry import AgentSpec, ConditionSpec, Registry, load_registry
from umwelt_lab.constraints.tokenize import Token, tokenize, word_count, words

__all__ = [
    "AgentSpec",
    "CheckerConfig",
    "ConditionSpec",
    "Registry",
    "Token",
    "Violation",
    "ViolationReport",
    "check_eprime",
    "check_nohave",
    "is_participle",
    "load_registry",
    "tokenize",
    "validate",
    "word_count",
    "words",
]
