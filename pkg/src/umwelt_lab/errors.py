"""Exception hierarchy shared across the package."""

from __future__ import annotations


class UmweltError(Exception):
    """Base class for all package errors."""


class ConfigError(UmweltError):
    """Invalid configuration: unknown validator, bad config file, missing credential."""


class MissingCredentialError(ConfigError):
    def __init__(self, env_var: str, endpoint: str) -> None:
        super().__init__(f"environment variable {env_var} is not set (needed by endpoint {endpoint!r})")
        self.env_var = env_var
        self.endpoint = endpoint


class DataError(UmweltError):
    """Malformed or inconsistent input data."""


class AuthenticationError(UmweltError):
    """The endpoint rejected our credential. Aborts a run; never retried."""


class JudgeFormatError(UmweltError):
    """A judge reply could not be parsed, even after the stricter retry."""

    def __init__(self, task: str, replies: list[str], context: dict | None = None) -> None:
        super().__init__(f"judge reply for {task} unparseable after {len(replies)} attempts")
        self.task = task
        self.replies = replies
        self.context = context or {}

    def as_record(self) -> dict:
        return {"task": self.task, "replies": self.replies, **self.context}


class BudgetExceededError(UmweltError):
    """An exact combinatorial computation would exceed its enumeration budget."""

    def __init__(self, message: str, size: int) -> None:
        super().__init__(message)
        self.size = size
