"""Chat-completion client with per-vendor adapters and bounded retries."""

from __future__ import annotations

import os
import random
import time
from dataclasses import dataclass
from typing import Callable

import httpx

from umwelt_lab.errors import AuthenticationError, ConfigError, MissingCredentialError
from umwelt_lab.runner.models import ModelEndpoint


class TransientError(Exception):
    """Retryable failure (HTTP 5xx/429, connection trouble)."""


class TimeoutFailure(TransientError):
    pass


class MalformedReply(Exception):
    """The endpoint answered 2xx but the body has no usable completion."""


@dataclass(frozen=True)
class RetryPolicy:
    max_retries: int = 3
    base_delay: float = 0.5
    max_delay: float = 8.0
    timeout: float = 120.0

    def delay(self, attempt: int, rng: random.Random) -> float:
        """Exponential backoff with full jitter in the upper half: base·2^attempt · U(0.5, 1)."""
        cap = min(self.max_delay, self.base_delay * (2**attempt))
        return cap * (0.5 + 0.5 * rng.random())


def _openai_request(ep: ModelEndpoint, key: str, system: str, user: str, temperature: float):
    url = ep.base_url.rstrip("/") + "/chat/completions"
    headers = {"Authorization": f"Bearer {key}"}
    body = {
        "model": ep.remote_model,
        "messages": [{"role": "system", "content": system}, {"role": "user", "content": user}],
        "temperature": temperature,
        "max_tokens": ep.max_output_tokens,
    }
    return url, headers, body


def _openai_reply(data) -> str:
    content = data["choices"][0]["message"]["content"]
    if not isinstance(content, str):
        raise TypeError("content is not text")
    return content


def _anthropic_request(ep: ModelEndpoint, key: str, system: str, user: str, temperature: float):
    url = ep.base_url.rstrip("/") + "/messages"
    headers = {"x-api-key": key, "anthropic-version": "2023-06-01"}
    body = {
        "model": ep.remote_model,
        "system": system,
        "messages": [{"role": "user", "content": user}],
        "temperature": temperature,
        "max_tokens": ep.max_output_tokens,
    }
    return url, headers, body


def _anthropic_reply(data) -> str:
    blocks = data["content"]
    texts = [b["text"] for b in blocks if b.get("type") == "text"]
    if not texts:
        raise TypeError("no text blocks")
    return "".join(texts)


ADAPTERS: dict[str, tuple[Callable, Callable]] = {
    "openai_chat": (_openai_request, _openai_reply),
    "anthropic_messages": (_anthropic_request, _anthropic_reply),
}


def credential(ep: ModelEndpoint) -> str:
    value = os.environ.get(ep.auth_env_var)
    if not value:
        raise MissingCredentialError(ep.auth_env_var, ep.name)
    return value


class ChatClient:
    def __init__(
        self,
        endpoint: ModelEndpoint,
        retry: RetryPolicy = RetryPolicy(),
        http: httpx.Client | None = None,
        sleep: Callable[[float], None] = time.sleep,
    ):
        if endpoint.adapter not in ADAPTERS:
            raise ConfigError(f"endpoint {endpoint.name}: unknown adapter {endpoint.adapter!r}")
        self.endpoint = endpoint
        self.retry = retry
        self._key = credential(endpoint)
        self._http = http or httpx.Client(timeout=retry.timeout)
        self._sleep = sleep

    def close(self) -> None:
        self._http.close()

    def _once(self, system: str, user: str, temperature: float) -> str:
        build, parse = ADAPTERS[self.endpoint.adapter]
        url, headers, body = build(self.endpoint, self._key, system, user, temperature)
        try:
            resp = self._http.post(url, headers=headers, json=body)
        except httpx.TimeoutException as exc:
            raise TimeoutFailure(f"timeout: {exc}") from exc
        except httpx.TransportError as exc:
            raise TransientError(f"connection: {exc}") from exc
        if resp.status_code in (401, 403):
            raise AuthenticationError(f"{self.endpoint.name}: HTTP {resp.status_code}")
        if resp.status_code == 429 or resp.status_code >= 500:
            raise TransientError(f"HTTP {resp.status_code}")
        if resp.status_code >= 400:
            raise MalformedReply(f"HTTP {resp.status_code}: {resp.text[:200]}")
        try:
            return parse(resp.json())
        except (ValueError, KeyError, IndexError, TypeError) as exc:
            raise MalformedReply(f"unusable reply body: {exc}") from exc

    def complete(self, system: str, user: str, temperature: float, rng: random.Random | None = None) -> str:
        """One completion, retrying transient failures ``retry.max_retries`` times."""
        rng = rng or random.Random(0)
        for attempt in range(self.retry.max_retries + 1):
            try:
                return self._once(system, user, temperature)
            except TransientError:
                if attempt == self.retry.max_retries:
                    raise
                self._sleep(self.retry.delay(attempt, rng))
        raise AssertionError("unreachable")
