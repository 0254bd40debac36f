"""Model scorer backends: the behavioural interface, deterministic mocks
for tests, and an HTTP client for a real likelihood endpoint."""

from __future__ import annotations

import json
import os
import time
from pathlib import Path
from typing import Callable, Protocol, runtime_checkable

from ..errors import DataFormatError, ScorerBackendError, ScorerError

SCORER_URL_ENV = "JLMKIT_SCORER_URL"


@runtime_checkable
class ModelScorer(Protocol):
    """Deterministic scoring interface. ``concurrency_safe`` declares
    whether the harness may call this scorer from multiple threads."""

    concurrency_safe: bool

    def loglikelihood(self, context: str, continuation: str) -> float: ...

    def generate(self, context: str, stop_sequences: tuple[str, ...],
                 max_new_tokens: int) -> str: ...


class LookupScorer:
    """Table-driven mock: exact (context, continuation) pairs first, then
    continuation-only entries, then the default."""

    concurrency_safe = True

    def __init__(self, pair_scores: dict | None = None,
                 continuation_scores: dict | None = None,
                 generations: dict | None = None,
                 default_loglikelihood: float | None = None,
                 default_generation: str | None = ""):
        self.pair_scores = pair_scores or {}
        self.continuation_scores = continuation_scores or {}
        self.generations = generations or {}
        self.default_loglikelihood = default_loglikelihood
        self.default_generation = default_generation

    def loglikelihood(self, context: str, continuation: str) -> float:
        if (context, continuation) in self.pair_scores:
            return self.pair_scores[(context, continuation)]
        if continuation in self.continuation_scores:
            return self.continuation_scores[continuation]
        if self.default_loglikelihood is not None:
            return self.default_loglikelihood
        raise ScorerError(
            f"no score recorded for continuation {continuation!r}"
        )

    def generate(self, context: str, stop_sequences: tuple[str, ...],
                 max_new_tokens: int) -> str:
        if context in self.generations:
            return self.generations[context]
        if self.default_generation is not None:
            return self.default_generation
        raise ScorerError("no generation recorded for this context")

    @classmethod
    def from_file(cls, path: str | Path) -> "LookupScorer":
        try:
            doc = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise DataFormatError(f"cannot read scorer table {path}: {exc}") from exc
        pair_scores = {}
        continuation_scores = {}
        for row in doc.get("likelihoods", []):
            if "context" in row:
                pair_scores[(row["context"], row["continuation"])] = row["value"]
            else:
                continuation_scores[row["continuation"]] = row["value"]
        generations = {row["context"]: row["text"]
                       for row in doc.get("generations", [])}
        return cls(
            pair_scores=pair_scores,
            continuation_scores=continuation_scores,
            generations=generations,
            default_loglikelihood=doc.get("default_loglikelihood"),
            default_generation=doc.get("default_generation", ""),
        )


class UniformUnigramScorer:
    """Every token costs the same: loglikelihood = -cost * token_count.
    The shortest continuation always wins the argmax."""

    concurrency_safe = True

    def __init__(self, cost_per_token: float = 1.0,
                 token_counter: Callable[[str], int] | None = None):
        self.cost_per_token = cost_per_token
        self.token_counter = token_counter or (lambda text: len(text.split()))

    def loglikelihood(self, context: str, continuation: str) -> float:
        return -self.cost_per_token * self.token_counter(continuation)

    def generate(self, context: str, stop_sequences: tuple[str, ...],
                 max_new_tokens: int) -> str:
        return ""


class HttpScorer:
    """Client for an external likelihood/completion endpoint.

    POST {context, continuation} -> {"loglikelihood": x} at /loglikelihood;
    POST {context, stop_sequences, max_new_tokens} -> {"text": s} at
    /generate. Unreachable or malformed endpoints raise
    ScorerBackendError, which the CLI maps to its own exit code.
    """

    concurrency_safe = False

    def __init__(self, base_url: str | None = None, timeout: float = 30.0,
                 retries: int = 2, retry_wait: float = 0.5):
        url = base_url or os.environ.get(SCORER_URL_ENV)
        if not url:
            raise ScorerBackendError(
                f"no scorer endpoint configured (flag or {SCORER_URL_ENV})"
            )
        self.base_url = url.rstrip("/")
        self.timeout = timeout
        self.retries = retries
        self.retry_wait = retry_wait
        import requests  # deferred: only the HTTP backend needs it

        self._requests = requests
        self._session = requests.Session()

    def _post(self, route: str, payload: dict) -> dict:
        last_error: Exception | None = None
        for attempt in range(self.retries + 1):
            try:
                response = self._session.post(self.base_url + route,
                                              json=payload,
                                              timeout=self.timeout)
                response.raise_for_status()
                return response.json()
            except (self._requests.RequestException, ValueError) as exc:
                last_error = exc
                if attempt < self.retries:
                    time.sleep(self.retry_wait)
        raise ScorerBackendError(
            f"scorer endpoint {self.base_url}{route} failed: {last_error}"
        )

    def loglikelihood(self, context: str, continuation: str) -> float:
        doc = self._post("/loglikelihood",
                         {"context": context, "continuation": continuation})
        try:
            return float(doc["loglikelihood"])
        except (KeyError, TypeError) as exc:
            raise ScorerBackendError(
                f"malformed loglikelihood response: {doc!r}"
            ) from exc

    def generate(self, context: str, stop_sequences: tuple[str, ...],
                 max_new_tokens: int) -> str:
        doc = self._post("/generate", {
            "context": context,
            "stop_sequences": list(stop_sequences),
            "max_new_tokens": max_new_tokens,
        })
        try:
            return str(doc["text"])
        except KeyError as exc:
            raise ScorerBackendError(
                f"malformed generate response: {doc!r}"
            ) from exc
