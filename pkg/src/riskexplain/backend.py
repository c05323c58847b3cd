"""Explanation backends: a chat-completions HTTP endpoint or the offline generator.

The remote request is the common chat-completions JSON body::

    {"model": ..., "temperature": ..., "messages": [{"role": "user", "content": prompt}]}

The credential is read from ``RISKEXPLAIN_API_KEY`` and sent as a bearer
token.  It is never logged and never accepted from the command line.
"""

from __future__ import annotations

import logging
import os
import random
import time
from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone

import httpx

from .baseline import ProjectBaseline
from .cache import CacheEntry, ResponseCache
from .context import ClassRiskProfile
from .prompt import PromptBundle

log = logging.getLogger(__name__)

API_KEY_ENV = "RISKEXPLAIN_API_KEY"
BACKENDS = ("offline", "remote")


class BackendError(Exception):
    def __init__(self, message: str, status: int | None = None, attempts: int = 0):
        super().__init__(message)
        self.status = status
        self.attempts = attempts


class AuthenticationError(BackendError):
    pass


class RetriesExhaustedError(BackendError):
    pass


class MalformedResponseError(BackendError):
    pass


class BackendConfigError(ValueError):
    pass


@dataclass(frozen=True)
class BackendConfig:
    backend: str = "offline"
    endpoint_url: str | None = None
    model_name: str = ""
    temperature: float = 0.0
    max_retries: int = 3
    request_timeout: float = 60.0
    max_parallel: int = 4
    system_message: str = ""
    reproducible: bool = False
    backoff_base: float = 1.0
    backoff_factor: float = 2.0
    api_key: str | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.backend not in BACKENDS:
            raise BackendConfigError(f"unknown backend {self.backend!r}")
        if self.temperature < 0:
            raise BackendConfigError("temperature must be >= 0")
        if self.max_retries < 0 or self.max_parallel < 1:
            raise BackendConfigError("max_retries must be >= 0 and max_parallel >= 1")
        if self.reproducible and self.temperature != 0:
            raise BackendConfigError("reproducible runs require temperature 0")

    @property
    def backend_id(self) -> str:
        from .offline import BACKEND_ID

        return BACKEND_ID if self.backend == "offline" else self.model_name

    def credential(self) -> str:
        key = self.api_key or os.environ.get(API_KEY_ENV)
        if not key:
            raise BackendConfigError(f"remote backend needs a credential in ${API_KEY_ENV}")
        return key

    def validate(self) -> None:
        if self.backend == "remote":
            if not self.endpoint_url:
                raise BackendConfigError("remote backend needs an endpoint URL")
            if not self.model_name:
                raise BackendConfigError("remote backend needs a model name")
            self.credential()


@dataclass(frozen=True)
class Explanation:
    text: str
    backend_id: str
    prompt_fingerprint: str
    created_at: str | None
    attempt_count: int
    cached: bool = False


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


class RemoteBackend:
    """Chat-completions client with exponential backoff on 429/5xx/timeouts."""

    def __init__(
        self,
        config: BackendConfig,
        *,
        client: httpx.Client | None = None,
        sleep: Callable[[float], None] = time.sleep,
        rng: random.Random | None = None,
    ):
        config.validate()
        self.config = config
        self._client = client or httpx.Client(timeout=config.request_timeout)
        self._owns_client = client is None
        self._sleep = sleep
        self._rng = rng or random.Random()

    def close(self) -> None:
        if self._owns_client:
            self._client.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()

    def _delay(self, attempt: int, retry_after: str | None) -> float:
        cfg = self.config
        delay = cfg.backoff_base * cfg.backoff_factor ** (attempt - 1)
        delay += self._rng.uniform(0, cfg.backoff_base)
        if retry_after:
            try:
                delay = max(delay, float(retry_after))
            except ValueError:
                pass
        return delay

    def complete(self, prompt_text: str) -> tuple[str, int]:
        """Return ``(text, attempts)`` for one prompt."""
        cfg = self.config
        messages = [{"role": "user", "content": prompt_text}]
        if cfg.system_message:
            messages.insert(0, {"role": "system", "content": cfg.system_message})
        payload = {"model": cfg.model_name, "temperature": cfg.temperature, "messages": messages}
        headers = {"Authorization": f"Bearer {cfg.credential()}"}

        last_status = None
        last_problem = ""
        for attempt in range(1, cfg.max_retries + 2):
            retry_after = None
            try:
                resp = self._client.post(
                    cfg.endpoint_url, json=payload, headers=headers, timeout=cfg.request_timeout
                )
            except httpx.TransportError as exc:
                last_status, last_problem = None, type(exc).__name__
            else:
                code = resp.status_code
                if code in (401, 403):
                    raise AuthenticationError(f"authentication failed (HTTP {code})", code, attempt)
                if code == 429 or code >= 500:
                    last_status, last_problem = code, f"HTTP {code}"
                    retry_after = resp.headers.get("retry-after")
                elif code >= 400:
                    raise BackendError(f"request rejected (HTTP {code})", code, attempt)
                else:
                    return _parse_completion(resp, attempt), attempt
            if attempt <= cfg.max_retries:
                delay = self._delay(attempt, retry_after)
                log.info("transient failure (%s); retrying in %.1fs", last_problem, delay)
                self._sleep(delay)
        raise RetriesExhaustedError(
            f"gave up after {cfg.max_retries + 1} attempts; last failure: {last_problem}",
            last_status,
            cfg.max_retries + 1,
        )


def _parse_completion(resp: httpx.Response, attempt: int) -> str:
    try:
        content = resp.json()["choices"][0]["message"]["content"]
    except (ValueError, KeyError, IndexError, TypeError):
        raise MalformedResponseError("response has no choices[0].message.content", resp.status_code, attempt)
    if not isinstance(content, str) or not content.strip():
        raise MalformedResponseError("response content is empty", resp.status_code, attempt)
    return content


def generate(
    prompt: PromptBundle,
    config: BackendConfig,
    profile: ClassRiskProfile | None = None,
    baseline: ProjectBaseline | None = None,
    *,
    cache: ResponseCache | None = None,
    remote: RemoteBackend | None = None,
) -> Explanation:
    """Produce one explanation.

    The offline backend works from ``profile`` and ``baseline`` and ignores
    the prompt text apart from its fingerprint.  Remote results are looked up
    in and written to ``cache`` when one is given.
    """
    if config.backend == "offline":
        if profile is None or baseline is None:
            raise BackendConfigError("offline backend needs the class profile and baseline")
        from .offline import offline_generate

        return offline_generate(profile, baseline, prompt_fingerprint=prompt.fingerprint)

    fingerprint = prompt.fingerprint
    backend_id = config.backend_id
    if cache is not None:
        hit = cache.get(fingerprint, backend_id)
        if hit is not None:
            return Explanation(hit.text, backend_id, fingerprint, hit.created_at, 0, cached=True)

    if remote is None:
        with RemoteBackend(config) as owned:
            text, attempts = owned.complete(prompt.rendered)
    else:
        text, attempts = remote.complete(prompt.rendered)
    explanation = Explanation(text, backend_id, fingerprint, _now(), attempts)
    if cache is not None:
        cache.put(CacheEntry(fingerprint, backend_id, text, explanation.created_at))
    return explanation


Job = tuple[PromptBundle, ClassRiskProfile, ProjectBaseline]


def generate_batch(
    jobs: Sequence[Job],
    config: BackendConfig,
    *,
    cache: ResponseCache | None = None,
    remote: RemoteBackend | None = None,
    on_done: Callable[[int], None] | None = None,
) -> list[Explanation | BackendError]:
    """Run many jobs; results come back in input order.

    Failures are returned in place of the explanation rather than raised.
    Remote jobs run up to ``config.max_parallel`` at a time.
    """

    def run(index: int, job: Job):
        prompt, profile, baseline = job
        try:
            return generate(prompt, config, profile, baseline, cache=cache, remote=remote)
        except BackendError as exc:
            return exc
        finally:
            if on_done:
                on_done(index)

    if config.backend == "offline":
        return [run(i, job) for i, job in enumerate(jobs)]

    owned = None
    if remote is None:
        owned = remote = RemoteBackend(config)
    try:
        with ThreadPoolExecutor(max_workers=config.max_parallel) as pool:
            futures = [pool.submit(run, i, job) for i, job in enumerate(jobs)]
            return [f.result() for f in futures]
    finally:
        if owned is not None:
            owned.close()
