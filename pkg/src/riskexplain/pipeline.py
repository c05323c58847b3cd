"""End-to-end run: assess classes, compose prompts, explain, validate, report."""

from __future__ import annotations

import threading
from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor

from .backend import BackendConfig, BackendError, RemoteBackend
from .baseline import ProjectBaseline
from .cache import ResponseCache
from .context import ClassRiskProfile
from .dataset import ClassRecord
from .prompt import PromptConfig, PromptError, compose_prompt
from .report import ClassReport, ReportMode
from .taxonomy import validate_and_retry


def build_class_reports(
    pairs: Sequence[tuple[ClassRecord, ClassRiskProfile]],
    baseline: ProjectBaseline,
    mode: ReportMode | str,
    prompt_config: PromptConfig = PromptConfig(),
    backend_config: BackendConfig = BackendConfig(),
    *,
    cache: ResponseCache | None = None,
    max_regenerations: int = 1,
    remote: RemoteBackend | None = None,
    progress: Callable[[int, int], None] | None = None,
) -> list[ClassReport]:
    """One :class:`ClassReport` per pair, in input order.

    Per-class prompt or backend failures end up in ``ClassReport.error``;
    they never abort the run.
    """
    mode = ReportMode(mode)
    if mode is ReportMode.METRICS_ONLY:
        return [ClassReport(profile) for _, profile in pairs]

    total = len(pairs)
    done = 0
    lock = threading.Lock()

    def one(pair):
        nonlocal done
        record, profile = pair
        try:
            bundle = compose_prompt(record, baseline, prompt_config)
        except PromptError as exc:
            report = ClassReport(profile, error=str(exc))
        else:
            try:
                exp, cov = validate_and_retry(
                    bundle,
                    profile,
                    backend_config,
                    max_regenerations,
                    baseline,
                    cache=cache,
                    remote=remote,
                )
                report = ClassReport(profile, exp, cov, bundle.fingerprint)
            except (BackendError, ValueError) as exc:
                report = ClassReport(profile, error=str(exc), prompt_fingerprint=bundle.fingerprint)
        with lock:
            done += 1
            if progress:
                progress(done, total)
        return report

    if backend_config.backend == "offline":
        return [one(p) for p in pairs]

    owned = None
    if remote is None:
        owned = remote = RemoteBackend(backend_config)
    try:
        with ThreadPoolExecutor(max_workers=backend_config.max_parallel) as pool:
            return list(pool.map(one, pairs))
    finally:
        if owned is not None:
            owned.close()
