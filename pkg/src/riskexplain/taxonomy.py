"""Lexical check that an explanation covers descriptive, contextual and actionable content.

Text is split into sentences (terminal punctuation followed by whitespace, or
a line break).  A category is detected from cue phrases:

* descriptive: every profiled metric is named (acronym or full name) in a
  sentence carrying a definitional cue, or expanded as "ACRONYM (Full Name)";
* contextual: some sentence names a metric and refers to the project
  baseline (σ, sigma, mean, baseline, average, or a z figure);
* actionable: some sentence carries an imperative cue (refactor, extract,
  avoid, ...).

Matching is case-insensitive.  These heuristics are this package's working
definition of "covers the category", not a judgement of quality.
"""

from __future__ import annotations

import re
from collections.abc import Sequence
from dataclasses import dataclass, field

from .backend import BackendConfig, Explanation, generate
from .baseline import ProjectBaseline
from .cache import CacheEntry, ResponseCache
from .context import ClassRiskProfile
from .dataset import metric_kind
from .prompt import PromptBundle

DEFINITION_CUES = (
    "measures",
    "number of",
    "how many",
    "degree to which",
    "sum of",
    "is defined",
    "count of",
    "counts",
    "refers to",
)
BASELINE_CUES = ("σ", "sigma", "mean", "baseline", "average", "std dev", "standard deviation")
ACTION_CUES = (
    r"refactor\w*",
    "extract",
    "avoid",
    "split",
    "prefer",
    "do not",
    "don't",
    r"add (?:unit |regression |characterization )?tests?",
    r"hide\b.*?\bbehind",
)


def _cue_pattern(cues: Sequence[str], regex: bool = False) -> re.Pattern:
    parts = []
    for cue in cues:
        body = cue if regex else re.escape(cue)
        # word boundaries only where the cue itself starts/ends with a letter,
        # so symbol cues such as "σ" still match in "19.4σ"
        if cue[:1].isascii() and cue[:1].isalnum():
            body = r"(?<!\w)" + body
        if cue[-1:].isascii() and cue[-1:].isalnum():
            body = body + r"(?!\w)"
        parts.append(body)
    return re.compile("|".join(f"(?:{p})" for p in parts))


_Z_FIGURE = re.compile(r"\bz\s*[=≈]\s*[-+−]?\d")
_SENTENCE = re.compile(r"[^\n]+?(?:[.!?](?=\s)|$)", re.MULTILINE)


@dataclass(frozen=True)
class CueSet:
    definition: tuple[str, ...] = DEFINITION_CUES
    baseline: tuple[str, ...] = BASELINE_CUES
    action: tuple[str, ...] = ACTION_CUES  # regular expressions

    def extended(self, definition=(), baseline=(), action=()) -> CueSet:
        return CueSet(
            self.definition + tuple(definition),
            self.baseline + tuple(baseline),
            self.action + tuple(action),
        )


DEFAULT_CUES = CueSet()


@dataclass(frozen=True)
class EvidenceSpan:
    start: int
    end: int
    excerpt: str


@dataclass(frozen=True)
class TaxonomyCoverage:
    has_descriptive: bool
    has_contextual: bool
    has_actionable: bool
    evidence: dict[str, tuple[EvidenceSpan, ...]] = field(default_factory=dict)

    @property
    def complete(self) -> bool:
        return self.has_descriptive and self.has_contextual and self.has_actionable

    @property
    def score(self) -> int:
        return self.has_descriptive + self.has_contextual + self.has_actionable

    def to_dict(self) -> dict:
        return {
            "descriptive": self.has_descriptive,
            "contextual": self.has_contextual,
            "actionable": self.has_actionable,
            "complete": self.complete,
            "evidence": {
                cat: [{"start": s.start, "end": s.end, "excerpt": s.excerpt} for s in spans]
                for cat, spans in self.evidence.items()
            },
        }


def _fold(text: str) -> str:
    # per-character casefold keeps offsets aligned with the input
    out = []
    for ch in text:
        folded = ch.casefold()
        out.append(folded if len(folded) == 1 else ch.lower() if len(ch.lower()) == 1 else ch)
    return "".join(out)


def sentences(text: str) -> list[tuple[int, int]]:
    spans = []
    for m in _SENTENCE.finditer(text):
        start, end = m.start(), m.end()
        while start < end and text[start].isspace():
            start += 1
        if start < end:
            spans.append((start, end))
    return spans


def _expansion(metric: str) -> re.Pattern:
    kind = metric_kind(metric)
    return re.compile(
        rf"(?<!\w){re.escape(kind.acronym.casefold())}\s*[(:—–-]\s*\(?{re.escape(kind.display_name.casefold())}"
    )


def validate(
    explanation_text: str, profile: ClassRiskProfile, cues: CueSet = DEFAULT_CUES
) -> TaxonomyCoverage:
    folded = _fold(explanation_text)
    spans = sentences(folded)
    definition = _cue_pattern([_fold(c) for c in cues.definition])
    baseline = _cue_pattern([_fold(c) for c in cues.baseline])
    action = _cue_pattern(cues.action, regex=True)
    metrics = profile.metric_ids or tuple(profile.missing)
    name_patterns = {m: _cue_pattern(_names(m)) for m in metrics}
    any_metric = _cue_pattern(sorted({n for m in metrics for n in _names(m)})) if metrics else None

    def span(s, e):
        return EvidenceSpan(s, e, explanation_text[s:e])

    descriptive: list[EvidenceSpan] = []
    defined = set()
    for s, e in spans:
        sentence = folded[s:e]
        hit = False
        for m in metrics:
            if not name_patterns[m].search(sentence):
                continue
            if definition.search(sentence) or _expansion(m).search(sentence):
                defined.add(m)
                hit = True
        if hit:
            descriptive.append(span(s, e))
    has_descriptive = bool(metrics) and defined == set(metrics)

    contextual = []
    if any_metric is not None:
        for s, e in spans:
            sentence = folded[s:e]
            if any_metric.search(sentence) and (baseline.search(sentence) or _Z_FIGURE.search(sentence)):
                contextual.append(span(s, e))

    actionable = [span(s, e) for s, e in spans if action.search(folded[s:e])]

    return TaxonomyCoverage(
        has_descriptive=has_descriptive,
        has_contextual=bool(contextual),
        has_actionable=bool(actionable),
        evidence={
            "descriptive": tuple(descriptive) if has_descriptive else (),
            "contextual": tuple(contextual),
            "actionable": tuple(actionable),
        },
    )


def _names(metric: str) -> list[str]:
    kind = metric_kind(metric)
    names = {_fold(kind.acronym), _fold(kind.display_name), _fold(kind.id)}
    return sorted(names, key=len, reverse=True)


def validate_and_retry(
    prompt: PromptBundle,
    profile: ClassRiskProfile,
    config: BackendConfig,
    max_regenerations: int,
    baseline: ProjectBaseline | None = None,
    *,
    cache: ResponseCache | None = None,
    remote=None,
    cues: CueSet = DEFAULT_CUES,
) -> tuple[Explanation, TaxonomyCoverage]:
    """Generate, and regenerate (remote only) while coverage is incomplete.

    Returns the attempt covering the most categories, earliest on ties.
    Regenerations bypass the cache; the chosen attempt is written back so a
    cached rerun starts from it.
    """
    if max_regenerations < 0:
        raise ValueError("max_regenerations must be >= 0")
    explanation = generate(prompt, config, profile, baseline, cache=cache, remote=remote)
    coverage = validate(explanation.text, profile, cues)
    best = (explanation, coverage)
    if config.backend == "offline":
        return best

    for _ in range(max_regenerations):
        if best[1].complete:
            break
        explanation = generate(prompt, config, profile, baseline, cache=None, remote=remote)
        coverage = validate(explanation.text, profile, cues)
        if coverage.score > best[1].score:
            best = (explanation, coverage)

    chosen, chosen_cov = best
    if cache is not None and not chosen.cached:
        cache.put(CacheEntry(chosen.prompt_fingerprint, chosen.backend_id, chosen.text, chosen.created_at))
    return chosen, chosen_cov
