"""Deterministic rule-based explanation generator ("offline-v1").

Output has three titled sections: metric descriptions, contextual analysis
(one assessment phrase per metric plus the baseline it was measured
against) and actionable suggestions ordered by severity.  Any change to the
wording below must bump ``BACKEND_ID`` so cached runs stay distinguishable.
"""

from __future__ import annotations

import hashlib
import json

from .baseline import ProjectBaseline
from .context import ClassRiskProfile, SeverityBand
from .dataset import metric_kind

BACKEND_ID = "offline-v1"

SECTION_TITLES = ("Metric Descriptions", "Contextual Analysis", "Actionable Suggestions")

_B = SeverityBand

RULES: dict[str, dict[SeverityBand, str]] = {
    "cbo": {
        _B.FAVORABLE: (
            "Keep coupling low: avoid adding new concrete dependencies and prefer "
            "narrow interfaces when a change needs another collaborator."
        ),
        _B.TYPICAL: (
            "Coupling is in line with the project: prefer reusing existing "
            "collaborators over introducing new ones."
        ),
        _B.ELEVATED: (
            "Review before extending: check that every new dependency is needed, and "
            "prefer receiving collaborators through interfaces over referencing concrete classes."
        ),
        _B.HIGH: (
            "Refactor before modifying: extract related collaborators behind a small "
            "facade so that callers and this class depend on fewer types."
        ),
        _B.EXTREME: (
            "Do not add new dependencies to this class unless there is no alternative; "
            "hide dependencies behind one or two interfaces or a facade, and refactor "
            "before modifying it so that changes stop rippling through the codebase."
        ),
        _B.NO_VARIANCE: (
            "Coupling does not vary in this project, so there is no local norm; avoid "
            "adding dependencies here without a design review."
        ),
    },
    "rfc": {
        _B.FAVORABLE: (
            "Keep the behavioral surface small: avoid new public methods and prefer "
            "delegating new behavior to collaborators."
        ),
        _B.TYPICAL: (
            "The response set is normal for the project: prefer extending existing "
            "methods and avoid widening the public API without a clear need."
        ),
        _B.ELEVATED: (
            "Review before extending: trace which call paths a change affects and add "
            "tests for them before editing."
        ),
        _B.HIGH: (
            "Refactor before modifying: split outgoing call clusters into focused "
            "collaborators, and add tests that pin the current behavior first."
        ),
        _B.EXTREME: (
            "Do not grow this class's call surface; split it along its call clusters "
            "into smaller classes and add characterization tests before any change."
        ),
        _B.NO_VARIANCE: (
            "The response set does not vary in this project; avoid adding public methods "
            "without checking how callers use the class."
        ),
    },
    "lcom": {
        _B.FAVORABLE: (
            "Maintain cohesion: if a change brings in an unrelated concern, extract it "
            "into a helper instead of adding new fields here."
        ),
        _B.TYPICAL: (
            "Cohesion is typical for the project: keep new methods working on the "
            "existing fields, and extract a helper when a change needs separate state."
        ),
        _B.ELEVATED: (
            "Review before extending: look for methods that touch disjoint fields and "
            "avoid adding another responsibility to the class."
        ),
        _B.HIGH: (
            "Refactor before modifying: split the class along groups of methods that "
            "share fields so that each part keeps a single responsibility."
        ),
        _B.EXTREME: (
            "Do not add unrelated responsibilities here; extract cohesive groups of "
            "fields and methods into their own classes, starting with the group your "
            "change touches."
        ),
        _B.NO_VARIANCE: (
            "Cohesion does not vary in this project; extract a helper if a change "
            "introduces state that existing methods do not use."
        ),
    },
    "wmc": {
        _B.FAVORABLE: (
            "Guard complexity: split any growing conditional into well-named helper "
            "methods and add tests alongside new branches."
        ),
        _B.TYPICAL: (
            "Complexity is typical for the project: keep methods short and add tests "
            "for every branch a change introduces."
        ),
        _B.ELEVATED: (
            "Review before extending: add tests around the most complex methods first "
            "and avoid adding new branches to them."
        ),
        _B.HIGH: (
            "Refactor before modifying: extract long methods into smaller ones or "
            "strategy objects, and add tests for the existing branches beforehand."
        ),
        _B.EXTREME: (
            "Do not add branches to this class; split its most complex methods before "
            "modifying it, and add tests covering current behavior so the refactoring is safe."
        ),
        _B.NO_VARIANCE: (
            "Complexity does not vary in this project; add tests for any branch a "
            "change introduces."
        ),
    },
}

_GENERIC = {
    _B.FAVORABLE: "{m} is below the project norm: avoid changes that push it upward.",
    _B.TYPICAL: "{m} is typical for the project: avoid changes that push it upward without need.",
    _B.ELEVATED: "Review before extending: {m} is above the project norm, so add tests for the code you touch.",
    _B.HIGH: "Refactor before modifying: {m} is well above the project norm.",
    _B.EXTREME: "Do not extend this class before a refactor brings {m} closer to the project norm.",
    _B.NO_VARIANCE: "{m} does not vary in this project; avoid introducing the first outlier.",
}


def suggestion(metric: str, band: SeverityBand) -> str:
    if metric in RULES:
        return RULES[metric][band]
    return _GENERIC[band].format(m=metric_kind(metric).acronym)


def _profile_fingerprint(profile: ClassRiskProfile) -> str:
    payload = json.dumps(profile.to_dict(), sort_keys=True, ensure_ascii=False)
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def offline_text(profile: ClassRiskProfile, baseline: ProjectBaseline) -> str:
    if not profile.assessments:
        raise ValueError(f"{profile.class_name} has no assessable metrics")
    lines = [f"**{SECTION_TITLES[0]}**"]
    for a in profile.assessments:
        lines.append(f"- {metric_kind(a.metric).definition}")

    lines += ["", f"**{SECTION_TITLES[1]}**"]
    for a in profile.assessments:
        stats = baseline[a.metric] if a.metric in baseline else None
        mean = stats.mean if stats else a.mean
        std = stats.std_dev if stats else a.std_dev
        scope = f" over {stats.count} classes" if stats and stats.count else ""
        lines.append(f"- {a.phrase}. Project baseline: μ={mean:.2f}, σ={std:.2f}{scope}.")
    overall = profile.overall_band
    lines.append(f"- Overall band for {profile.simple_name}: {overall.value}.")
    if profile.bug_count is not None:
        rank = f" (rank {profile.bug_rank} in the project)" if profile.bug_rank else ""
        lines.append(f"- Documented bugs: {profile.bug_count}{rank}.")

    lines += ["", f"**{SECTION_TITLES[2]}**"]
    ordered = sorted(profile.assessments, key=lambda a: -a.band.rank)
    for a in ordered:
        lines.append(f"- [{a.band.value}] {a.acronym}: {suggestion(a.metric, a.band)}")
    if overall.rank >= SeverityBand.ELEVATED.rank:
        lines.append(
            "- Testing: add tests around the behavior you are about to change before "
            "modifying this class, and ask a maintainer to review the change."
        )
    return "\n".join(lines) + "\n"


def offline_generate(profile: ClassRiskProfile, baseline: ProjectBaseline, prompt_fingerprint: str | None = None):
    """Explain ``profile`` without a model.  Pure: same input, same text."""
    from .backend import Explanation

    return Explanation(
        text=offline_text(profile, baseline),
        backend_id=BACKEND_ID,
        prompt_fingerprint=prompt_fingerprint or _profile_fingerprint(profile),
        created_at=None,
        attempt_count=1,
    )
