"""Severity bands and contextual assessments of class metrics."""

from __future__ import annotations

import enum
from collections.abc import Iterable, Mapping
from dataclasses import dataclass

from .baseline import (
    ProjectBaseline,
    SigmaDistance,
    describe_sigma,
    format_sigma,
    format_value,
    sigma_distance,
)
from .dataset import ClassRecord, ProjectDataset, metric_kind


class SeverityBand(enum.Enum):
    NO_VARIANCE = "no-variance"
    FAVORABLE = "favorable"
    TYPICAL = "typical"
    ELEVATED = "elevated"
    HIGH = "high"
    EXTREME = "extreme"

    @property
    def rank(self) -> int:
        """Position in favorable < typical < ... < extreme; no-variance is -1."""
        return _RANKS[self]

    def __str__(self) -> str:
        return self.value


_RANKS = {
    SeverityBand.NO_VARIANCE: -1,
    SeverityBand.FAVORABLE: 0,
    SeverityBand.TYPICAL: 1,
    SeverityBand.ELEVATED: 2,
    SeverityBand.HIGH: 3,
    SeverityBand.EXTREME: 4,
}


@dataclass(frozen=True)
class SeverityThresholds:
    """Lower z bounds of typical, elevated, high and extreme (half-open)."""

    typical: float = -0.25
    elevated: float = 1.0
    high: float = 2.0
    extreme: float = 4.0

    def __post_init__(self):
        if not self.typical < self.elevated < self.high < self.extreme:
            raise ValueError("severity thresholds must be strictly increasing")

    @classmethod
    def parse(cls, text: str) -> SeverityThresholds:
        """Parse ``"-0.25,1,2,4"``."""
        parts = [float(p) for p in text.split(",")]
        if len(parts) != 4:
            raise ValueError("expected four comma-separated thresholds")
        return cls(*parts)


DEFAULT_THRESHOLDS = SeverityThresholds()


def classify_severity(
    distance: SigmaDistance, thresholds: SeverityThresholds = DEFAULT_THRESHOLDS
) -> SeverityBand:
    if not distance.defined:
        return SeverityBand.NO_VARIANCE
    z = distance.z
    if z < thresholds.typical:
        return SeverityBand.FAVORABLE
    if z < thresholds.elevated:
        return SeverityBand.TYPICAL
    if z < thresholds.high:
        return SeverityBand.ELEVATED
    if z < thresholds.extreme:
        return SeverityBand.HIGH
    return SeverityBand.EXTREME


_PHRASES = {
    SeverityBand.EXTREME: "{metric} = {value} → Extreme outlier (~{prose})",
    SeverityBand.HIGH: "{metric} = {value} → High, well beyond the project norm (~{prose})",
    SeverityBand.ELEVATED: "{metric} = {value} → Elevated, above the project norm ({signed} from the mean)",
    SeverityBand.TYPICAL: "{metric} = {value} → Typical for this project ({signed} from the mean)",
    SeverityBand.FAVORABLE: "{metric} = {value} → Favorable, below the project norm ({signed} from the mean)",
    SeverityBand.NO_VARIANCE: (
        "{metric} = {value} → No variance in this project: every class shares "
        "the same {metric} value (σ = 0), so no baseline distance applies"
    ),
}


@dataclass(frozen=True)
class ContextualAssessment:
    metric: str
    value: float
    mean: float
    std_dev: float
    distance: SigmaDistance
    band: SeverityBand
    phrase: str

    @property
    def acronym(self) -> str:
        return metric_kind(self.metric).acronym


def assess_metric(
    metric: str,
    value: float,
    baseline: ProjectBaseline,
    thresholds: SeverityThresholds = DEFAULT_THRESHOLDS,
) -> ContextualAssessment:
    stats = baseline[metric]
    distance = sigma_distance(value, stats.mean, stats.std_dev)
    band = classify_severity(distance, thresholds)
    phrase = _PHRASES[band].format(
        metric=metric_kind(metric).acronym,
        value=format_value(value),
        prose=describe_sigma(distance),
        signed=format_sigma(distance),
    )
    return ContextualAssessment(metric, value, stats.mean, stats.std_dev, distance, band, phrase)


def overall_band(bands: Iterable[SeverityBand]) -> SeverityBand:
    """Highest band, ignoring no-variance unless nothing else is present."""
    ranked = [b for b in bands if b is not SeverityBand.NO_VARIANCE]
    if not ranked:
        return SeverityBand.NO_VARIANCE
    return max(ranked, key=lambda b: b.rank)


class ContextError(ValueError):
    pass


@dataclass(frozen=True)
class ClassRiskProfile:
    class_name: str
    assessments: tuple[ContextualAssessment, ...]
    bug_count: int | None
    overall_band: SeverityBand
    missing: tuple[str, ...] = ()
    project_name: str = ""
    bug_rank: int | None = None
    row: int = 0

    @property
    def simple_name(self) -> str:
        return ClassRecord(self.class_name, {}, None).simple_name

    @property
    def metric_ids(self) -> tuple[str, ...]:
        return tuple(a.metric for a in self.assessments)

    @property
    def max_abs_z(self) -> float:
        return max((abs(a.distance.z) for a in self.assessments if a.distance.defined), default=0.0)

    def assessment(self, metric: str) -> ContextualAssessment:
        for a in self.assessments:
            if a.metric == metric:
                return a
        raise KeyError(metric)

    def to_dict(self) -> dict:
        return {
            "class_name": self.class_name,
            "project": self.project_name,
            "row": self.row,
            "bug_count": self.bug_count,
            "bug_rank": self.bug_rank,
            "overall_band": self.overall_band.value,
            "metrics": [
                {
                    "metric": a.metric,
                    "value": a.value,
                    "mean": a.mean,
                    "std_dev": a.std_dev,
                    "z": a.distance.z if a.distance.defined else None,
                    "band": a.band.value,
                    "phrase": a.phrase,
                }
                for a in self.assessments
            ],
            "missing_metrics": list(self.missing),
        }

    @classmethod
    def from_dict(
        cls, data: Mapping, thresholds: SeverityThresholds = DEFAULT_THRESHOLDS
    ) -> ClassRiskProfile:
        """Rebuild a profile from :meth:`to_dict` output (or a class report).

        Bands and phrases are recomputed from value, mean and std_dev so a
        hand-edited file cannot carry inconsistent labels.
        """
        rows = data["metrics"]
        baseline = ProjectBaseline.from_pairs(
            data.get("project", ""), {r["metric"]: (r["mean"], r["std_dev"]) for r in rows}
        )
        assessments = tuple(assess_metric(r["metric"], r["value"], baseline, thresholds) for r in rows)
        return cls(
            class_name=data["class_name"],
            assessments=assessments,
            bug_count=data.get("bug_count"),
            overall_band=overall_band(a.band for a in assessments),
            missing=tuple(data.get("missing_metrics", ())),
            project_name=data.get("project", ""),
            bug_rank=data.get("bug_rank"),
            row=data.get("row", 0),
        )


def assess_class(
    record: ClassRecord,
    baseline: ProjectBaseline,
    thresholds: SeverityThresholds = DEFAULT_THRESHOLDS,
    *,
    bug_rank: int | None = None,
) -> ClassRiskProfile:
    """Assess every available metric of ``record`` against ``baseline``.

    Bug history is carried on the profile but never changes a band.
    """
    assessments = []
    missing = []
    for metric, value in record.metrics.items():
        if value is None:
            missing.append(metric)
            continue
        if metric not in baseline:
            raise ContextError(f"baseline has no statistics for metric {metric!r}")
        assessments.append(assess_metric(metric, value, baseline, thresholds))
    return ClassRiskProfile(
        class_name=record.class_name,
        assessments=tuple(assessments),
        bug_count=record.bug_count,
        overall_band=overall_band(a.band for a in assessments),
        missing=tuple(missing),
        project_name=baseline.project_name,
        bug_rank=bug_rank,
        row=record.row,
    )


def bug_ranks(dataset: ProjectDataset) -> list[int | None]:
    """Competition rank of each record by bug count (1 = most bugs)."""
    counts = sorted((r.bug_count for r in dataset.records if r.bug_count is not None), reverse=True)
    first_pos = {}
    for pos, count in enumerate(counts, start=1):
        first_pos.setdefault(count, pos)
    return [None if r.bug_count is None else first_pos[r.bug_count] for r in dataset.records]


def assess_dataset(
    dataset: ProjectDataset,
    baseline: ProjectBaseline,
    thresholds: SeverityThresholds = DEFAULT_THRESHOLDS,
) -> list[ClassRiskProfile]:
    return [
        assess_class(record, baseline, thresholds, bug_rank=rank)
        for record, rank in zip(dataset.records, bug_ranks(dataset))
    ]
