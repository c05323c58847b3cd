"""Project-aware risk explanations for class-level fault-proneness metrics."""

__version__ = "0.1.0"

from .baseline import MetricStats, ProjectBaseline, SigmaDistance, compute_baseline, sigma_distance
from .context import (
    ClassRiskProfile,
    ContextualAssessment,
    SeverityBand,
    SeverityThresholds,
    assess_class,
    assess_dataset,
    classify_severity,
)
from .dataset import (
    ClassRecord,
    ColumnMapping,
    DatasetSummary,
    MetricKind,
    ProjectDataset,
    dataset_summary,
    load_dataset,
    metric_kind,
)
from .prompt import PromptBundle, PromptConfig, compose_prompt

__all__ = [
    "ClassRecord",
    "ClassRiskProfile",
    "ColumnMapping",
    "ContextualAssessment",
    "DatasetSummary",
    "MetricKind",
    "MetricStats",
    "ProjectBaseline",
    "ProjectDataset",
    "PromptBundle",
    "PromptConfig",
    "SeverityBand",
    "SeverityThresholds",
    "SigmaDistance",
    "assess_class",
    "assess_dataset",
    "classify_severity",
    "compose_prompt",
    "compute_baseline",
    "dataset_summary",
    "load_dataset",
    "metric_kind",
    "sigma_distance",
]
