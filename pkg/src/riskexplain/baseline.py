"""Per-project metric baselines and standard-deviation distances."""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass

import numpy as np

from .dataset import ProjectDataset


class BaselineError(ValueError):
    pass


@dataclass(frozen=True)
class MetricStats:
    """Mean and population standard deviation of one metric.

    ``count``, ``min`` and ``max`` are ``None`` for baselines built from
    published (mean, std) pairs rather than from a dataset.
    """

    mean: float
    std_dev: float
    count: int | None = None
    min: float | None = None
    max: float | None = None

    def __post_init__(self):
        if self.std_dev < 0:
            raise BaselineError("std_dev must be non-negative")
        if self.count is not None and self.count < 1:
            raise BaselineError("count must be at least 1")


@dataclass(frozen=True)
class ProjectBaseline:
    project_name: str
    stats: Mapping[str, MetricStats]

    def __post_init__(self):
        object.__setattr__(self, "stats", dict(self.stats))

    def __getitem__(self, metric: str) -> MetricStats:
        return self.stats[metric]

    def __contains__(self, metric: str) -> bool:
        return metric in self.stats

    @property
    def metric_ids(self) -> tuple[str, ...]:
        return tuple(self.stats)

    @classmethod
    def from_pairs(
        cls, project_name: str, pairs: Mapping[str, tuple[float, float]]
    ) -> ProjectBaseline:
        """Build a baseline from known (mean, std_dev) pairs."""
        return cls(project_name, {m: MetricStats(mu, sd) for m, (mu, sd) in pairs.items()})

    def to_rows(self) -> list[dict]:
        return [
            {
                "project": self.project_name,
                "metric": metric,
                "mean": s.mean,
                "std_dev": s.std_dev,
                "count": s.count,
                "min": s.min,
                "max": s.max,
            }
            for metric, s in self.stats.items()
        ]

    @classmethod
    def from_rows(cls, rows: Iterable[Mapping]) -> ProjectBaseline:
        rows = list(rows)
        if not rows:
            raise BaselineError("no baseline rows")
        stats = {
            r["metric"]: MetricStats(r["mean"], r["std_dev"], r.get("count"), r.get("min"), r.get("max"))
            for r in rows
        }
        return cls(rows[0]["project"], stats)


def compute_baseline(
    dataset: ProjectDataset,
    metrics: Iterable[str] | None = None,
    project_name: str | None = None,
) -> ProjectBaseline:
    """Mean and population std (ddof=0) of each metric over non-missing values."""
    metrics = dataset.metric_ids if metrics is None else tuple(metrics)
    stats = {}
    for metric in metrics:
        values = np.array(
            [r.metrics[metric] for r in dataset.records if r.metrics.get(metric) is not None],
            dtype=float,
        )
        if values.size == 0:
            raise BaselineError(f"metric {metric!r} has no non-missing values")
        lo, hi = float(values.min()), float(values.max())
        # rounding in the sum can push the mean a ulp outside [min, max]
        mean = min(max(float(values.mean()), lo), hi)
        stats[metric] = MetricStats(
            mean=mean,
            std_dev=0.0 if lo == hi else float(values.std(ddof=0)),
            count=int(values.size),
            min=lo,
            max=hi,
        )
    return ProjectBaseline(project_name or dataset.label, stats)


@dataclass(frozen=True)
class SigmaDistance:
    z: float
    defined: bool = True


def sigma_distance(value: float, mean: float, std_dev: float) -> SigmaDistance:
    if std_dev < 0:
        raise ValueError("std_dev must be non-negative")
    if std_dev == 0:
        return SigmaDistance(0.0, defined=False)
    return SigmaDistance((value - mean) / std_dev)


def format_value(value: float) -> str:
    """Integers without a decimal point, anything else to two decimals."""
    if float(value).is_integer():
        return str(int(value))
    return f"{value:.2f}"


def format_sigma(distance: SigmaDistance) -> str:
    """Signed one-decimal form, e.g. ``+0.2σ`` or ``-0.3σ``."""
    if not distance.defined:
        return "n/a"
    return f"{_round1(distance.z):+.1f}σ"


def describe_sigma(distance: SigmaDistance) -> str:
    """Prose form, e.g. ``19.4σ above the mean``."""
    if not distance.defined:
        return "no spread in this project"
    z = _round1(distance.z)
    if z > 0:
        return f"{z:.1f}σ above the mean"
    if z < 0:
        return f"{-z:.1f}σ below the mean"
    return "0.0σ from the mean"


def _round1(z: float) -> float:
    # avoids "-0.0" for tiny negative values
    r = round(z, 1)
    return 0.0 if r == 0 else r
