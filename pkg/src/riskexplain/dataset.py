"""Class-level metric datasets: metric kinds, CSV loading and summaries.

The default column mapping targets the PROMISE defect-dataset layout
(``name, version, name, wmc, ..., cbo, rfc, lcom, ..., bug``).  PROMISE
files repeat the ``name`` header: the first occurrence holds the project
name and the last one the fully qualified class name.
"""

from __future__ import annotations

import csv
import math
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from pathlib import Path

CORE_METRICS = ("cbo", "rfc", "lcom", "wmc")


@dataclass(frozen=True)
class MetricKind:
    id: str
    acronym: str
    display_name: str
    definition: str


_CORE_KINDS = {
    "cbo": MetricKind(
        "cbo",
        "CBO",
        "Coupling Between Objects",
        "CBO (Coupling Between Objects) measures the number of other classes "
        "this class depends on; higher values mean more ripple risk when any "
        "of those classes change.",
    ),
    "rfc": MetricKind(
        "rfc",
        "RFC",
        "Response For a Class",
        "RFC (Response For a Class) is the number of methods in the class plus "
        "the distinct methods they call; higher values mean a larger "
        "behavioral surface to understand and test.",
    ),
    "lcom": MetricKind(
        "lcom",
        "LCOM",
        "Lack of Cohesion of Methods",
        "LCOM (Lack of Cohesion of Methods) measures the degree to which the "
        "methods of the class work on separate state; higher values suggest "
        "the class mixes unrelated responsibilities.",
    ),
    "wmc": MetricKind(
        "wmc",
        "WMC",
        "Weighted Methods per Class",
        "WMC (Weighted Methods per Class) is the sum of the complexities of "
        "the methods in the class; higher values mean more code paths to "
        "read, test and maintain.",
    ),
}


def metric_kind(metric_id: str) -> MetricKind:
    """Look up a metric kind, synthesizing one for non-core dataset columns."""
    key = metric_id.lower()
    if key in _CORE_KINDS:
        return _CORE_KINDS[key]
    acronym = key.upper()
    return MetricKind(
        key,
        acronym,
        acronym,
        f"{acronym} measures the '{key}' value that the metrics tool recorded "
        "for this class; higher values mean more of that property.",
    )


class DatasetError(Exception):
    """Base class for dataset loading problems."""


class DatasetNotFoundError(DatasetError):
    pass


class MissingColumnError(DatasetError):
    def __init__(self, column: str, path: Path | str | None = None):
        self.column = column
        where = f" in {path}" if path is not None else ""
        super().__init__(f"header row is missing mapped column {column!r}{where}")


class EmptyDatasetError(DatasetError):
    pass


@dataclass(frozen=True)
class ColumnMapping:
    """Maps CSV headers onto metric ids, the class name and the bug count.

    ``metrics`` is ordered; that order is the default metric order used
    downstream.
    """

    metrics: Mapping[str, str] = field(
        default_factory=lambda: {m: m for m in CORE_METRICS}
    )
    name_column: str = "name"
    bug_column: str = "bug"
    version_column: str | None = "version"

    def __post_init__(self):
        object.__setattr__(self, "metrics", dict(self.metrics))
        missing = [m for m in CORE_METRICS if m not in self.metrics]
        if missing:
            raise ValueError(f"column mapping lacks core metrics: {missing}")

    @property
    def metric_ids(self) -> tuple[str, ...]:
        return tuple(self.metrics)


PROMISE_MAPPING = ColumnMapping()


@dataclass(frozen=True)
class ClassRecord:
    """One class row.  A metric value of ``None`` marks a missing cell."""

    class_name: str
    metrics: Mapping[str, float | None]
    bug_count: int | None
    row: int = field(default=0, compare=False)

    def __post_init__(self):
        if not self.class_name:
            raise ValueError("class_name must be non-empty")
        object.__setattr__(self, "metrics", dict(self.metrics))
        for metric, value in self.metrics.items():
            if value is not None and (not math.isfinite(value) or value < 0):
                raise ValueError(f"{metric}={value!r} is not a finite non-negative value")
        if self.bug_count is not None and self.bug_count < 0:
            raise ValueError("bug_count must be non-negative")

    def available(self) -> dict[str, float]:
        return {k: v for k, v in self.metrics.items() if v is not None}

    @property
    def simple_name(self) -> str:
        """Last dotted segment without a ``.java`` suffix."""
        name = self.class_name
        if name.endswith(".java"):
            name = name[: -len(".java")]
        return name.rsplit(".", 1)[-1]

    @property
    def file_name(self) -> str:
        return f"{self.simple_name}.java"


@dataclass(frozen=True)
class LoadIssue:
    row: int
    column: str
    raw: str


@dataclass(frozen=True)
class ProjectDataset:
    project_name: str
    version: str
    records: tuple[ClassRecord, ...]
    column_mapping: ColumnMapping = PROMISE_MAPPING
    issues: tuple[LoadIssue, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "records", tuple(self.records))
        object.__setattr__(self, "issues", tuple(self.issues))

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    @property
    def label(self) -> str:
        """Human label, e.g. ``Apache Ant 1.7``."""
        if self.version and not self.project_name.endswith(self.version):
            return f"{self.project_name} {self.version}"
        return self.project_name

    @property
    def metric_ids(self) -> tuple[str, ...]:
        return self.column_mapping.metric_ids


@dataclass(frozen=True)
class DatasetSummary:
    class_count: int
    buggy_count: int

    @property
    def buggy_rate(self) -> float:
        return self.buggy_count / self.class_count if self.class_count else 0.0

    def to_dict(self) -> dict:
        return {
            "class_count": self.class_count,
            "buggy_count": self.buggy_count,
            "buggy_rate": self.buggy_rate,
        }


def dataset_summary(dataset: ProjectDataset) -> DatasetSummary:
    buggy = sum(1 for r in dataset.records if r.bug_count is not None and r.bug_count >= 1)
    return DatasetSummary(len(dataset.records), buggy)


def _parse_metric(raw: str) -> float | None:
    try:
        value = float(raw)
    except ValueError:
        return None
    if not math.isfinite(value) or value < 0:
        return None
    return value


def _parse_bugs(raw: str) -> int | None:
    try:
        value = float(raw)
    except ValueError:
        return None
    if not value.is_integer() or value < 0:
        return None
    return int(value)


def _column_index(header: list[str], column: str, *, last: bool = False) -> int | None:
    hits = [i for i, h in enumerate(header) if h.strip() == column]
    if not hits:
        return None
    return hits[-1] if last else hits[0]


def load_dataset(
    path: str | Path,
    mapping: ColumnMapping = PROMISE_MAPPING,
    project_name: str | None = None,
    version: str | None = None,
) -> ProjectDataset:
    """Load a class-level metric CSV.

    Unparseable, negative or non-finite metric cells become ``None`` and are
    listed in ``ProjectDataset.issues``.  Duplicate class names are kept as
    separate records.  ``project_name`` defaults to the file stem and
    ``version`` to the first value of the mapped version column.

    Raises:
        DatasetNotFoundError: ``path`` does not exist.
        MissingColumnError: a mapped column is absent from the header.
        EmptyDatasetError: the file has no header or no data rows.
    """
    path = Path(path)
    if not path.is_file():
        raise DatasetNotFoundError(f"file not found: {path}")

    with path.open(newline="", encoding="utf-8-sig") as fh:
        rows = list(csv.reader(fh))
    rows = [r for r in rows if any(cell.strip() for cell in r)]
    if not rows:
        raise EmptyDatasetError(f"{path} is empty")
    header, body = rows[0], rows[1:]

    # pandas-style exports rename the repeated header to ``name.1``
    name_idx = _column_index(header, f"{mapping.name_column}.1")
    if name_idx is None:
        name_idx = _column_index(header, mapping.name_column, last=True)
    if name_idx is None:
        raise MissingColumnError(mapping.name_column, path)
    bug_idx = _column_index(header, mapping.bug_column)
    if bug_idx is None:
        raise MissingColumnError(mapping.bug_column, path)
    metric_idx = {}
    for metric, column in mapping.metrics.items():
        idx = _column_index(header, column)
        if idx is None:
            raise MissingColumnError(column, path)
        metric_idx[metric] = idx
    version_idx = (
        _column_index(header, mapping.version_column) if mapping.version_column else None
    )
    if version_idx == name_idx:
        version_idx = None
    if not body:
        raise EmptyDatasetError(f"{path} has a header but no data rows")

    records = []
    issues = []
    for line_no, cells in enumerate(body, start=2):
        cells = cells + [""] * (len(header) - len(cells))
        metrics = {}
        for metric, idx in metric_idx.items():
            raw = cells[idx].strip()
            value = _parse_metric(raw)
            if value is None:
                issues.append(LoadIssue(line_no, header[idx], raw))
            metrics[metric] = value
        bugs = _parse_bugs(cells[bug_idx].strip())
        if bugs is None:
            issues.append(LoadIssue(line_no, header[bug_idx], cells[bug_idx]))
        class_name = cells[name_idx].strip()
        if not class_name:
            class_name = f"<row {line_no}>"
            issues.append(LoadIssue(line_no, header[name_idx], ""))
        records.append(ClassRecord(class_name, metrics, bugs, row=line_no))

    if version is None:
        version = body[0][version_idx].strip() if version_idx is not None else ""
    return ProjectDataset(
        project_name=project_name or path.stem,
        version=version,
        records=tuple(records),
        column_mapping=mapping,
        issues=tuple(issues),
    )


def canonical_mapping(metric_ids: Iterable[str]) -> ColumnMapping:
    return ColumnMapping(metrics={m: m for m in metric_ids}, version_column=None)


def write_dataset(dataset: ProjectDataset, path: str | Path) -> None:
    """Write the canonical CSV form: ``name, bug, <metric ids>``.

    Missing cells are written empty, so they reload as missing; reloading
    with :func:`canonical_mapping` reproduces every record.
    """
    metric_ids = dataset.metric_ids
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["name", "bug", *metric_ids])
        for rec in dataset.records:
            writer.writerow(
                [
                    rec.class_name,
                    "" if rec.bug_count is None else rec.bug_count,
                    *("" if rec.metrics.get(m) is None else repr(rec.metrics[m]) for m in metric_ids),
                ]
            )
