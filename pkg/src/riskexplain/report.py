"""Markdown and JSON reports in two modes.

``metrics_only`` shows raw values, baselines, z and bands and nothing a
backend wrote; ``explained`` adds the explanation and its taxonomy coverage.
JSON keeps full numeric precision; Markdown rounds for reading.
"""

from __future__ import annotations

import enum
import json
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from importlib import resources

from .backend import Explanation
from .baseline import ProjectBaseline, format_sigma, format_value
from .context import ClassRiskProfile
from .dataset import ProjectDataset, dataset_summary, metric_kind
from .taxonomy import TaxonomyCoverage


class ReportMode(str, enum.Enum):
    METRICS_ONLY = "metrics_only"
    EXPLAINED = "explained"


FORMATS = ("markdown", "json")


@dataclass(frozen=True)
class ClassReport:
    profile: ClassRiskProfile
    explanation: Explanation | None = None
    coverage: TaxonomyCoverage | None = None
    prompt_fingerprint: str | None = None
    error: str | None = None  # backend failure in explained mode

    def check(self, mode: ReportMode) -> None:
        if mode is ReportMode.METRICS_ONLY and (self.explanation or self.coverage):
            raise ValueError("metrics_only reports must not carry an explanation")
        if mode is ReportMode.EXPLAINED and self.explanation is None and self.error is None:
            raise ValueError("explained reports need an explanation or an error")


def report_schema() -> dict:
    text = resources.files("riskexplain").joinpath("schemas/report.schema.json").read_text("utf-8")
    return json.loads(text)


def severity_key(profile: ClassRiskProfile) -> tuple:
    """Most severe first: band, then largest |z|, then class name, then row."""
    return (-profile.overall_band.rank, -profile.max_abs_z, profile.class_name, profile.row)


def sort_reports(reports: Iterable[ClassReport]) -> list[ClassReport]:
    return sorted(reports, key=lambda r: severity_key(r.profile))


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False)


def class_report_dict(report: ClassReport, mode: ReportMode) -> dict:
    report.check(mode)
    data = {"mode": mode.value, **report.profile.to_dict()}
    if mode is ReportMode.METRICS_ONLY:
        for row in data["metrics"]:
            row.pop("phrase")
        data.update(explanation=None, coverage=None, prompt_fingerprint=None, error=None)
        return data
    exp = report.explanation
    data["explanation"] = (
        None
        if exp is None
        else {"backend_id": exp.backend_id, "prompt_fingerprint": exp.prompt_fingerprint, "text": exp.text}
    )
    data["coverage"] = report.coverage.to_dict() if report.coverage else None
    data["prompt_fingerprint"] = report.prompt_fingerprint
    data["error"] = report.error
    return data


def _metrics_table(profile: ClassRiskProfile) -> list[str]:
    lines = ["| Metric | Value | μ | σ | z | Band |", "|---|---:|---:|---:|---:|---|"]
    for a in profile.assessments:
        lines.append(
            f"| {a.acronym} | {format_value(a.value)} | {a.mean:.2f} | {a.std_dev:.2f} "
            f"| {format_sigma(a.distance).rstrip('σ')} | {a.band.value} |"
        )
    for metric in profile.missing:
        lines.append(f"| {metric_kind(metric).acronym} | not available | - | - | - | - |")
    return lines


def _class_markdown(report: ClassReport, mode: ReportMode, level: int) -> list[str]:
    p = report.profile
    title = f"{p.simple_name}.java ({p.project_name})" if p.project_name else f"{p.simple_name}.java"
    facts = [f"Class `{p.class_name}`"]
    if p.bug_count is not None:
        rank = f", rank {p.bug_rank} in the project" if p.bug_rank else ""
        facts.append(f"documented bugs: {p.bug_count}{rank}")
    facts.append(f"overall band: {p.overall_band.value}")
    lines = [f"{'#' * level} {title}", "", "; ".join(facts) + ".", "", *_metrics_table(p)]
    if mode is ReportMode.EXPLAINED:
        lines.append("")
        if report.explanation is None:
            lines.append(f"Explanation unavailable: {report.error}")
        else:
            exp = report.explanation
            lines += [
                f"_Explanation source: {exp.backend_id}, prompt {exp.prompt_fingerprint[:12]}_",
                "",
                exp.text.rstrip("\n"),
            ]
            if report.coverage is not None:
                c = report.coverage
                flags = ", ".join(
                    f"{name} {'yes' if ok else 'no'}"
                    for name, ok in (
                        ("descriptive", c.has_descriptive),
                        ("contextual", c.has_contextual),
                        ("actionable", c.has_actionable),
                    )
                )
                state = "complete" if c.complete else "incomplete"
                lines += ["", f"_Taxonomy coverage: {flags} ({state})._"]
    return lines


def render_class_report(report: ClassReport, mode: ReportMode | str, format: str = "markdown") -> str:
    mode = ReportMode(mode)
    if format == "json":
        return _dumps(class_report_dict(report, mode)) + "\n"
    if format != "markdown":
        raise ValueError(f"unknown format {format!r}")
    report.check(mode)
    return "\n".join(_class_markdown(report, mode, level=1)) + "\n"


def coverage_counts(reports: Sequence[ClassReport]) -> tuple[int, int]:
    """(complete, attempted) over reports that went through a backend."""
    attempted = [r for r in reports if r.explanation is not None or r.error is not None]
    complete = sum(1 for r in attempted if r.coverage is not None and r.coverage.complete)
    return complete, len(attempted)


def render_project_report(
    dataset: ProjectDataset,
    baseline: ProjectBaseline,
    reports: Sequence[ClassReport],
    mode: ReportMode | str,
    format: str = "markdown",
) -> str:
    mode = ReportMode(mode)
    summary = dataset_summary(dataset)
    ordered = sort_reports(reports)
    if format == "json":
        complete, attempted = coverage_counts(ordered)
        doc = {
            "project": baseline.project_name,
            "version": dataset.version,
            "mode": mode.value,
            "summary": summary.to_dict(),
            "baseline": baseline.to_rows(),
            "classes": [class_report_dict(r, mode) for r in ordered],
            "coverage_summary": (
                {"complete": complete, "total": attempted} if mode is ReportMode.EXPLAINED else None
            ),
        }
        return _dumps(doc) + "\n"
    if format != "markdown":
        raise ValueError(f"unknown format {format!r}")

    lines = [
        f"# {baseline.project_name} risk report",
        "",
        f"Mode: {'metrics only' if mode is ReportMode.METRICS_ONLY else 'explained'}.",
        "",
        f"{summary.class_count} classes, {summary.buggy_count} "
        f"({summary.buggy_rate * 100:.1f}%) with documented bugs "
        f"(buggy rate {summary.buggy_rate:.3f}).",
        "",
        "## Project baseline",
        "",
        "| Metric | μ, σ | n | min | max |",
        "|---|---|---:|---:|---:|",
    ]
    for metric, s in baseline.stats.items():
        n = "-" if s.count is None else str(s.count)
        lo = "-" if s.min is None else format_value(s.min)
        hi = "-" if s.max is None else format_value(s.max)
        lines.append(f"| {metric_kind(metric).acronym} | {s.mean:.2f}, {s.std_dev:.2f} | {n} | {lo} | {hi} |")
    if mode is ReportMode.EXPLAINED and ordered:
        complete, attempted = coverage_counts(ordered)
        lines += ["", f"Taxonomy coverage: {complete}/{attempted} explanations complete."]
    if ordered:
        lines += ["", "## Classes"]
        for r in ordered:
            lines += [""] + _class_markdown(r, mode, level=3)
    return "\n".join(lines) + "\n"
