import json

import jsonschema
import pytest

from riskexplain.backend import BackendConfig
from riskexplain.baseline import compute_baseline
from riskexplain.context import assess_dataset
from riskexplain.dataset import ClassRecord, load_dataset
from riskexplain.pipeline import build_class_reports
from riskexplain.prompt import PromptConfig
from riskexplain.report import (
    ClassReport,
    ReportMode,
    render_class_report,
    render_project_report,
    report_schema,
    sort_reports,
)


@pytest.fixture
def run(promise_csv):
    ds = load_dataset(promise_csv)
    base = compute_baseline(ds)
    pairs = list(zip(ds.records, assess_dataset(ds, base)))
    return ds, base, pairs


@pytest.mark.parametrize("mode", list(ReportMode))
def test_json_matches_schema(run, mode):
    ds, base, pairs = run
    reports = build_class_reports(pairs, base, mode)
    doc = json.loads(render_project_report(ds, base, reports, mode, "json"))
    jsonschema.validate(doc, report_schema())
    assert doc["summary"]["class_count"] == len(ds)
    assert len(doc["classes"]) == len(ds)


def test_explained_report_has_coverage(run):
    ds, base, pairs = run
    reports = build_class_reports(pairs, base, "explained")
    doc = json.loads(render_project_report(ds, base, reports, "explained", "json"))
    assert doc["coverage_summary"] == {"complete": len(ds), "total": len(ds)}
    md = render_project_report(ds, base, reports, "explained")
    assert f"Taxonomy coverage: {len(ds)}/{len(ds)} explanations complete." in md
    assert "**Actionable Suggestions**" in md


def test_metrics_only_has_no_generated_content(run):
    ds, base, pairs = run
    reports = build_class_reports(pairs, base, "metrics_only")
    md = render_project_report(ds, base, reports, "metrics_only")
    doc = json.loads(render_project_report(ds, base, reports, "metrics_only", "json"))
    assert "Actionable" not in md and "Taxonomy" not in md
    assert all(c["explanation"] is None and c["coverage"] is None for c in doc["classes"])
    assert all("phrase" not in m for c in doc["classes"] for m in c["metrics"])
    with pytest.raises(ValueError):
        bad = build_class_reports(pairs[:1], base, "explained")[0]
        render_class_report(bad, "metrics_only")


def test_json_round_trips_metric_values(run):
    ds, base, pairs = run
    reports = build_class_reports(pairs, base, "explained")
    doc = json.loads(render_project_report(ds, base, reports, "explained", "json"))
    by_row = {c["row"]: c for c in doc["classes"]}
    for rec, profile in pairs:
        c = by_row[rec.row]
        for m in c["metrics"]:
            assert m["value"] == rec.metrics[m["metric"]]
            assert m["z"] == profile.assessment(m["metric"]).distance.z


def test_ordering_most_severe_first(run):
    _, base, pairs = run
    ordered = sort_reports(ClassReport(p) for _, p in pairs)
    keys = [(r.profile.overall_band.rank, r.profile.max_abs_z) for r in ordered]
    assert keys == sorted(keys, key=lambda k: (-k[0], -k[1]))


def test_class_markdown(exchange, camel_baseline):
    from riskexplain.context import assess_class

    profile = assess_class(exchange, camel_baseline, bug_rank=3)
    (report,) = build_class_reports([(exchange, profile)], camel_baseline, "explained", PromptConfig())
    md = render_class_report(report, "explained")
    assert md.startswith("# Exchange.java (Apache Camel 1.6)")
    assert "| CBO | 448 | 11.10 | 22.52 | +19.4 | extreme |" in md
    assert "documented bugs: 1, rank 3 in the project" in md
    assert "(complete)" in md


def test_missing_metric_shown_as_not_available(camel_baseline):
    from riskexplain.context import assess_class

    rec = ClassRecord("p.A", {"cbo": 1, "rfc": None, "lcom": 2, "wmc": 3}, 0)
    report = ClassReport(assess_class(rec, camel_baseline))
    assert "| RFC | not available |" in render_class_report(report, "metrics_only")


def test_backend_failure_recorded_per_class(exchange, camel_baseline):
    from riskexplain.context import assess_class

    cfg = BackendConfig(backend="remote", endpoint_url="http://127.0.0.1:9/", model_name="m", api_key="k", max_retries=0, request_timeout=1)
    (report,) = build_class_reports([(exchange, assess_class(exchange, camel_baseline))], camel_baseline, "explained", backend_config=cfg)
    assert report.error and report.explanation is None
    assert "Explanation unavailable" in render_class_report(report, "explained")


def test_unknown_format(run):
    ds, base, pairs = run
    with pytest.raises(ValueError):
        render_project_report(ds, base, [], "metrics_only", "html")
