"""Command-line entry point: ``riskexplain {stats,prompt,explain,batch,validate}``.

Exit codes: 0 success, 2 input or configuration error, 3 class selector
matched nothing, 4 backend failure.  Machine output goes to stdout and
diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import fnmatch
import json
import logging
import re
import sys
from pathlib import Path

from . import __version__
from .backend import BackendConfigError, BackendError
from .baseline import BaselineError, compute_baseline, format_value
from .cache import ResponseCache
from .config import ConfigError, RunConfig, resolve
from .context import ClassRiskProfile, assess_dataset
from .dataset import DatasetError, ProjectDataset, dataset_summary, load_dataset, metric_kind
from .pipeline import build_class_reports
from .prompt import PromptError, compose_prompt
from .report import (
    FORMATS,
    ReportMode,
    class_report_dict,
    coverage_counts,
    render_class_report,
    render_project_report,
    severity_key,
)
from .taxonomy import validate

log = logging.getLogger("riskexplain")

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_EMPTY_SELECTION = 3
EXIT_BACKEND = 4


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_INPUT):
        super().__init__(message)
        self.code = code


def _emit_json(obj) -> None:
    sys.stdout.write(json.dumps(obj, indent=2, ensure_ascii=False) + "\n")


def _load(cfg: RunConfig, path: str) -> ProjectDataset:
    try:
        return load_dataset(
            path,
            cfg.column_mapping(),
            project_name=cfg.get("project_name"),
            version=cfg.get("version"),
        )
    except DatasetError as exc:
        raise CliError(str(exc)) from None


def _baseline(cfg: RunConfig, dataset: ProjectDataset):
    try:
        return compute_baseline(dataset)
    except BaselineError as exc:
        raise CliError(str(exc)) from None


def select_classes(dataset: ProjectDataset, selector: str) -> list[int]:
    """Indices of records matching ``selector``.

    Exact matches on the qualified or simple name win; otherwise the
    selector is tried as a glob, then as a substring.
    """
    records = dataset.records
    simple = selector[:-5] if selector.endswith(".java") else selector
    exact = [i for i, r in enumerate(records) if selector == r.class_name or simple == r.simple_name]
    if exact:
        return exact
    if any(ch in selector for ch in "*?["):
        return [
            i
            for i, r in enumerate(records)
            if fnmatch.fnmatchcase(r.class_name, selector) or fnmatch.fnmatchcase(r.simple_name, selector)
        ]
    return [i for i, r in enumerate(records) if selector in r.class_name]


def _slug(text: str) -> str:
    return re.sub(r"[^A-Za-z0-9._-]+", "-", text).strip("-") or "project"


def cmd_stats(args, cfg: RunConfig) -> int:
    dataset = _load(cfg, args.dataset)
    baseline = _baseline(cfg, dataset)
    summary = dataset_summary(dataset)
    if cfg.get("format") == "json" or args.json:
        _emit_json(
            {
                "project": baseline.project_name,
                "summary": summary.to_dict(),
                "baseline": baseline.to_rows(),
                "load_issues": len(dataset.issues),
            }
        )
        return EXIT_OK
    print(
        f"{baseline.project_name}: {summary.class_count} classes, {summary.buggy_count} with "
        f"documented bugs (buggy rate {summary.buggy_rate:.3f})"
    )
    print(f"{'Metric':<8}{'μ, σ':<22}{'n':>6}{'min':>10}{'max':>10}")
    for metric, s in baseline.stats.items():
        pair = f"{s.mean:.2f}, {s.std_dev:.2f}"
        print(
            f"{metric_kind(metric).acronym:<8}{pair:<22}{s.count:>6}"
            f"{format_value(s.min):>10}{format_value(s.max):>10}"
        )
    if dataset.issues:
        print(f"{len(dataset.issues)} unparseable cells were treated as missing", file=sys.stderr)
    return EXIT_OK


def _selection(dataset: ProjectDataset, selector: str) -> list[int]:
    picked = select_classes(dataset, selector)
    if not picked:
        raise CliError(f"no class matches {selector!r}", EXIT_EMPTY_SELECTION)
    return picked


def cmd_prompt(args, cfg: RunConfig) -> int:
    dataset = _load(cfg, args.dataset)
    baseline = _baseline(cfg, dataset)
    pconf = cfg.prompt_config(dataset.metric_ids)
    bundles = []
    for i in _selection(dataset, args.class_selector):
        try:
            bundles.append(compose_prompt(dataset.records[i], baseline, pconf))
        except PromptError as exc:
            raise CliError(str(exc)) from None
    if args.json:
        _emit_json(bundles[0].to_dict() if len(bundles) == 1 else [b.to_dict() for b in bundles])
    else:
        print("\n\n".join(b.rendered for b in bundles))
    return EXIT_OK


def _cache(cfg: RunConfig, backend) -> ResponseCache | None:
    if backend.backend != "remote":
        return None
    directory = cfg.cache_dir()
    return ResponseCache(directory) if directory is not None else None


def _backend(cfg: RunConfig):
    backend = cfg.backend_config()
    try:
        backend.validate()
    except BackendConfigError as exc:
        raise CliError(str(exc)) from None
    return backend


def cmd_explain(args, cfg: RunConfig) -> int:
    dataset = _load(cfg, args.dataset)
    baseline = _baseline(cfg, dataset)
    thresholds = cfg.thresholds()
    picked = _selection(dataset, args.class_selector)
    mode = ReportMode(cfg.get("mode", "explained"))
    backend = _backend(cfg)
    pconf = cfg.prompt_config(dataset.metric_ids)
    profiles = assess_dataset(dataset, baseline, thresholds)
    pairs = [(dataset.records[i], profiles[i]) for i in picked]

    bundles = []
    if args.show_prompt:
        for record, _ in pairs:
            try:
                bundles.append(compose_prompt(record, baseline, pconf))
            except PromptError as exc:
                raise CliError(str(exc)) from None

    reports = build_class_reports(
        pairs,
        baseline,
        mode,
        pconf,
        backend,
        cache=_cache(cfg, backend),
        max_regenerations=cfg.get("max_regenerations", 1),
    )
    failed = [r for r in reports if r.error]
    for r in failed:
        print(f"{r.profile.class_name}: {r.error}", file=sys.stderr)

    as_json = args.json or cfg.get("format") == "json"
    if as_json:
        docs = []
        for i, r in enumerate(reports):
            doc = class_report_dict(r, mode)
            if bundles:
                doc["prompt"] = bundles[i].to_dict()
            docs.append(doc)
        _emit_json(docs[0] if len(docs) == 1 else docs)
    else:
        chunks = []
        for i, r in enumerate(reports):
            if bundles:
                chunks.append("```text\n" + bundles[i].rendered + "\n```\n")
            chunks.append(render_class_report(r, mode, "markdown"))
        sys.stdout.write("\n".join(chunks))
    if cfg.get("output_dir"):
        out_dir = Path(cfg.get("output_dir"))
        out_dir.mkdir(parents=True, exist_ok=True)
        for r in reports:
            stem = f"{_slug(r.profile.simple_name)}-{r.profile.row}"
            (out_dir / f"{stem}-report.md").write_text(render_class_report(r, mode, "markdown"), "utf-8")
            (out_dir / f"{stem}-report.json").write_text(render_class_report(r, mode, "json"), "utf-8")
    if mode is ReportMode.EXPLAINED and len(failed) == len(reports):
        return EXIT_BACKEND
    return EXIT_OK


def cmd_batch(args, cfg: RunConfig) -> int:
    dataset = _load(cfg, args.dataset)
    baseline = _baseline(cfg, dataset)
    mode = ReportMode(cfg.get("mode", "explained"))
    profiles = assess_dataset(dataset, baseline, cfg.thresholds())
    pairs = list(zip(dataset.records, profiles))
    if args.top_k is not None:
        if args.top_k < 0:
            raise CliError("--top-k must be >= 0")
        pairs = sorted(pairs, key=lambda p: severity_key(p[1]))[: args.top_k]

    backend = None
    if mode is ReportMode.EXPLAINED:
        backend = _backend(cfg)

    def progress(done: int, total: int) -> None:
        if done == total or done % 100 == 0:
            print(f"explained {done}/{total} classes", file=sys.stderr)

    reports = build_class_reports(
        pairs,
        baseline,
        mode,
        cfg.prompt_config(dataset.metric_ids),
        backend or cfg.backend_config(),
        cache=_cache(cfg, backend) if backend else None,
        max_regenerations=cfg.get("max_regenerations", 1),
        progress=progress,
    )

    out_dir = Path(cfg.get("output_dir", "."))
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = _slug(dataset.project_name)
    md_path = out_dir / f"{stem}-report.md"
    json_path = out_dir / f"{stem}-report.json"
    md_path.write_text(render_project_report(dataset, baseline, reports, mode, "markdown"), "utf-8")
    json_path.write_text(render_project_report(dataset, baseline, reports, mode, "json"), "utf-8")

    failures = [r for r in reports if r.error]
    complete, attempted = coverage_counts(reports)
    summary = {
        "project": baseline.project_name,
        "mode": mode.value,
        "classes": len(reports),
        "failures": len(failures),
        "coverage": {"complete": complete, "total": attempted} if mode is ReportMode.EXPLAINED else None,
        "outputs": [str(md_path), str(json_path)],
    }
    if args.json:
        _emit_json(summary)
    else:
        print(f"wrote {md_path} and {json_path}")
        if mode is ReportMode.EXPLAINED:
            print(f"taxonomy coverage: {complete}/{attempted} complete")
    for r in failures:
        print(f"{r.profile.class_name}: {r.error}", file=sys.stderr)
    if mode is ReportMode.EXPLAINED and reports and len(failures) == len(reports):
        return EXIT_BACKEND
    return EXIT_OK


def cmd_validate(args, cfg: RunConfig) -> int:
    if args.explanation == "-":
        text = sys.stdin.read()
    else:
        try:
            text = Path(args.explanation).read_text("utf-8")
        except OSError as exc:
            raise CliError(f"cannot read explanation: {exc}") from None
    if not text.strip():
        raise CliError("explanation is empty")
    try:
        data = json.loads(Path(args.profile).read_text("utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise CliError(f"cannot read profile: {exc}") from None
    if isinstance(data, list):
        if len(data) != 1:
            raise CliError("profile file must describe exactly one class")
        data = data[0]
    try:
        profile = ClassRiskProfile.from_dict(data, cfg.thresholds())
    except (KeyError, TypeError, ValueError) as exc:
        raise CliError(f"malformed profile: {exc}") from None
    coverage = validate(text, profile)
    if args.json:
        _emit_json(coverage.to_dict())
    else:
        for name, ok in (
            ("descriptive", coverage.has_descriptive),
            ("contextual", coverage.has_contextual),
            ("actionable", coverage.has_actionable),
        ):
            print(f"{name:<12} {'yes' if ok else 'no'}")
        print(f"{'complete':<12} {'yes' if coverage.complete else 'no'}")
    return EXIT_OK


def _dataset_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("dataset", help="class-level metrics CSV")
    p.add_argument("--project-name", dest="project_name")
    p.add_argument("--version", dest="version", help="dataset version label")
    p.add_argument("--name-column", dest="name_column")
    p.add_argument("--bug-column", dest="bug_column")
    p.add_argument(
        "--metric-columns",
        dest="metric_columns",
        metavar="METRIC=COLUMN,...",
        help="map metric ids to CSV headers, e.g. cbo=CBO,rfc=RFC",
    )
    p.add_argument("--thresholds", help="severity z bounds, default -0.25,1,2,4")


def _prompt_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--audience")
    p.add_argument("--project-label", dest="project_label")
    p.add_argument(
        "--no-baseline",
        dest="include_baseline",
        action="store_const",
        const=False,
        help="omit project mean/std from the prompt",
    )
    p.add_argument("--metric-order", dest="metric_order", help="e.g. cbo,rfc,lcom,wmc")


def _backend_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--backend", choices=["offline", "remote"])
    p.add_argument("--endpoint", dest="endpoint_url")
    p.add_argument("--model", dest="model_name")
    p.add_argument("--temperature", type=float)
    p.add_argument("--max-retries", dest="max_retries", type=int)
    p.add_argument("--timeout", dest="request_timeout", type=float)
    p.add_argument("--max-parallel", dest="max_parallel", type=int)
    p.add_argument("--max-regenerations", dest="max_regenerations", type=int)
    p.add_argument("--cache-dir", dest="cache_dir")
    p.add_argument("--no-cache", dest="no_cache", action="store_const", const=True)
    p.add_argument(
        "--reproducible",
        action="store_const",
        const=True,
        help="temperature 0 with the response cache (remote) for byte-identical reruns",
    )
    p.add_argument("--mode", choices=[m.value for m in ReportMode])
    p.add_argument("--format", choices=FORMATS)
    p.add_argument("--output-dir", dest="output_dir")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="riskexplain", description=__doc__.splitlines()[0])
    parser.add_argument("--config", help="INI file with a [riskexplain] section")
    parser.add_argument("-v", "--verbose", action="store_true")
    parser.add_argument("--version-info", action="version", version=f"riskexplain {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("stats", help="project baseline table and summary")
    _dataset_options(p)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("prompt", help="print the explanation prompt for a class")
    _dataset_options(p)
    _prompt_options(p)
    p.add_argument("--class", dest="class_selector", required=True)
    p.add_argument("--json", action="store_true", help="emit the prompt components separately")
    p.set_defaults(func=cmd_prompt)

    p = sub.add_parser("explain", help="explain selected classes")
    _dataset_options(p)
    _prompt_options(p)
    _backend_options(p)
    p.add_argument("--class", dest="class_selector", required=True)
    p.add_argument("--show-prompt", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_explain)

    p = sub.add_parser("batch", help="explain every class and write the project report")
    _dataset_options(p)
    _prompt_options(p)
    _backend_options(p)
    p.add_argument("--top-k", dest="top_k", type=int, help="only the k most severe classes")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_batch)

    p = sub.add_parser("validate", help="check taxonomy coverage of an explanation")
    p.add_argument("--explanation", required=True, help="text file, or - for stdin")
    p.add_argument("--profile", required=True, help="profile / class report JSON")
    p.add_argument("--thresholds")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        cfg = resolve(vars(args), args.config)
        return args.func(args, cfg)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (ConfigError, BackendConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except BackendError as exc:
        print(f"backend error: {exc}", file=sys.stderr)
        return EXIT_BACKEND


if __name__ == "__main__":
    sys.exit(main())
