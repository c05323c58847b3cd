"""Shared fixtures: synthetic PROMISE-style CSVs and the two published baselines."""

from __future__ import annotations

import csv
import os
from pathlib import Path

import numpy as np
import pytest

from riskexplain.baseline import ProjectBaseline
from riskexplain.dataset import ClassRecord

PROMISE_HEADER = [
    "name", "version", "name", "wmc", "dit", "noc", "cbo", "rfc", "lcom", "ca", "ce", "npm",
    "lcom3", "loc", "dam", "moa", "mfa", "cam", "ic", "cbm", "amc", "max_cc", "avg_cc", "bug",
]

CAMEL_PAIRS = {"cbo": (11.10, 22.52), "rfc": (21.20, 25.00), "lcom": (79.33, 523.75), "wmc": (8.57, 11.20)}
ANT_PAIRS = {"cbo": (11.04, 26.34), "rfc": (34.36, 36.02), "lcom": (89.14, 349.93), "wmc": (11.07, 11.97)}

DATA_DIR = Path(os.environ.get("RISKEXPLAIN_DATA_DIR", Path(__file__).parent / "data"))


def write_promise_csv(path: Path, rows: list[dict], project: str = "demo", version: str = "1.0") -> Path:
    """Write rows (class, cbo, rfc, lcom, wmc, bug) in the PROMISE column layout."""
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(PROMISE_HEADER)
        for r in rows:
            cells = dict.fromkeys(PROMISE_HEADER[3:], "0")
            cells.update({k: r[k] for k in ("wmc", "cbo", "rfc", "lcom", "bug") if k in r})
            w.writerow([project, version, r["class"], *[cells[h] for h in PROMISE_HEADER[3:]]])
    return path


def synthetic_rows(n: int, seed: int = 0, buggy_rate: float = 0.2) -> list[dict]:
    """Heavy-tailed CK-like values, roughly the shape of real projects."""
    rng = np.random.default_rng(seed)
    rows = []
    for i in range(n):
        wmc = int(rng.geometric(0.1))
        rows.append(
            {
                "class": f"org.example.pkg{i % 7}.Class{i}",
                "wmc": wmc,
                "cbo": int(rng.geometric(0.09)) - 1,
                "rfc": int(wmc * 2 + rng.integers(0, 30)),
                "lcom": int(rng.pareto(1.3) * 10),
                "bug": int(rng.random() < buggy_rate) * int(rng.integers(1, 4)),
            }
        )
    return rows


@pytest.fixture
def camel_baseline() -> ProjectBaseline:
    return ProjectBaseline.from_pairs("Apache Camel 1.6", CAMEL_PAIRS)


@pytest.fixture
def ant_baseline() -> ProjectBaseline:
    return ProjectBaseline.from_pairs("Apache Ant 1.7", ANT_PAIRS)


@pytest.fixture
def exchange() -> ClassRecord:
    return ClassRecord("org.apache.camel.Exchange", {"cbo": 448, "rfc": 26, "lcom": 325, "wmc": 26}, 1)


@pytest.fixture
def dispatch_task() -> ClassRecord:
    return ClassRecord("org.apache.tools.ant.taskdefs.DispatchTask", {"cbo": 3, "rfc": 5, "lcom": 4, "wmc": 4}, 0)


@pytest.fixture
def promise_csv(tmp_path) -> Path:
    return write_promise_csv(tmp_path / "demo-1.0.csv", synthetic_rows(200, seed=3), project="demo")


# -- acceptance summary ------------------------------------------------------

_criteria: dict[int, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by the test")


def pytest_runtest_logreport(report):
    number = getattr(report, "criterion", None)
    if number is None:
        return
    entry = _criteria.setdefault(number[0], {"title": number[1], "passed": True, "seen": False})
    if report.when == "call" or report.outcome != "passed":
        entry["seen"] = True
    if report.outcome != "passed":
        entry["passed"] = False


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    marker = item.get_closest_marker("criterion")
    if marker is not None:
        outcome.get_result().criterion = tuple(marker.args)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        entry = _criteria[number]
        status = "PASS" if entry["passed"] and entry["seen"] else "FAIL"
        terminalreporter.write_line(f"AC{number:<2} {status}  {entry['title']}")
