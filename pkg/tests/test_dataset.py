import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from riskexplain.dataset import (
    ClassRecord,
    ColumnMapping,
    DatasetNotFoundError,
    EmptyDatasetError,
    MissingColumnError,
    ProjectDataset,
    canonical_mapping,
    dataset_summary,
    load_dataset,
    metric_kind,
    write_dataset,
)

from conftest import PROMISE_HEADER, write_promise_csv


def test_class_name_comes_from_the_last_name_column(tmp_path):
    path = write_promise_csv(tmp_path / "ant.csv", [{"class": "a.b.Foo", "cbo": 1, "rfc": 2, "lcom": 3, "wmc": 4, "bug": 2}], project="ant")
    ds = load_dataset(path)
    rec = ds.records[0]
    assert rec.class_name == "a.b.Foo"
    assert rec.simple_name == "Foo"
    assert rec.file_name == "Foo.java"
    assert rec.metrics == {"cbo": 1, "rfc": 2, "lcom": 3, "wmc": 4}
    assert rec.bug_count == 2
    assert ds.version == "1.0"
    assert ds.project_name == "ant"
    assert ds.label == "ant 1.0"


def test_pandas_style_renamed_name_column(tmp_path):
    path = tmp_path / "x.csv"
    path.write_text("name,version,name.1,wmc,cbo,rfc,lcom,bug\nproj,2,p.Q,1,2,3,4,0\n")
    assert load_dataset(path).records[0].class_name == "p.Q"


def test_missing_and_malformed_cells_become_none(tmp_path):
    path = tmp_path / "x.csv"
    path.write_text("name,wmc,cbo,rfc,lcom,bug\nA,1,,3,abc,0\nB,-1,2,inf,4,x\n")
    ds = load_dataset(path)
    a, b = ds.records
    assert a.metrics["cbo"] is None and a.metrics["lcom"] is None
    assert b.metrics["wmc"] is None and b.metrics["rfc"] is None
    assert b.bug_count is None
    assert {(i.row, i.column) for i in ds.issues} == {(2, "cbo"), (2, "lcom"), (3, "wmc"), (3, "rfc"), (3, "bug")}


def test_duplicate_class_names_are_kept(tmp_path):
    path = tmp_path / "x.csv"
    path.write_text("name,wmc,cbo,rfc,lcom,bug\nA,1,1,1,1,0\nA,2,2,2,2,1\n")
    assert len(load_dataset(path)) == 2


def test_custom_column_mapping(tmp_path):
    path = tmp_path / "x.csv"
    path.write_text("Class,WMC,CBO,RFC,LCOM,Defects\nA,1,2,3,4,5\n")
    mapping = ColumnMapping({"cbo": "CBO", "rfc": "RFC", "lcom": "LCOM", "wmc": "WMC"}, "Class", "Defects")
    rec = load_dataset(path, mapping).records[0]
    assert rec.metrics == {"cbo": 2, "rfc": 3, "lcom": 4, "wmc": 1}
    assert rec.bug_count == 5


def test_mapping_must_cover_core_metrics():
    with pytest.raises(ValueError):
        ColumnMapping({"cbo": "cbo"})


def test_load_errors(tmp_path):
    with pytest.raises(DatasetNotFoundError, match="file not found"):
        load_dataset(tmp_path / "nope.csv")
    empty = tmp_path / "empty.csv"
    empty.write_text("")
    with pytest.raises(EmptyDatasetError):
        load_dataset(empty)
    header_only = tmp_path / "h.csv"
    header_only.write_text(",".join(PROMISE_HEADER) + "\n")
    with pytest.raises(EmptyDatasetError):
        load_dataset(header_only)
    no_rfc = tmp_path / "r.csv"
    no_rfc.write_text("name,wmc,cbo,lcom,bug\nA,1,1,1,0\n")
    with pytest.raises(MissingColumnError) as exc:
        load_dataset(no_rfc)
    assert exc.value.column == "rfc"


def test_summary_counts_any_positive_bug_as_buggy():
    recs = [ClassRecord(f"C{i}", {}, b) for i, b in enumerate([0, 1, 3, 0, None])]
    s = dataset_summary(ProjectDataset("p", "", recs))
    assert (s.class_count, s.buggy_count) == (5, 2)
    assert s.buggy_rate == pytest.approx(0.4)


def test_record_rejects_negative_or_nonfinite():
    with pytest.raises(ValueError):
        ClassRecord("A", {"cbo": -1}, 0)
    with pytest.raises(ValueError):
        ClassRecord("A", {"cbo": math.nan}, 0)
    with pytest.raises(ValueError):
        ClassRecord("", {}, 0)


def test_metric_kind_for_unknown_column():
    kind = metric_kind("max_cc")
    assert kind.acronym == "MAX_CC"
    assert metric_kind("cbo").display_name == "Coupling Between Objects"


values = st.one_of(st.none(), st.integers(0, 10_000).map(float), st.floats(0, 1e6, allow_nan=False, allow_infinity=False))
records = st.lists(
    st.builds(
        lambda i, m, b: (i, m, b),
        st.integers(0, 10**6),
        st.fixed_dictionaries({k: values for k in ("cbo", "rfc", "lcom", "wmc")}),
        st.one_of(st.none(), st.integers(0, 20)),
    ),
    min_size=1,
    max_size=30,
)


@settings(max_examples=60, deadline=None)
@given(records)
def test_canonical_round_trip(tmp_path_factory, rows):
    ds = ProjectDataset("p", "", [ClassRecord(f"pkg.C{i}", m, b) for i, m, b in rows], canonical_mapping(("cbo", "rfc", "lcom", "wmc")))
    path = tmp_path_factory.mktemp("rt") / "p.csv"
    write_dataset(ds, path)
    again = load_dataset(path, canonical_mapping(ds.metric_ids), project_name="p", version="")
    assert again.records == ds.records


@settings(max_examples=30, deadline=None)
@given(records, st.randoms(use_true_random=False))
def test_summary_invariant_under_row_permutation(rows, rnd):
    recs = [ClassRecord(f"C{i}", m, b) for i, m, b in rows]
    shuffled = list(recs)
    rnd.shuffle(shuffled)
    assert dataset_summary(ProjectDataset("p", "", recs)) == dataset_summary(ProjectDataset("p", "", shuffled))
