import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from riskexplain.context import assess_class
from riskexplain.offline import offline_text
from riskexplain.taxonomy import CueSet, DEFAULT_CUES, sentences, validate

FULL = """CBO (Coupling Between Objects) measures how many other classes a class uses.
RFC is the number of methods the class can trigger. LCOM is the degree to which methods share no fields.
WMC is the sum of method complexities.

With CBO = 448 the class sits 19.4σ above the project mean.
Avoid adding new imports and extract a facade before the next change."""


@pytest.fixture
def profile(exchange, camel_baseline):
    return assess_class(exchange, camel_baseline)


def test_complete_text(profile):
    cov = validate(FULL, profile)
    assert (cov.has_descriptive, cov.has_contextual, cov.has_actionable) == (True, True, True)
    assert cov.complete and cov.score == 3


def test_bare_fact_covers_nothing(profile):
    cov = validate("CBO is 448.", profile)
    assert (cov.has_descriptive, cov.has_contextual, cov.has_actionable) == (False, False, False)
    assert all(not spans for spans in cov.evidence.values())


def test_descriptive_needs_every_metric(profile):
    text = "CBO measures coupling. RFC is the number of reachable methods. WMC is the sum of complexities."
    assert not validate(text, profile).has_descriptive
    assert validate(text + " LCOM (Lack of Cohesion of Methods) flags split state.", profile).has_descriptive


def test_contextual_needs_metric_and_baseline_in_one_sentence(profile):
    assert not validate("The project mean is high. CBO is 448.", profile).has_contextual
    assert validate("CBO is far above the project average.", profile).has_contextual
    assert validate("RFC sits at +0.19σ here.", profile).has_contextual


def test_actionable_cues(profile):
    for text in ("Refactoring would help.", "Do not add imports.", "Hide the parsers behind an interface.", "Add regression tests first."):
        assert validate(text, profile).has_actionable, text
    assert not validate("This class is large.", profile).has_actionable


def test_symbol_cue_after_digits(profile):
    assert validate("CBO = 448 → 19.4σ", profile).has_contextual


def test_offline_output_is_complete(profile, camel_baseline):
    assert validate(offline_text(profile, camel_baseline), profile).complete


def test_custom_cues(profile):
    cues = DEFAULT_CUES.extended(action=[r"décomposer"])
    assert isinstance(cues, CueSet)
    assert validate("Il faut décomposer la classe.", profile, cues).has_actionable


def test_evidence_spans_point_into_the_text(profile):
    cov = validate(FULL, profile)
    for spans in cov.evidence.values():
        for s in spans:
            assert FULL[s.start : s.end] == s.excerpt
            assert s.excerpt.strip()


def test_sentence_splitting():
    text = "One. Two!\nThree"
    assert [text[s:e] for s, e in sentences(text)] == ["One.", "Two!", "Three"]


@settings(max_examples=150, deadline=None)
@given(st.text(alphabet=st.characters(blacklist_categories=("Cs",)), max_size=200))
def test_adding_text_never_removes_a_category(extra):
    from riskexplain.baseline import ProjectBaseline
    from riskexplain.dataset import ClassRecord

    base = ProjectBaseline.from_pairs("p", {"cbo": (11.1, 22.52), "rfc": (21.2, 25.0), "lcom": (79.33, 523.75), "wmc": (8.57, 11.2)})
    profile = assess_class(ClassRecord("a.B", {"cbo": 448, "rfc": 26, "lcom": 325, "wmc": 26}, 0), base)
    before = validate(FULL, profile)
    after = validate(FULL + "\n\n" + extra, profile)
    assert after.score >= before.score


@settings(max_examples=100, deadline=None)
@given(st.sampled_from([str.upper, str.lower, str.swapcase, str.title]))
def test_case_invariance(transform):
    from riskexplain.baseline import ProjectBaseline
    from riskexplain.dataset import ClassRecord

    base = ProjectBaseline.from_pairs("p", {"cbo": (11.1, 22.52), "rfc": (21.2, 25.0), "lcom": (79.33, 523.75), "wmc": (8.57, 11.2)})
    profile = assess_class(ClassRecord("a.B", {"cbo": 448, "rfc": 26, "lcom": 325, "wmc": 26}, 0), base)
    a, b = validate(FULL, profile), validate(transform(FULL), profile)
    assert (a.has_descriptive, a.has_contextual, a.has_actionable) == (b.has_descriptive, b.has_contextual, b.has_actionable)
