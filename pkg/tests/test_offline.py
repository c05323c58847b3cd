from riskexplain.backend import BackendConfig, generate
from riskexplain.context import SeverityBand, assess_class
from riskexplain.offline import BACKEND_ID, RULES, SECTION_TITLES, offline_generate, offline_text, suggestion
from riskexplain.prompt import compose_prompt
from riskexplain.taxonomy import validate


def test_rule_grid_is_complete():
    for metric in ("cbo", "rfc", "lcom", "wmc"):
        assert set(RULES[metric]) == set(SeverityBand)
    assert "NOC" in suggestion("noc", SeverityBand.HIGH)


def test_exchange_text(exchange, camel_baseline):
    p = assess_class(exchange, camel_baseline)
    text = offline_text(p, camel_baseline)
    for title in SECTION_TITLES:
        assert f"**{title}**" in text
    assert "CBO = 448 → Extreme outlier (~19.4σ above the mean)" in text
    suggestions = text.split("**Actionable Suggestions**")[1]
    assert suggestions.index("[extreme] CBO") < suggestions.index("[elevated] WMC") < suggestions.index("[typical] RFC")
    assert validate(text, p).complete


def test_low_risk_text_has_no_refactoring_push(dispatch_task, ant_baseline):
    p = assess_class(dispatch_task, ant_baseline)
    text = offline_text(p, ant_baseline)
    assert "refactor" not in text.lower()
    assert "Testing:" not in text
    assert validate(text, p).complete


def test_generate_is_pure(exchange, camel_baseline):
    p = assess_class(exchange, camel_baseline)
    bundle = compose_prompt(exchange, camel_baseline)
    a = generate(bundle, BackendConfig(), p, camel_baseline)
    b = generate(bundle, BackendConfig(), p, camel_baseline)
    assert a == b
    assert a.backend_id == BACKEND_ID and a.attempt_count == 1 and a.created_at is None
    assert a.prompt_fingerprint == bundle.fingerprint
    assert offline_generate(p, camel_baseline).prompt_fingerprint != bundle.fingerprint
