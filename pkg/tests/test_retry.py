import pytest

from riskexplain.backend import BackendConfig, RemoteBackend
from riskexplain.cache import ResponseCache
from riskexplain.context import assess_class
from riskexplain.prompt import compose_prompt
from riskexplain.taxonomy import validate_and_retry

from stub_server import StubServer

PARTIAL = "CBO is 448, which is 19.4σ above the mean."
COMPLETE = (
    "CBO measures coupling. RFC is the number of reachable methods. LCOM is the degree to which "
    "methods use separate fields. WMC is the sum of method complexities. CBO is 19.4σ above the mean. "
    "Avoid new dependencies."
)


@pytest.fixture
def setup(exchange, camel_baseline):
    return compose_prompt(exchange, camel_baseline), assess_class(exchange, camel_baseline)


def _cfg(url):
    return BackendConfig(backend="remote", endpoint_url=url, model_name="m", api_key="k", max_retries=0)


def test_regenerates_until_complete(setup, camel_baseline, tmp_path):
    bundle, profile = setup
    cache = ResponseCache(tmp_path)
    with StubServer([(200, PARTIAL), (200, COMPLETE)]) as srv:
        cfg = _cfg(srv.url)
        exp, cov = validate_and_retry(bundle, profile, cfg, 2, camel_baseline, cache=cache, remote=RemoteBackend(cfg))
    assert cov.complete and exp.text == COMPLETE
    assert len(srv.requests) == 2
    assert cache.get(bundle.fingerprint, "m").text == COMPLETE


def test_keeps_best_attempt_when_budget_runs_out(setup, camel_baseline):
    bundle, profile = setup
    with StubServer([(200, PARTIAL), (200, "Nothing useful here."), (200, "Still nothing.")]) as srv:
        cfg = _cfg(srv.url)
        exp, cov = validate_and_retry(bundle, profile, cfg, 2, camel_baseline, remote=RemoteBackend(cfg))
    assert exp.text == PARTIAL and not cov.complete
    assert len(srv.requests) == 3


def test_zero_regenerations(setup, camel_baseline):
    bundle, profile = setup
    with StubServer([(200, PARTIAL)]) as srv:
        cfg = _cfg(srv.url)
        validate_and_retry(bundle, profile, cfg, 0, camel_baseline, remote=RemoteBackend(cfg))
    assert len(srv.requests) == 1
    with pytest.raises(ValueError):
        validate_and_retry(bundle, profile, cfg, -1, camel_baseline)


def test_offline_never_regenerates(setup, camel_baseline):
    bundle, profile = setup
    exp, cov = validate_and_retry(bundle, profile, BackendConfig(), 5, camel_baseline)
    assert cov.complete and exp.attempt_count == 1
