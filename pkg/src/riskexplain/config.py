"""Run configuration resolved from environment, config file and flags.

Precedence, lowest to highest: built-in defaults, ``RISKEXPLAIN_<KEY>``
environment variables, the ``[riskexplain]`` section of an INI-style config
file, command-line flags.  The API credential is only ever read from
``RISKEXPLAIN_API_KEY``; a config file that sets it is rejected.

Example file::

    [riskexplain]
    project_name = Apache Ant
    metric_columns = cbo=cbo, rfc=rfc, lcom=lcom, wmc=wmc
    backend = remote
    endpoint_url = http://localhost:8000/v1/chat/completions
    model_name = my-model
"""

from __future__ import annotations

import configparser
import os
from collections.abc import Mapping
from dataclasses import dataclass, field
from pathlib import Path

from .backend import API_KEY_ENV, BackendConfig
from .context import DEFAULT_THRESHOLDS, SeverityThresholds
from .dataset import CORE_METRICS, ColumnMapping
from .prompt import PromptConfig

SECTION = "riskexplain"
ENV_PREFIX = "RISKEXPLAIN_"
DEFAULT_CACHE_DIR = ".riskexplain-cache"

KEYS = {
    "project_name": str,
    "version": str,
    "name_column": str,
    "bug_column": str,
    "metric_columns": str,
    "audience": str,
    "project_label": str,
    "include_baseline": bool,
    "metric_order": str,
    "thresholds": str,
    "backend": str,
    "endpoint_url": str,
    "model_name": str,
    "temperature": float,
    "max_retries": int,
    "request_timeout": float,
    "max_parallel": int,
    "system_message": str,
    "max_regenerations": int,
    "mode": str,
    "format": str,
    "cache_dir": str,
    "no_cache": bool,
    "output_dir": str,
    "reproducible": bool,
}

SECRET_KEYS = {"api_key", "credential", "token"}


class ConfigError(ValueError):
    pass


def _coerce(key: str, value):
    kind = KEYS[key]
    if value is None or isinstance(value, kind) and not (kind is int and isinstance(value, bool)):
        return value
    if kind is bool:
        text = str(value).strip().lower()
        if text in ("1", "true", "yes", "on"):
            return True
        if text in ("0", "false", "no", "off"):
            return False
        raise ConfigError(f"{key}: expected a boolean, got {value!r}")
    try:
        return kind(value)
    except ValueError:
        raise ConfigError(f"{key}: expected {kind.__name__}, got {value!r}") from None


def read_config_file(path: str | Path) -> dict:
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    parser = configparser.ConfigParser()
    parser.read(path, encoding="utf-8")
    if not parser.has_section(SECTION):
        raise ConfigError(f"{path} has no [{SECTION}] section")
    values = {}
    for key, raw in parser.items(SECTION):
        if key in SECRET_KEYS:
            raise ConfigError(f"credentials are read from ${API_KEY_ENV} only, not from {path}")
        if key not in KEYS:
            raise ConfigError(f"unknown config key {key!r} in {path}")
        values[key] = _coerce(key, raw)
    return values


def read_environment(environ: Mapping[str, str]) -> dict:
    values = {}
    for key in KEYS:
        env_key = ENV_PREFIX + key.upper()
        if env_key in environ:
            values[key] = _coerce(key, environ[env_key])
    return values


def parse_metric_columns(text: str) -> dict[str, str]:
    """``"cbo=CBO, rfc=RFC"`` -> ``{"cbo": "CBO", "rfc": "RFC"}``."""
    mapping = {}
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        metric, sep, column = item.partition("=")
        if not sep:
            metric = column = item
        mapping[metric.strip().lower()] = column.strip()
    return mapping


@dataclass
class RunConfig:
    values: dict = field(default_factory=dict)

    def get(self, key: str, default=None):
        value = self.values.get(key)
        return default if value is None else value

    def column_mapping(self) -> ColumnMapping:
        metrics = {m: m for m in CORE_METRICS}
        if self.get("metric_columns"):
            metrics.update(parse_metric_columns(self.get("metric_columns")))
        try:
            return ColumnMapping(
                metrics=metrics,
                name_column=self.get("name_column", "name"),
                bug_column=self.get("bug_column", "bug"),
            )
        except ValueError as exc:
            raise ConfigError(str(exc)) from None

    def thresholds(self) -> SeverityThresholds:
        text = self.get("thresholds")
        if not text:
            return DEFAULT_THRESHOLDS
        try:
            return SeverityThresholds.parse(text)
        except ValueError as exc:
            raise ConfigError(f"thresholds: {exc}") from None

    def prompt_config(self, metric_ids: tuple[str, ...] = CORE_METRICS) -> PromptConfig:
        order = self.get("metric_order")
        metric_order = (
            tuple(m.strip().lower() for m in order.split(",") if m.strip()) if order else metric_ids
        )
        try:
            return PromptConfig(
                audience=self.get("audience", "a new contributor"),
                project_label=self.get("project_label"),
                include_baseline=self.get("include_baseline", True),
                metric_order=metric_order,
            )
        except ValueError as exc:
            raise ConfigError(str(exc)) from None

    def backend_config(self) -> BackendConfig:
        reproducible = self.get("reproducible", False)
        temperature = 0.0 if reproducible else self.get("temperature", 0.0)
        try:
            return BackendConfig(
                backend=self.get("backend", "offline"),
                endpoint_url=self.get("endpoint_url"),
                model_name=self.get("model_name", ""),
                temperature=temperature,
                max_retries=self.get("max_retries", 3),
                request_timeout=self.get("request_timeout", 60.0),
                max_parallel=self.get("max_parallel", 4),
                system_message=self.get("system_message", ""),
                reproducible=reproducible,
            )
        except ValueError as exc:
            raise ConfigError(str(exc)) from None

    def cache_dir(self) -> Path | None:
        """Cache directory for remote runs, or None when caching is off."""
        if self.get("no_cache", False):
            if self.get("reproducible", False) and self.get("backend", "offline") == "remote":
                raise ConfigError("--reproducible with a remote backend needs the response cache")
            return None
        return Path(self.get("cache_dir", DEFAULT_CACHE_DIR))


def resolve(
    flags: Mapping[str, object],
    config_file: str | Path | None = None,
    environ: Mapping[str, str] | None = None,
) -> RunConfig:
    environ = os.environ if environ is None else environ
    values = read_environment(environ)
    if config_file:
        values.update(read_config_file(config_file))
    for key, value in flags.items():
        if key in KEYS and value is not None:
            values[key] = _coerce(key, value)
    return RunConfig(values)
