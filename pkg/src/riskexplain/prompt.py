"""Four-part explanation prompt for one class.

The parts are project context (name plus baseline mean/std per metric), the
class's raw metric values, the three-part analysis request, and the output
format instruction.  In the rendered text the instruction sentence and the
metric line come first, followed by the project context:

    Explain the following software metrics for class Exchange.java to ...
    Exchange.java class metrics: CBO=448, RFC=26, LCOM=325, WMC=26
    Project Context: Apache Camel 1.6 codebase with baseline statistics -- ...

    Required Analysis: (1) ... Use clear, actionable language ...
"""

from __future__ import annotations

import hashlib
import re
from collections.abc import Sequence
from dataclasses import dataclass, field

from .baseline import ProjectBaseline, format_value
from .dataset import CORE_METRICS, ClassRecord, metric_kind

FORMAT_INSTRUCTION = "Use clear, actionable language suitable for code review discussions."


class PromptError(ValueError):
    pass


@dataclass(frozen=True)
class PromptConfig:
    audience: str = "a new contributor"
    project_label: str | None = None  # defaults to "<baseline project name> project"
    include_baseline: bool = True
    metric_order: Sequence[str] = CORE_METRICS

    def __post_init__(self):
        object.__setattr__(self, "metric_order", tuple(self.metric_order))
        if len(set(self.metric_order)) != len(self.metric_order):
            raise PromptError("metric_order contains duplicates")


@dataclass(frozen=True)
class PromptBundle:
    component1_context: str
    component2_metrics: str
    component3_requirements: str
    component4_format: str
    rendered: str
    class_name: str = field(default="", compare=False)

    @property
    def fingerprint(self) -> str:
        return prompt_fingerprint(self.rendered)

    def to_dict(self) -> dict:
        return {
            "class_name": self.class_name,
            "component1_context": self.component1_context,
            "component2_metrics": self.component2_metrics,
            "component3_requirements": self.component3_requirements,
            "component4_format": self.component4_format,
            "rendered": self.rendered,
            "prompt_fingerprint": self.fingerprint,
        }


def prompt_fingerprint(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def compose_prompt(
    record: ClassRecord, baseline: ProjectBaseline, config: PromptConfig = PromptConfig()
) -> PromptBundle:
    metrics = [
        m for m in config.metric_order if m in record.metrics and record.metrics[m] is not None
    ]
    if not metrics:
        raise PromptError(f"{record.class_name} has none of the metrics {list(config.metric_order)}")
    missing = [m for m in metrics if m not in baseline]
    if config.include_baseline and missing:
        raise PromptError(f"baseline has no statistics for {missing}")

    label = config.project_label or f"{baseline.project_name} project"
    fname = record.file_name
    pairs = ", ".join(
        f"{metric_kind(m).acronym}={format_value(record.metrics[m])}" for m in metrics
    )
    metrics_part = (
        f"Explain the following software metrics for class {fname} to "
        f"{config.audience} to the {label}.\n"
        f"{fname} class metrics: {pairs}"
    )

    if config.include_baseline:
        stats = "; ".join(
            f"{metric_kind(m).acronym}: μ={baseline[m].mean:.2f}, σ={baseline[m].std_dev:.2f}"
            for m in metrics
        )
        context_part = (
            f"Project Context: {baseline.project_name} codebase with baseline statistics -- {stats}."
        )
        grounding = f"the project baselines and {record.simple_name} class metrics"
    else:
        context_part = f"Project Context: {baseline.project_name} codebase."
        grounding = f"the {record.simple_name} class metrics"

    requirements_part = (
        "Required Analysis: (1) Clear definition of each metric and what it measures, "
        f"(2) Analysis of what the {record.simple_name} class metrics indicate in this "
        f"project context, (3) Actionable improvement suggestions based on {grounding}."
    )

    rendered = f"{metrics_part}\n{context_part}\n\n{requirements_part} {FORMAT_INSTRUCTION}"
    return PromptBundle(
        component1_context=context_part,
        component2_metrics=metrics_part,
        component3_requirements=requirements_part,
        component4_format=FORMAT_INSTRUCTION,
        rendered=rendered,
        class_name=record.class_name,
    )


_TEX_WRAPPERS = re.compile(r"\\(?:textbf|texttt|textit|emph)\{([^{}]*)\}")
_TEX_SYMBOLS = {r"\mu": "μ", r"\sigma": "σ", r"\\": " ", "``": "", "''": "", "$": ""}


def normalize_prompt(text: str) -> str:
    """Canonical form for comparing prompts across typesetting.

    Strips TeX wrappers (``\\textbf{..}``), maps ``\\mu``/``\\sigma`` to
    μ/σ, drops ``$`` and TeX quotes, collapses whitespace and puts exactly
    one space after each colon.
    """
    prev = None
    while prev != text:
        prev, text = text, _TEX_WRAPPERS.sub(r"\1", text)
    for tex, plain in _TEX_SYMBOLS.items():
        text = text.replace(tex, plain)
    text = re.sub(r":\s*", ": ", text)
    return " ".join(text.split())
