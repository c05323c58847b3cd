"""Offline explanations and their taxonomy coverage."""

from riskexplain import ClassRecord, ProjectBaseline, assess_class
from riskexplain.offline import offline_text
from riskexplain.taxonomy import validate

camel = ProjectBaseline.from_pairs(
    "Apache Camel 1.6",
    {"cbo": (11.10, 22.52), "rfc": (21.20, 25.00), "lcom": (79.33, 523.75), "wmc": (8.57, 11.20)},
)
exchange = ClassRecord("org.apache.camel.Exchange", {"cbo": 448, "rfc": 26, "lcom": 325, "wmc": 26}, 1)
profile = assess_class(exchange, camel)

text = offline_text(profile, camel)
print(text)

cov = validate(text, profile)
print("descriptive", cov.has_descriptive, "contextual", cov.has_contextual, "actionable", cov.has_actionable)
for category, spans in cov.evidence.items():
    print(category, "->", spans[0].excerpt[:70] if spans else None)

# a bare number covers nothing
print(validate("CBO is 448.", profile).to_dict()["complete"])  # False

# hand-written text: two metrics are never defined, so descriptive fails
draft = "CBO measures coupling and is 19.4σ above the mean. RFC is fine. Avoid new imports."
print(validate(draft, profile).to_dict() | {"evidence": "..."})
