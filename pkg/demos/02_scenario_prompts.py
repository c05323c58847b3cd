"""Prompts for a high-risk and a low-risk class, with and without baselines."""

from riskexplain import ClassRecord, ProjectBaseline, PromptConfig, assess_class, compose_prompt

camel = ProjectBaseline.from_pairs(
    "Apache Camel 1.6",
    {"cbo": (11.10, 22.52), "rfc": (21.20, 25.00), "lcom": (79.33, 523.75), "wmc": (8.57, 11.20)},
)
ant = ProjectBaseline.from_pairs(
    "Apache Ant 1.7",
    {"cbo": (11.04, 26.34), "rfc": (34.36, 36.02), "lcom": (89.14, 349.93), "wmc": (11.07, 11.97)},
)

exchange = ClassRecord("org.apache.camel.Exchange", {"cbo": 448, "rfc": 26, "lcom": 325, "wmc": 26}, 1)
dispatch = ClassRecord("org.apache.tools.ant.taskdefs.DispatchTask", {"cbo": 3, "rfc": 5, "lcom": 4, "wmc": 4}, 0)

bundle = compose_prompt(exchange, camel, PromptConfig(project_label="Apache Camel project"))
print(bundle.rendered)
print()
print("fingerprint", bundle.fingerprint[:16])

# the four components are kept separately as well
for name in ("component1_context", "component2_metrics", "component3_requirements", "component4_format"):
    print(f"{name}: {getattr(bundle, name)[:60]}...")
print()

# ablation: the same class without project statistics
print(compose_prompt(exchange, camel, PromptConfig(include_baseline=False)).rendered)
print()

print(compose_prompt(dispatch, ant).rendered)
print()

for record, base in ((exchange, camel), (dispatch, ant)):
    profile = assess_class(record, base)
    print(record.file_name, "->", profile.overall_band)
    for a in profile.assessments:
        print("   ", a.phrase)
