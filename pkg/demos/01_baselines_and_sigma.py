"""Project baselines and sigma distances on a synthetic PROMISE-style project."""

import csv
import tempfile
from pathlib import Path

import numpy as np

from riskexplain import compute_baseline, dataset_summary, load_dataset, sigma_distance
from riskexplain.baseline import describe_sigma

rng = np.random.default_rng(7)

# a small project: heavy-tailed coupling, complexity and cohesion values
n = 300
wmc = rng.geometric(0.1, n)
cbo = rng.geometric(0.09, n) - 1
rfc = wmc * 2 + rng.integers(0, 30, n)
lcom = (rng.pareto(1.3, n) * 10).astype(int)
bug = (rng.random(n) < 0.2) * rng.integers(1, 4, n)

workdir = Path(tempfile.mkdtemp())
path = workdir / "demo-2.0.csv"
with path.open("w", newline="") as fh:
    w = csv.writer(fh)
    w.writerow(["name", "version", "name", "wmc", "cbo", "rfc", "lcom", "bug"])  # PROMISE repeats "name"
    for i in range(n):
        w.writerow(["demo", "2.0", f"org.demo.C{i}", wmc[i], cbo[i], rfc[i], lcom[i], bug[i]])

ds = load_dataset(path, project_name="Demo")
print(ds.label, len(ds), "classes")
print(dataset_summary(ds))

base = compute_baseline(ds)
for metric, s in base.stats.items():
    print(f"{metric:>5}  mu={s.mean:8.2f}  sigma={s.std_dev:8.2f}  range=[{s.min:g}, {s.max:g}]")

# the baseline is population mean/std, same as numpy with ddof=0
print(np.isclose(base["cbo"].std_dev, cbo.std()))  # True

# how far is the most coupled class from the norm?
worst = max(ds.records, key=lambda r: r.metrics["cbo"])
d = sigma_distance(worst.metrics["cbo"], base["cbo"].mean, base["cbo"].std_dev)
print(worst.class_name, worst.metrics["cbo"], describe_sigma(d))

# the same value means different things in projects with different spreads
print(describe_sigma(sigma_distance(448, 11.10, 22.52)))  # 19.4σ above the mean
print(describe_sigma(sigma_distance(448, 11.04, 26.34)))  # 16.6σ above the mean
