"""
A small Monte Carlo study
=========================

The published design has 1000 replications per cell; this runs 50 for a
single parameter set, which takes well under a minute.
"""

from sskit.study import DEFAULTS, run_study, summarize_orderings, validate_config

cfg = validate_config({
    "parameter_sets": DEFAULTS["parameter_sets"][:1],
    "known_mu_sets": DEFAULTS["known_mu_sets"][:1],
    "replications": 50,
    "nboot": 100,
    "seed": 7,
})
report = run_study(cfg)

for row in report.table2():
    print(row["scheme"], "MLE mse %.4f" % row["MLE_mse"], "Prior3 mse %.4f" % row["Prior3_mse"])

for row in report.table3():
    print(row["scheme"], "lengths", {k: round(v, 4) for k, v in row.items() if k.endswith("_length")})

# which of the expected orderings hold at this size
for f in summarize_orderings(report):
    print(f["cell"], f["finding"], f["status"])
