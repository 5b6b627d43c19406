"""Break-even peril rates under alternative assumptions.

Prints one CSV block per experiment: the regime-survival probability p, the
lag T, the onset t1, and (for the cohort model) the health setback weight h.
"""

import csv
import sys

import numpy as np

from perils.core_model import ModelParams, breakeven_peril
from perils.realistic import default_survival_model, realistic_breakeven


def block(name, values, solve):
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow([name, "breakeven_d_pct"])
    for v in values:
        w.writerow([v, f"{100 * solve(v):.6f}"])
    print()


def main():
    base = ModelParams()
    block("p", np.round(np.linspace(0.96, 0.99, 7), 4), lambda p: breakeven_peril(base.with_(p=float(p))))
    block("T", range(20, 121, 20), lambda T: breakeven_peril(base.with_(T=T, t1=min(base.t1, T))))
    block("t1", (1, 5, 10, 15, 30, 60), lambda t1: breakeven_peril(base.with_(t1=t1)))
    block("log_growth", (True, False), lambda lg: breakeven_peril(base.with_(log_growth=lg)))
    model = default_survival_model()
    block("h", (0.3, 0.5625, 0.8, 1.0), lambda h: realistic_breakeven(base, model, h=h))


if __name__ == "__main__":
    main()
