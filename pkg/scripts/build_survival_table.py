"""Build the decadal US cohort survival table used by the realistic-health model.

Sources (both shipped as XTbML in the ``pymort`` package, mort.soa.org ids):

* 1501 / 1502: SSA period probabilities of death q(age, year), ages 0-119,
  calendar years 1900-2007, male / female. These are the historical rates
  behind the SSA's published cohort life tables.
* 3610 / 3609: SOA mortality improvement scale MP-2020, male / female,
  ages 20-120, years 1951-2036 (rates after 2036 equal the 2036 rates).

Years after 2007 are projected as q(a, y) = q(a, y-1) * (1 - MP(a, y)), with
ages below 20 using the age-20 improvement rate. Cohort survival to exact age
a is the product of (1 - q) along the cohort diagonal. Male and female shares
are averaged.

Usage::

    pip install pymort
    python scripts/build_survival_table.py [--out src/perils/data]
"""

import argparse
import datetime as dt
from pathlib import Path

import numpy as np
from pymort import MortXML

from perils.realistic import fit_survival, write_fitted_model, write_survival_csv

FIRST_COHORT, LAST_COHORT, STEP = 1900, 2100, 10
MAX_AGE = 120
LAST_OBSERVED = 2007


def _grid(table_id):
    vals = MortXML.from_id(table_id).Tables[0].Values["vals"].unstack()
    return vals  # index: age, columns: year


def projected_qx(qx_id, scale_id, last_year):
    hist = _grid(qx_id).reindex(index=range(MAX_AGE))
    scale = _grid(scale_id).reindex(index=range(MAX_AGE)).bfill()
    first_scale, last_scale = int(scale.columns.min()), int(scale.columns.max())
    years = np.arange(1900, last_year + 1)
    q = np.empty((MAX_AGE, len(years)))
    q[:, : LAST_OBSERVED - 1900 + 1] = hist.loc[:, 1900:LAST_OBSERVED].to_numpy()
    for j in range(LAST_OBSERVED - 1900 + 1, len(years)):
        yr = min(max(years[j], first_scale), last_scale)
        q[:, j] = q[:, j - 1] * (1.0 - scale[yr].to_numpy())
    return q


def cohort_shares(q, birth_year):
    s = np.ones(MAX_AGE + 1)
    for a in range(MAX_AGE):
        s[a + 1] = s[a] * (1.0 - q[a, birth_year + a - 1900])
    return s


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=Path(__file__).resolve().parents[1] / "src/perils/data")
    args = ap.parse_args()

    last_year = LAST_COHORT + MAX_AGE
    q_m = projected_qx(1501, 3610, last_year)
    q_f = projected_qx(1502, 3609, last_year)
    rows = []
    for b in range(FIRST_COHORT, LAST_COHORT + 1, STEP):
        pooled = 0.5 * (cohort_shares(q_m, b) + cohort_shares(q_f, b))
        rows.extend((b, a, float(pooled[a])) for a in range(MAX_AGE + 1))

    args.out.mkdir(parents=True, exist_ok=True)
    csv_path = args.out / "ssa_cohort_survival.csv"
    provenance = [
        f"built {dt.date.today().isoformat()} by scripts/build_survival_table.py",
        "SSA period qx 1900-2007 (mort.soa.org tables 1501/1502),",
        "projected past 2007 with SOA scale MP-2020 (tables 3610/3609); sexes averaged",
    ]
    write_survival_csv(csv_path, rows, provenance)

    model, report = fit_survival(rows)
    write_fitted_model(
        args.out / "survival_fit.txt",
        model,
        source=f"{csv_path.name}; logit OLS on {report.n_rows} cells; rmse={report.rmse:.6f}",
    )
    print(f"wrote {csv_path} ({len(rows)} rows)")
    print(f"a={model.a:.6f} b={model.b:.6f} c={model.c:.6f} rmse={report.rmse:.4f}")


if __name__ == "__main__":
    main()
