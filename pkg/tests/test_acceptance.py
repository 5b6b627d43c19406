"""Acceptance criteria 1-8, each at its stated tolerance.

Every criterion prints one PASS/FAIL line (also collected into the pytest
terminal summary). Run directly with ``python tests/test_acceptance.py``.
"""

import math
import time

import numpy as np
import pytest

from perils import calibration, roi
from perils.better_science import (
    better_science_breakeven,
    better_science_impact,
    breakeven_lambda_better,
    brute_force_better,
    utility_scaling,
)
from perils.core_model import (
    ModelParams,
    arith_geo_sum,
    breakeven_peril,
    brute_force_impact,
    brute_force_too_late,
    impact_decomposition,
    too_late_impact,
)
from perils.extinction import breakeven_lambda, rho_for_lambda
from perils.realistic import (
    CohortGrid,
    default_survival_model,
    life_expectancy,
    population_path,
    realistic_breakeven,
    realistic_impact,
    survival_share,
    world_life_expectancy,
)

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:  # run as a script
    ACCEPTANCE_LINES = []

BASE = ModelParams()
D_SF, D_DE = 0.000021, 0.000385
DX_SF, DX_DE = 0.0000016, 0.0002286


class Criterion:
    def __init__(self, number, title):
        self.number, self.title = number, title
        self.checks = []

    def near(self, label, got, want, tol):
        self.checks.append((label, got, want, abs(got - want) <= tol, f"+/-{tol:g}"))

    def rel(self, label, got, want, tol):
        self.checks.append((label, got, want, abs(got - want) <= tol * abs(want), f"+/-{100 * tol:g}%"))

    def within(self, label, got, lo, hi):
        self.checks.append((label, got, (lo, hi), lo <= got <= hi, "range"))

    def holds(self, label, ok, detail=""):
        self.checks.append((label, detail, True, bool(ok), "property"))

    @property
    def passed(self):
        return all(c[3] for c in self.checks)

    def report(self):
        failed = [c for c in self.checks if not c[3]]
        status = "PASS" if self.passed else "FAIL"
        line = f"CRITERION {self.number} {status}: {self.title} ({len(self.checks) - len(failed)}/{len(self.checks)} checks)"
        if failed:
            line += "; failing: " + "; ".join(f"{c[0]} got {_show(c[1])} want {_show(c[2])} {c[4]}" for c in failed)
        ACCEPTANCE_LINES.append(line)
        print(line)
        return line


def _show(v):
    if isinstance(v, float):
        return f"{v:.6g}"
    if isinstance(v, tuple):
        return "[" + ", ".join(_show(x) for x in v) + "]"
    return str(v)


def _mult(params):
    return roi.to_op_multiple(impact_decomposition(params).total)


def criterion_1():
    c = Criterion(1, "closed-form decomposition and break-even")
    start = time.perf_counter()
    rows = {
        0.0: (0, 68, 175, 88, 331),
        D_SF: (-2, 68, 173, 88, 326),
        D_DE: (-33, 65, 135, 73, 239),
    }
    for d, want in rows.items():
        got = impact_decomposition(BASE.with_(d=d)).to_multiples().as_tuple()
        for name, g, w in zip(("peril", "income", "health", "interaction", "total"), got, want):
            c.near(f"d={100 * d:.4f}% {name}", g, w, 1.0)
    d_star = breakeven_peril(BASE)
    c.near("break-even d (pp)", 100 * d_star, 0.1545, 0.0005)
    got = impact_decomposition(BASE.with_(d=d_star)).to_multiples().as_tuple()
    for name, g, w in zip(("peril", "income", "health", "interaction", "total"), got, (-127, 56, 34, 37, 0)):
        c.near(f"break-even {name}", g, w, 1.0)
    c.within("runtime s", time.perf_counter() - start, 0.0, 1.0)
    return c


def criterion_2():
    c = Criterion(2, "onset variants (immediate and too late)")
    imm = BASE.with_(t1=1)
    for d, want in ((0.0, 331), (D_SF, 325), (D_DE, 227), (0.00132, 0), (0.001545, -44)):
        c.near(f"immediate d={100 * d:.4f}%", _mult(imm.with_(d=d)), want, 1.0)
    for d, want in ((0.0, 331), (D_SF, 330), (D_DE, 305), (0.00132, 251), (0.001545, 239)):
        c.near(f"too late d={100 * d:.4f}%", roi.to_op_multiple(too_late_impact(BASE.with_(d=d)).total), want, 1.0)
    c.near("15-yr onset at d=0.132%", _mult(BASE.with_(d=0.00132)), 43, 1.0)
    c.near("immediate break-even (pp)", 100 * breakeven_peril(BASE, "immediate_onset"), 0.132, 0.0005)
    c.near("15-yr break-even (pp)", 100 * breakeven_peril(BASE), 0.1545, 0.0005)
    return c


def criterion_3():
    c = Criterion(3, "extinction break-even lambda and better science")
    c.rel("lambda superforecasters", breakeven_lambda(BASE.with_(d=D_SF), DX_SF), 90964, 0.01)
    c.rel("lambda domain experts", breakeven_lambda(BASE.with_(d=D_DE), DX_DE), 472, 0.01)
    c.rel("better lambda superforecasters", breakeven_lambda_better(BASE.with_(d=D_SF), DX_SF), 106681, 0.01)
    c.rel("better lambda domain experts", breakeven_lambda_better(BASE.with_(d=D_DE), DX_DE), 553, 0.01)
    for d, want in ((0.0, 1.00), (D_SF, 1.00), (D_DE, 1.06)):
        c.near(f"utility scaling d={100 * d:.4f}%", utility_scaling(BASE.with_(d=d)), want, 0.01)
    c.near("better-science break-even (pp)", 100 * better_science_breakeven(BASE), 0.1835, 0.0005)
    return c


def criterion_4():
    c = Criterion(4, "discount-rate equivalence")
    c.near("rho(18967)", rho_for_lambda(18967, 0.01), 0.9994596, 1e-4)
    c.near("rho(95)", rho_for_lambda(95, 0.01), 0.99526, 1e-4)
    return c


def criterion_5():
    c = Criterion(5, "forecast calibration pipeline")
    start = time.perf_counter()
    sf = calibration.calibrate_preset("superforecasters")
    de = calibration.calibrate_preset("domain_experts")
    c.near("p superforecasters (pp)", 100 * sf.p_regime_annual, 99.95, 0.01)
    c.near("p domain experts (pp)", 100 * de.p_regime_annual, 99.54, 0.01)
    table2 = {
        ("superforecasters", False): (0.04, 0.06, 0.05),
        ("domain_experts", False): (0.18, 0.35, 0.05),
        ("superforecasters", True): (0.07, 0.06, 0.04),
        ("domain_experts", True): (0.14, 0.21, 0.07),
    }
    for (group, natural), want in table2.items():
        rates = [v for _, v in sorted(calibration.annual_rate_table(calibration.PRESETS[group], natural).items())]
        for span, g, w in zip(("2023-30", "2030-50", "2050-2100"), rates, want):
            c.near(f"annual rate {group} {'natural' if natural else 'engineered'} {span} (pp)", 100 * g, w, 0.01)
    for cal, want in ((sf, (0.25, 1.52, 4.16)), (de, (1.26, 9.06, 14.62))):
        for y, w in zip((2030, 2050, 2100), want):
            c.near(f"conditional {cal.group} {y} (pp)", 100 * cal.conditional[y], w, 0.1)
    c.rel("extinction rate superforecasters", sf.x_annual, 0.0000016, 0.05)
    c.rel("extinction rate domain experts", de.x_annual, 0.0002286, 0.05)
    c.near("c superforecasters", sf.c, 0.16, 0.01)
    c.near("c domain experts", de.c, 0.12, 0.01)
    for label, got, want in (
        ("mortality sf baseline", sf.d_baseline, 0.0020),
        ("mortality sf perils", sf.d_perils, 0.0041),
        ("mortality de baseline", de.d_baseline, 0.0075),
        ("mortality de perils", de.d_perils, 0.0460),
    ):
        c.near(f"{label} (pp)", 100 * got, want, 0.0002)
    c.within("runtime s", time.perf_counter() - start, 0.0, 1.0)
    return c


def criterion_6():
    c = Criterion(6, "cohort health model")
    model = default_survival_model()
    start = time.perf_counter()
    dec = realistic_impact(BASE.with_(d=D_DE), model)
    elapsed = time.perf_counter() - start
    for d, want in ((0.0, 69), (D_SF, 68), (D_DE, 48)):
        got = roi.to_op_multiple(realistic_impact(BASE.with_(d=d), model).total)
        c.rel(f"total d={100 * d:.4f}%", got, want, 0.30)
    c.within("break-even d (pp)", 100 * realistic_breakeven(BASE, model), 0.09, 0.17)
    years = np.arange(1801.5, 2400.0, 7.0)[:, None]
    ages = np.arange(0, 131)[None, :]
    S = survival_share(model, years, np.broadcast_to(ages, (years.size, ages.size)))
    c.holds("survival in [0, 1]", np.all((S >= 0) & (S <= 1)))
    c.holds("survival nonincreasing in age", np.all(np.diff(S, axis=1) <= 0))
    c.holds("survival nondecreasing in birth year", np.all(np.diff(S, axis=0) >= 0))
    c.near("US life expectancy, 2019 cohort", life_expectancy(model, 2019), 79.1, 1.5)
    c.near("world life expectancy, 2019 cohort", world_life_expectancy(model, 2019), 72.8, 1.5)
    pop = population_path(model)
    c.within("population change at t=2500 (%/yr)", abs(pop[2500] / pop[2499] - 1.0) * 100, 0.0, 0.01)
    c.holds("decomposition closure", math.isclose(dec.total, math.fsum(dec.components()), rel_tol=1e-9))
    grid = CohortGrid.build(model, BASE.T)
    c.holds("horizon and grid", grid.S.shape == (3000, 121), str(grid.S.shape))
    c.within("runtime s (3000x121 run)", elapsed, 0.0, 30.0)
    return c


def _random_params(rng):
    while True:
        G = rng.uniform(0.001, 0.05)
        T = int(rng.integers(1, 151))
        s = rng.uniform(0.0, 0.02)
        params = ModelParams(
            p=rng.uniform(0.5, 0.995),
            G=G,
            g=rng.uniform(0.0, 1.0) * G,
            T=T,
            t1=int(rng.integers(0, T + 1)),
            n0=10 ** rng.uniform(3, 10),
            s=s,
            s_bar=rng.uniform(0.0, 1.0) * s,
            d=rng.uniform(0.0, 0.05),
            log_growth=bool(rng.integers(0, 2)),
            peril_lag=int(rng.integers(0, 2)),
        )
        if params.p * (1 + params.s) * (1 - params.d) < 0.999:
            return params


def _agree(closed, oracle, params, rel=1e-6):
    # Components are differences of large streams; rounding there scales
    # with the gross status-quo stream, which sets the absolute floor.
    gross = params.n0 * arith_geo_sum(params.p * (1 + params.s) * (1 - params.d), math.inf, 2.0, params.G_flow)
    return all(math.isclose(a, b, rel_tol=rel, abs_tol=1e-12 * gross) for a, b in zip(closed.as_tuple(), oracle.as_tuple()))


def criterion_7():
    c = Criterion(7, "closed forms agree with direct summation")
    rng = np.random.default_rng(20231)
    bad = {"baseline": 0, "too late": 0, "better science": 0}
    for _ in range(1000):
        params = _random_params(rng)
        bad["baseline"] += not _agree(impact_decomposition(params), brute_force_impact(params), params)
        bad["too late"] += not _agree(too_late_impact(params), brute_force_too_late(params), params)
        d_bar = rng.uniform(0.0, 1.0) * params.d
        if params.p * (1 + params.s) * (1 - d_bar) >= 0.999:
            d_bar = params.d
        bad["better science"] += not _agree(better_science_impact(params, d_bar), brute_force_better(params, d_bar), params)
    for name, n in bad.items():
        c.holds(f"{name} mismatches out of 1000", n == 0, str(n))
    return c


def criterion_8():
    c = Criterion(8, "back-of-envelope break-even")
    c.near("d* (pp)", 100 * roi.back_of_envelope().d_star, 0.193, 0.005)
    return c


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7, criterion_8]


@pytest.mark.parametrize("criterion", CRITERIA, ids=[f"criterion_{i}" for i in range(1, 9)])
def test_acceptance(criterion):
    result = criterion()
    line = result.report()
    assert result.passed, line


if __name__ == "__main__":
    for fn in CRITERIA:
        fn().report()
