"""Builders for the published result tables.

Each builder returns a :class:`Table` of raw values. Rounding happens only
when rendering text; CSV output keeps full precision.
"""

import csv
import io
from dataclasses import dataclass, field

from . import calibration, roi
from .better_science import better_science_breakeven, breakeven_lambda_better, utility_scaling
from .core_model import ModelParams, breakeven_peril, impact_decomposition, too_late_impact
from .errors import DomainError
from .extinction import breakeven_lambda
from .variants import scenario_decomposition

# Peril and extinction rates as displayed in the result tables.
TABLE_D = {"superforecasters": 0.000021, "domain_experts": 0.000385}
TABLE_DX = {"superforecasters": 0.0000016, "domain_experts": 0.0002286}
GROUP_LABELS = {"superforecasters": "Superforecasters", "domain_experts": "Domain Experts"}
TABLE_IDS = ("7", "8", "9", "10", "11", "12", "13", "A2", "A3.5", "A3.8")


@dataclass
class Table:
    table_id: str
    title: str
    columns: list
    rows: list
    # Python format spec per column for text output; "" means str().
    formats: list = field(default_factory=list)

    def _cell(self, value, spec):
        if isinstance(value, str) or not spec:
            return str(value)
        text = format(value, spec)
        # Values that round to zero print without a sign.
        if text.startswith("-") and not text.strip("-0.,"):
            text = text[1:]
        return text

    def to_text(self):
        formats = self.formats or [""] * len(self.columns)
        body = [[self._cell(v, f) for v, f in zip(row, formats)] for row in self.rows]
        widths = [max(len(str(c)), *(len(r[i]) for r in body)) for i, c in enumerate(self.columns)]
        lines = [f"Table {self.table_id}: {self.title}"]
        lines.append("  ".join(str(c).ljust(w) if i == 0 else str(c).rjust(w) for i, (c, w) in enumerate(zip(self.columns, widths))))
        for r in body:
            lines.append("  ".join(v.ljust(w) if i == 0 else v.rjust(w) for i, (v, w) in enumerate(zip(r, widths))))
        return "\n".join(lines) + "\n"

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        for row in self.rows:
            w.writerow([v if isinstance(v, str) else repr(float(v)) for v in row])
        return buf.getvalue()

    def render(self, fmt="text"):
        if fmt == "text":
            return self.to_text()
        if fmt == "csv":
            return self.to_csv()
        raise DomainError(f"unknown format {fmt!r}")


def _pct(d):
    return 100.0 * d


def _scenario_rows(params):
    return [
        ("No time of perils", 0.0),
        ("Superforecasters", TABLE_D["superforecasters"]),
        ("Domain Experts", TABLE_D["domain_experts"]),
    ]


def _decomposition_table(table_id, title, params, variant, survival_model=None, h=None):
    rows = []
    d_star = breakeven_peril(params, "realistic" if variant == "realistic" else "baseline", survival_model=survival_model, h=h)
    for label, d in _scenario_rows(params) + [("Break-even", d_star)]:
        dec = scenario_decomposition(params.with_(d=d), variant, survival_model, h).to_multiples()
        rows.append([label, _pct(d), *dec.as_tuple()])
    return Table(
        table_id,
        title,
        ["scenario", "d_pct", "pure_peril", "pure_income", "pure_health", "health_income", "total"],
        rows,
        ["", ".4f", ".0f", ".0f", ".0f", ".0f", ".0f"],
    )


def table_7(params=None):
    params = params or ModelParams()
    return _decomposition_table("7", "Impact of a year of science, closed-form model (benchmark multiples)", params, "simplified")


def table_8(params=None, survival_model=None, h=None):
    from .realistic import default_survival_model

    params = params or ModelParams()
    model = survival_model or default_survival_model()
    return _decomposition_table("8", "Impact of a year of science, cohort health model (benchmark multiples)", params, "realistic", model, h)


def _total(params):
    return roi.to_op_multiple(impact_decomposition(params).total)


def table_9(params=None):
    params = params or ModelParams()
    immediate = params.with_(t1=1)
    d_imm = breakeven_peril(params, "immediate_onset")
    d_base = breakeven_peril(params, "baseline")
    scen = _scenario_rows(params) + [("Immediate Peril Break-even", d_imm), (f"{params.t1} yrs Peril Break-even", d_base)]
    rows = [[label, _pct(d), _total(params.with_(d=d)), _total(immediate.with_(d=d))] for label, d in scen]
    return Table("9", "Return to science by onset of the time of perils", ["scenario", "d_pct", f"onset_{params.t1}yrs", "onset_immediate"], rows, ["", ".4f", ".0f", ".0f"])


def table_10(params=None):
    params = params or ModelParams()
    immediate = params.with_(t1=1)
    d_imm = breakeven_peril(params, "immediate_onset")
    d_base = breakeven_peril(params, "baseline")
    scen = _scenario_rows(params) + [("Immediate Peril Break-even", d_imm), (f"{params.t1} yrs Peril Break-even", d_base)]
    rows = [
        [label, _pct(d), _total(immediate.with_(d=d)), roi.to_op_multiple(too_late_impact(params.with_(d=d)).total)]
        for label, d in scen
    ]
    return Table("10", "Return to science if the time of perils has already begun", ["scenario", "d_pct", "just_in_time", "too_late"], rows, ["", ".4f", ".0f", ".0f"])


def _lambda_table(table_id, title, fn, params, include_realistic, survival_model, h):
    model = None
    if include_realistic:
        from .realistic import default_survival_model

        model = survival_model or default_survival_model()
    rows = []
    for group in ("superforecasters", "domain_experts"):
        p = params.with_(d=TABLE_D[group])
        dx = TABLE_DX[group]
        rows.append([GROUP_LABELS[group], _pct(dx), "Simplified health", fn(p, dx)])
        if include_realistic:
            rows.append([GROUP_LABELS[group], _pct(dx), "Realistic health", fn(p, dx, variant="realistic", survival_model=model, h=h)])
    return Table(table_id, title, ["forecast", "dx_pct", "model", "breakeven_lambda"], rows, ["", ".5f", "", ",.0f"])


def table_11(params=None, include_realistic=True, survival_model=None, h=None):
    return _lambda_table(
        "11",
        "Break-even value of the next regime (years of present world utility)",
        lambda p, dx, **kw: breakeven_lambda(p, dx, **kw),
        params or ModelParams(),
        include_realistic,
        survival_model,
        h,
    )


def table_13(params=None, include_realistic=True, survival_model=None, h=None):
    return _lambda_table(
        "13",
        "Break-even value of the next regime when science also cuts extinction risk",
        lambda p, dx, **kw: breakeven_lambda_better(p, dx, **kw),
        params or ModelParams(),
        include_realistic,
        survival_model,
        h,
    )


def table_12(params=None):
    params = params or ModelParams()
    rows = [[label, _pct(d), utility_scaling(params.with_(d=d))] for label, d in _scenario_rows(params)]
    rows.append(["Break-even", _pct(better_science_breakeven(params)), 0.0])
    return Table("12", "Relative utility gain from better science", ["scenario", "d_pct", "utility_multiple"], rows, ["", ".4f", ".2f"])


def table_a2():
    rows = []
    for natural, kind in ((False, "engineered"), (True, "natural")):
        for group, fs in calibration.PRESETS.items():
            rates = calibration.annual_rate_table(fs, natural=natural)
            rows.append([f"{kind} / {GROUP_LABELS[group]}", *(_pct(v) for _, v in sorted(rates.items()))])
    spans = sorted(calibration.annual_rate_table(calibration.SUPERFORECASTERS))
    cols = ["pathogen / group"] + [f"{a}-{b}_pct" for a, b in spans]
    return Table("A2", "Implied annual risk of a pandemic killing >1% of the population", cols, rows, [""] + [".2f"] * len(spans))


def table_a3_5(rounding="display"):
    rows = []
    for group in calibration.PRESETS:
        cal = calibration.calibrate_preset(group, rounding=rounding)
        rows.append([GROUP_LABELS[group], _pct(cal.q0), _pct(cal.q1), _pct(cal.q1_formula), cal.onset_year])
    return Table(
        "A3.5",
        "Engineered pandemic rates (baseline and time of perils)",
        ["group", "q0_pct", "q1_pct", "q1_formula_pct", "onset"],
        rows,
        ["", ".2f", ".2f", ".2f", "d"],
    )


def table_a3_8(rounding="display"):
    rows = []
    for group in calibration.PRESETS:
        cal = calibration.calibrate_preset(group, rounding=rounding)
        for regime, buckets, d in (("Baseline", cal.buckets_baseline, cal.d_baseline), ("Time of Perils", cal.buckets_perils, cal.d_perils)):
            rows.append([f"{GROUP_LABELS[group]} / {regime}", *(_pct(b) for b in buckets), _pct(d)])
    cols = ["group / regime"] + [f"p_{lab}" for lab in calibration.BUCKET_LABELS] + ["expected_mortality_pct"]
    return Table("A3.8", "Expected annual excess mortality", cols, rows, ["", ".2f", ".2f", ".4f", ".4f", ".4f"])


BUILDERS = {
    "7": table_7,
    "8": table_8,
    "9": table_9,
    "10": table_10,
    "11": table_11,
    "12": table_12,
    "13": table_13,
    "A2": table_a2,
    "A3.5": table_a3_5,
    "A3.8": table_a3_8,
}


def build_table(table_id, **kwargs):
    key = str(table_id).upper()
    if key not in BUILDERS:
        raise DomainError(f"unknown table {table_id!r}; expected one of {', '.join(TABLE_IDS)}")
    return BUILDERS[key](**kwargs)
