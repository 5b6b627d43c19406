"""From cumulative tournament forecasts to annual peril rates.

Pipeline: annualize cumulative pandemic forecasts, back out the annual
probability ``p`` of staying in the current epistemic regime, condition the
forecasts on that regime, solve for the baseline and time-of-perils pandemic
rates ``q0`` / ``q1``, the annual extinction rate ``x`` and the share ``c``
of >1% pandemics that kill >10%, then weight severity buckets into an
expected annual mortality ``d``.

All horizons count years from ``EPOCH`` (a forecast "by 2050" spans 27
periods). With ``rounding="display"`` each intermediate is rounded to the
precision shown in the published calibration tables before it feeds the next
stage; ``rounding="exact"`` carries full precision throughout.
"""

from dataclasses import dataclass, field, replace

from .errors import DomainError, NoRootError
from .solvers import bisect_root

EPOCH = 2023
END_YEAR = 2100
MID_YEAR = 2050
DEFAULT_SEVERITIES = (0.0, 0.02, 0.20, 1.0)
BUCKET_LABELS = ("0-1%", "1-10%", "10-99.9%", "100%")


@dataclass(frozen=True)
class ForecastSet:
    """Median cumulative forecasts for one forecaster group.

    ``pandemic_by`` maps a horizon year to the probability that an engineered
    pathogen kills >1% of people by then. ``extinction_by_2100`` and
    ``catastrophe_by_2100`` are the engineered-pathogen extinction and >10%
    mortality forecasts; ``bio_extinction_by_2100`` is the biological share of
    total extinction used to isolate non-bio exits.
    """

    group: str
    pandemic_by: dict
    catastrophe_by_2100: float
    extinction_by_2100: float
    total_extinction_by_2100: float
    bio_extinction_by_2100: float
    tai_prob: float
    total_catastrophe_by_2100: float = 0.0
    natural_pandemic_by: dict = field(default_factory=dict)

    def __post_init__(self):
        probs = [
            self.catastrophe_by_2100,
            self.extinction_by_2100,
            self.total_extinction_by_2100,
            self.bio_extinction_by_2100,
            self.tai_prob,
            self.total_catastrophe_by_2100,
            *self.pandemic_by.values(),
            *self.natural_pandemic_by.values(),
        ]
        if any(not 0.0 <= v <= 1.0 for v in probs):
            raise DomainError(f"{self.group}: probabilities must lie in [0, 1]")
        for series in (self.pandemic_by, self.natural_pandemic_by):
            years = sorted(series)
            if any(series[a] > series[b] for a, b in zip(years, years[1:])):
                raise DomainError(f"{self.group}: cumulative forecasts must be nondecreasing in year")


SUPERFORECASTERS = ForecastSet(
    group="superforecasters",
    pandemic_by={2030: 0.0025, 2050: 0.015, 2100: 0.04},
    catastrophe_by_2100=0.0085,
    extinction_by_2100=0.0001,
    total_extinction_by_2100=0.01,
    bio_extinction_by_2100=0.0001,
    tai_prob=0.0275,
    total_catastrophe_by_2100=0.0904,
    natural_pandemic_by={2030: 0.005, 2050: 0.0169, 2100: 0.0362},
)

DOMAIN_EXPERTS = ForecastSet(
    group="domain_experts",
    pandemic_by={2030: 0.0122, 2050: 0.08, 2100: 0.1025},
    catastrophe_by_2100=0.04,
    extinction_by_2100=0.01,
    total_extinction_by_2100=0.06,
    bio_extinction_by_2100=0.01,
    tai_prob=0.25,
    total_catastrophe_by_2100=0.20,
    natural_pandemic_by={2030: 0.01, 2050: 0.05, 2100: 0.0814},
)

ZERO_RISK = ForecastSet(
    group="zero",
    pandemic_by={2030: 0.0, 2050: 0.0, 2100: 0.0},
    catastrophe_by_2100=0.0,
    extinction_by_2100=0.0,
    total_extinction_by_2100=0.0,
    bio_extinction_by_2100=0.0,
    tai_prob=0.0,
)

PRESETS = {"superforecasters": SUPERFORECASTERS, "domain_experts": DOMAIN_EXPERTS}
DEFAULT_ONSET = {"superforecasters": 2038, "domain_experts": 2037}
# The published preferred q1 for domain experts (0.58%) is above the
# formula value at a 2037 onset (about 0.53%); the downstream d = 0.0385%
# requires 0.58%, so the preset pins it.
PRESET_Q1 = {"domain_experts": 0.0058}


# ---------------------------------------------------------------------------
# Building blocks


def annualize_cumulative(P, years):
    """Constant annual probability that compounds to ``P`` over ``years``."""
    if not 0.0 <= P < 1.0:
        raise DomainError(f"cumulative probability must lie in [0, 1), got {P}")
    if years < 1:
        raise DomainError("years must be >= 1")
    return 1.0 - (1.0 - P) ** (1.0 / years)


def interval_annual_rate(P_early, P_late, y_early, y_late):
    """Annual rate over (y_early, y_late] implied by two cumulative forecasts."""
    if not 0.0 <= P_early < 1.0 or not 0.0 <= P_late < 1.0:
        raise DomainError("cumulative probabilities must lie in [0, 1)")
    if P_late < P_early:
        raise DomainError("later cumulative probability is below the earlier one")
    if y_late <= y_early:
        raise DomainError("y_late must exceed y_early")
    return 1.0 - ((1.0 - P_late) / (1.0 - P_early)) ** (1.0 / (y_late - y_early))


def non_bio_share(total, bio):
    """Probability of the non-biological part of an event, treating causes as independent."""
    if bio >= 1.0:
        raise DomainError("biological probability must be < 1")
    return 1.0 - (1.0 - total) / (1.0 - bio)


def regime_survival_annual(forecasts, horizon_years=END_YEAR - EPOCH, use_catastrophe=False):
    """Annual probability of remaining in the current regime.

    Exit happens through non-bio extinction (or non-bio catastrophe when
    ``use_catastrophe``) or transformative AI, taken as mutually exclusive.
    """
    if use_catastrophe:
        other = non_bio_share(forecasts.total_catastrophe_by_2100, forecasts.catastrophe_by_2100)
    else:
        other = non_bio_share(forecasts.total_extinction_by_2100, forecasts.bio_extinction_by_2100)
    exit_prob = other + forecasts.tai_prob
    if exit_prob >= 1.0:
        raise DomainError(f"exit probability {exit_prob} >= 1")
    return (1.0 - exit_prob) ** (1.0 / horizon_years)


def condition_on_regime(P_uncond, p_annual, horizon_years):
    """Forecast conditional on staying in the regime (events impossible outside it)."""
    if not 0.0 < p_annual <= 1.0:
        raise DomainError("p_annual must lie in (0, 1]")
    out = P_uncond / p_annual**horizon_years
    if out > 1.0:
        raise DomainError(f"conditional probability {out} exceeds 1; inputs inconsistent")
    return out


def solve_perils_rate(q0, P_cond_2050, onset_year):
    """Perils-era pandemic rate matching the conditional 2050 forecast."""
    if not EPOCH < onset_year < MID_YEAR:
        raise DomainError(f"onset year must lie in ({EPOCH}, {MID_YEAR})")
    survive_base = (1.0 - q0) ** (onset_year - EPOCH)
    if survive_base < 1.0 - P_cond_2050:
        raise DomainError("baseline rate alone exceeds the 2050 forecast (q1 < 0)")
    return 1.0 - ((1.0 - P_cond_2050) / survive_base) ** (1.0 / (MID_YEAR - onset_year))


def annual_extinction_rate(P_cond_ext_2100, onset_year):
    """Constant annual extinction rate from onset to 2100 (zero before onset)."""
    if onset_year >= END_YEAR:
        raise DomainError(f"onset year must precede {END_YEAR}")
    if not 0.0 <= P_cond_ext_2100 < 1.0:
        raise DomainError("extinction probability must lie in [0, 1)")
    return 1.0 - (1.0 - P_cond_ext_2100) ** (1.0 / (END_YEAR - onset_year))


def catastrophe_survival(c, q0, qhat1, x, onset_year):
    """Probability of no >10% event over 2023-2100 for a given share ``c``."""
    return (1.0 - c * q0) ** (onset_year - EPOCH) * (1.0 - c * qhat1 - x) ** (END_YEAR - onset_year)


def solve_catastrophe_share(P_cat_cond, q0, qhat1, x, onset_year, tol=1e-10):
    """Share ``c`` of >1% pandemics that kill >10%, by bisection on [0, 1]."""
    for name, v in (("P_cat_cond", P_cat_cond), ("q0", q0), ("qhat1", qhat1), ("x", x)):
        if not 0.0 <= v < 1.0:
            raise DomainError(f"{name} must lie in [0, 1)")

    def f(c):
        return catastrophe_survival(c, q0, qhat1, x, onset_year) - (1.0 - P_cat_cond)

    f0, f1 = f(0.0), f(1.0)
    if f0 < 0.0 or f1 > 1e-14:
        raise NoRootError("no share c in [0, 1] matches the catastrophe forecast")
    if f1 >= 0.0:
        return 1.0
    return bisect_root(f, 0.0, 1.0, xtol=tol)


def bucket_probabilities(q, c, x):
    """Annual probabilities of (0-1%, 1-10%, 10-99.9%, 100%) mortality events.

    ``q`` is the >1% pandemic rate including extinction events, ``x`` the
    extinction rate. Non-extinction pandemics reach >10% with probability c.
    """
    qhat = q - x
    ten = c * qhat
    return (1.0 - q, qhat - ten, ten, x)


def expected_annual_mortality(bucket_probs, severities=DEFAULT_SEVERITIES, atol=1e-9):
    if len(bucket_probs) != len(severities):
        raise DomainError("bucket and severity vectors differ in length")
    if abs(sum(bucket_probs) - 1.0) > atol or any(b < 0 for b in bucket_probs):
        raise DomainError(f"bucket probabilities must be nonnegative and sum to 1, got {sum(bucket_probs)}")
    if any(not 0.0 <= s <= 1.0 for s in severities):
        raise DomainError("severities must lie in [0, 1]")
    return sum(b * s for b, s in zip(bucket_probs, severities))


# ---------------------------------------------------------------------------
# End-to-end


@dataclass(frozen=True)
class PerilCalibration:
    group: str
    onset_year: int
    p_regime_annual: float
    conditional: dict
    q0: float
    q1: float
    q1_formula: float
    q2: float
    x_annual: float
    c: float
    buckets_baseline: tuple
    buckets_perils: tuple
    d_baseline: float
    d_perils: float
    d_excess: float

    def with_(self, **changes):
        return replace(self, **changes)


def _pct_round(value, decimals):
    """Round a fraction to ``decimals`` places when written as a percentage."""
    return round(value * 100.0, decimals) / 100.0


def _stage(label, fn, *args):
    try:
        return fn(*args)
    except (DomainError, NoRootError) as exc:
        raise type(exc)(f"[{label}] {exc}") from exc


def calibrate(
    forecasts,
    onset_year=None,
    *,
    rounding="display",
    q1_override=None,
    severities=DEFAULT_SEVERITIES,
    use_catastrophe_exit=False,
):
    """Run the full calibration for one forecaster group.

    ``q1_override`` replaces the formula value of the perils-era rate (the
    formula value is still reported as ``q1_formula``).
    """
    if rounding not in ("display", "exact"):
        raise DomainError("rounding must be 'display' or 'exact'")
    if onset_year is None:
        onset_year = DEFAULT_ONSET.get(forecasts.group, 2038)
    display = rounding == "display"

    def show(v, decimals=2):
        return _pct_round(v, decimals) if display else v

    p = show(_stage("regime", regime_survival_annual, forecasts, END_YEAR - EPOCH, use_catastrophe_exit))
    cond = {
        y: show(_stage("condition", condition_on_regime, P, p, y - EPOCH))
        for y, P in sorted(forecasts.pandemic_by.items())
    }
    cat = show(_stage("condition", condition_on_regime, forecasts.catastrophe_by_2100, p, END_YEAR - EPOCH))
    ext = show(_stage("condition", condition_on_regime, forecasts.extinction_by_2100, p, END_YEAR - EPOCH))
    cond_all = dict(cond)
    cond_all.update({"catastrophe_2100": cat, "extinction_2100": ext})

    first = min(cond)
    q0 = show(_stage("q0", annualize_cumulative, cond[first], first - EPOCH))
    q1_formula = show(_stage("q1", solve_perils_rate, q0, cond[MID_YEAR], onset_year))
    q1 = q1_formula if q1_override is None else q1_override
    q2 = show(_stage("q2", interval_annual_rate, cond[MID_YEAR], cond[END_YEAR], MID_YEAR, END_YEAR))
    x = _stage("extinction", annual_extinction_rate, ext, onset_year)
    c = _stage("catastrophe share", solve_catastrophe_share, cat, q0, q1 - x, x, onset_year)
    if display:
        c = round(c, 2)

    base = bucket_probabilities(q0, c, 0.0)
    perils = bucket_probabilities(q1, c, x)
    d_base = _stage("mortality", expected_annual_mortality, base, severities)
    d_perils = _stage("mortality", expected_annual_mortality, perils, severities)
    return PerilCalibration(
        group=forecasts.group,
        onset_year=onset_year,
        p_regime_annual=p,
        conditional=cond_all,
        q0=q0,
        q1=q1,
        q1_formula=q1_formula,
        q2=q2,
        x_annual=x,
        c=c,
        buckets_baseline=base,
        buckets_perils=perils,
        d_baseline=d_base,
        d_perils=d_perils,
        d_excess=d_perils - d_base,
    )


def calibrate_preset(name, **kwargs):
    """Calibration for a named preset with its default onset and q1 choice."""
    if name not in PRESETS:
        raise DomainError(f"unknown preset {name!r}")
    kwargs.setdefault("q1_override", PRESET_Q1.get(name))
    kwargs.setdefault("onset_year", DEFAULT_ONSET[name])
    return calibrate(PRESETS[name], **kwargs)


def annual_rate_table(forecasts, natural=False):
    """Implied unconditional annual rates for 2023-2030, 2030-2050, 2050-2100."""
    series = forecasts.natural_pandemic_by if natural else forecasts.pandemic_by
    years = sorted(series)
    out = {(EPOCH, years[0]): annualize_cumulative(series[years[0]], years[0] - EPOCH)}
    for a, b in zip(years, years[1:]):
        out[(a, b)] = interval_annual_rate(series[a], series[b], a, b)
    return out


def read_forecast_file(path, group=None):
    """Parse a ``key,value`` forecast file into a :class:`ForecastSet`.

    Keys: ``group``, ``pandemic_by_<year>``, ``natural_pandemic_by_<year>``,
    ``catastrophe_by_2100``, ``extinction_by_2100``, ``total_extinction_by_2100``,
    ``bio_extinction_by_2100``, ``total_catastrophe_by_2100``, ``tai_prob``.
    Values are fractions, or percentages with a ``%`` suffix.
    """
    import csv

    from .config import parse_number

    scalars = {
        "catastrophe_by_2100",
        "extinction_by_2100",
        "total_extinction_by_2100",
        "bio_extinction_by_2100",
        "total_catastrophe_by_2100",
        "tai_prob",
    }
    kw = {"pandemic_by": {}, "natural_pandemic_by": {}}
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [r for r in csv.reader(fh) if r and not r[0].lstrip().startswith("#")]
    for lineno, row in enumerate(rows, 1):
        if len(row) != 2:
            raise DomainError(f"{path}: row {lineno} needs exactly two fields")
        key, raw = row[0].strip(), row[1].strip()
        if key in ("key",) and raw == "value":
            continue
        if key == "group":
            kw["group"] = raw
        elif key in scalars:
            kw[key] = parse_number(raw, key)
        elif key.startswith("natural_pandemic_by_") or key.startswith("pandemic_by_"):
            prefix, year = key.rsplit("_", 1)
            if not year.isdigit():
                raise DomainError(f"{path}: bad year in key {key!r}")
            kw[prefix][int(year)] = parse_number(raw, key)
        else:
            raise DomainError(f"{path}: unknown key {key!r}")
    if group is not None:
        kw["group"] = group
    kw.setdefault("group", "custom")
    missing = scalars - {"total_catastrophe_by_2100"} - kw.keys()
    if missing or not kw["pandemic_by"]:
        raise DomainError(f"{path}: missing keys {sorted(missing) or ['pandemic_by_<year>']}")
    return ForecastSet(**kw)
