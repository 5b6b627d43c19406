"""Cohort simulation of the returns to science with age-structured survival.

A constant number of people is born every period. The share of a cohort
alive at age ``a`` follows a logistic curve in age whose location improves
with ``log(birth_year - 1800)``; the curve is fitted to US cohort life
tables and shifted by ``birth_offset`` years to stand in for world survival.

Pausing science mixes each year's survival with the previous year's
(weight ``h``) once the lag ``T`` has passed, lowers income growth for one
year, and delays the onset of the time of perils by one period. The value of
each scenario is summed directly over a (period, age) grid.
"""

import csv
import math
import os
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

import numpy as np

from .core_model import ImpactDecomposition, solve_breakeven
from .errors import DomainError, HorizonError

EPOCH = 2023
AGE_CAP = 120
BIRTH_OFFSET = 24
BIRTHS_PER_YEAR = 130e6
HORIZON = 3000
DEFAULT_H = 0.5625
CLAMP = 1e-6
SURVIVAL_CSV = "ssa_cohort_survival.csv"
FITTED_MODEL = "survival_fit.txt"


class DegenerateDataError(DomainError):
    """The actuarial table cannot identify the survival curve."""


@dataclass(frozen=True)
class SurvivalModel:
    a: float
    b: float
    c: float
    age_cap: int = AGE_CAP
    birth_offset: int = BIRTH_OFFSET

    def __post_init__(self):
        if not self.b < 0.0:
            raise DomainError(f"b must be negative (survival declines with age), got {self.b}")
        if not self.c > 0.0:
            raise DomainError(f"c must be positive (survival improves by cohort), got {self.c}")


@dataclass(frozen=True)
class FitReport:
    n_rows: int
    rmse_logit: float
    rmse: float


def survival_share(model, birth_year, age):
    """Share of a cohort born in ``birth_year`` alive at ``age`` (0 past the cap)."""
    birth_year = np.asarray(birth_year, dtype=float)
    age = np.asarray(age, dtype=float)
    if np.any(birth_year <= 1800.0):
        raise DomainError("birth_year must exceed 1800")
    if np.any(age < 0.0):
        raise DomainError("age must be nonnegative")
    z = model.a + model.b * age + model.c * np.log(birth_year - 1800.0)
    share = np.where(age > model.age_cap, 0.0, 1.0 / (1.0 + np.exp(-z)))
    return share if share.ndim else float(share)


def life_expectancy(model, birth_year):
    """Expected years lived by a cohort: sum of survival shares over ages 0..cap."""
    ages = np.arange(model.age_cap + 1)
    return float(np.sum(survival_share(model, birth_year, ages)))


def world_life_expectancy(model, birth_year):
    """Cohort life expectancy of world births, read off the offset national curve."""
    return life_expectancy(model, birth_year - model.birth_offset)


def period_life_expectancy(model, year, offset=0):
    """Sum over ages of the share alive in calendar ``year`` (cross-section)."""
    ages = np.arange(model.age_cap + 1)
    return float(np.sum(survival_share(model, year - offset - ages, ages)))


# ---------------------------------------------------------------------------
# Fitting and files


def _as_array(table):
    arr = np.asarray([tuple(r) for r in table], dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 3:
        raise DegenerateDataError("table rows must be (birth_year, age, share_alive)")
    return arr


def fit_survival(table, clamp=CLAMP, age_cap=AGE_CAP, birth_offset=BIRTH_OFFSET):
    """Least-squares fit of logit(share) = a + b*age + c*log(birth_year - 1800).

    Shares are clamped to ``[clamp, 1 - clamp]`` before the logit transform.
    Returns ``(SurvivalModel, FitReport)``.
    """
    arr = _as_array(table)
    by, age, share = arr.T
    if np.any(by <= 1800):
        raise DomainError("birth years must exceed 1800")
    if np.any((share < 0) | (share > 1)) or np.any(~np.isfinite(arr)):
        raise DomainError("shares must lie in [0, 1]")
    if len(np.unique(by)) < 2 or len(np.unique(age)) < 10:
        raise DegenerateDataError("need at least 2 birth years and 10 ages")
    if np.ptp(share) == 0.0:
        raise DegenerateDataError("all shares are equal")
    y = np.clip(share, clamp, 1.0 - clamp)
    z = np.log(y / (1.0 - y))
    X = np.column_stack([np.ones_like(age), age, np.log(by - 1800.0)])
    coef, _, rank, _ = np.linalg.lstsq(X, z, rcond=None)
    if rank < 3:
        raise DegenerateDataError("design matrix is rank deficient")
    resid = z - X @ coef
    fitted = 1.0 / (1.0 + np.exp(-(X @ coef)))
    model = SurvivalModel(a=float(coef[0]), b=float(coef[1]), c=float(coef[2]), age_cap=age_cap, birth_offset=birth_offset)
    report = FitReport(
        n_rows=len(arr),
        rmse_logit=float(np.sqrt(np.mean(resid**2))),
        rmse=float(np.sqrt(np.mean((fitted - share) ** 2))),
    )
    return model, report


def write_survival_csv(path, rows, provenance=()):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        for line in provenance:
            fh.write(f"# {line}\n")
        w = csv.writer(fh)
        w.writerow(["birth_year", "age", "share_alive"])
        for by, a, s in rows:
            w.writerow([int(by), int(a), f"{s:.10g}"])


def read_survival_csv(path):
    """Rows of (birth_year, age, share_alive) from an actuarial CSV."""
    with open(path, newline="", encoding="utf-8") as fh:
        lines = [ln for ln in fh if ln.strip() and not ln.lstrip().startswith("#")]
    reader = csv.DictReader(lines)
    if reader.fieldnames != ["birth_year", "age", "share_alive"]:
        raise DomainError(f"{path}: header must be birth_year,age,share_alive")
    try:
        return [(int(r["birth_year"]), int(r["age"]), float(r["share_alive"])) for r in reader]
    except (TypeError, ValueError) as exc:
        raise DomainError(f"{path}: malformed row ({exc})") from exc


def write_fitted_model(path, model, source):
    Path(path).write_text(
        f"a={model.a!r}\nb={model.b!r}\nc={model.c!r}\noffset={model.birth_offset}\nsource={source}\n",
        encoding="utf-8",
    )


def read_fitted_model(path):
    values = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, val = line.partition("=")
        if not sep:
            raise DomainError(f"{path}:{lineno}: expected key=value")
        values[key.strip()] = val.strip()
    missing = {"a", "b", "c"} - values.keys()
    if missing:
        raise DomainError(f"{path}: missing {sorted(missing)}")
    unknown = values.keys() - {"a", "b", "c", "offset", "source", "age_cap"}
    if unknown:
        raise DomainError(f"{path}: unknown keys {sorted(unknown)}")
    return SurvivalModel(
        a=float(values["a"]),
        b=float(values["b"]),
        c=float(values["c"]),
        age_cap=int(values.get("age_cap", AGE_CAP)),
        birth_offset=int(values.get("offset", BIRTH_OFFSET)),
    )


def data_dir():
    env = os.environ.get("PERILS_DATA_DIR")
    return Path(env) if env else Path(__file__).with_name("data")


def default_survival_model():
    path = data_dir() / FITTED_MODEL
    if not path.exists():
        raise FileNotFoundError(f"fitted survival model not found at {path}; run `perils fit-survival`")
    return read_fitted_model(path)


# ---------------------------------------------------------------------------
# Simulation


def paused_survival(S, S_prev, T, h):
    """Survival grid under the pause, rows = periods 0..H-1, columns = ages.

    Before and at ``T`` nothing changes. Cohorts born after ``T`` live on the
    set-back curve ``S_hat``. Cohorts alive at ``T`` keep their survival up to
    ``T`` and then follow the set-back curve's conditional survival.
    """
    S_hat = (1.0 - h) * S + h * S_prev
    if h == 0.0:
        return S.copy(), S_hat
    H, A = S.shape
    t = np.arange(H)[:, None]
    a = np.arange(A)[None, :]
    born = t - a
    out = S.copy()
    after = t > T
    out = np.where(after & (born > T), S_hat, out)
    straddle = after & (born <= T)
    ti, ai = np.nonzero(straddle)
    age_at_T = T - born[ti, ai]
    out[ti, ai] = S[T, age_at_T] * S_hat[ti, ai] / S_hat[T, age_at_T]
    return out, S_hat


@dataclass
class CohortGrid:
    """Survival grids that do not depend on the peril rate."""

    S: np.ndarray
    S_bar: np.ndarray
    births: float
    T: int

    @property
    def horizon(self):
        return self.S.shape[0]

    @classmethod
    def build(cls, model, T, h=DEFAULT_H, horizon=HORIZON, births=BIRTHS_PER_YEAR):
        if not 0.0 <= h <= 1.0:
            raise DomainError("h must lie in [0, 1]")
        if horizon <= T + 1:
            raise HorizonError("horizon must extend past T")
        ages = np.arange(model.age_cap + 1)[None, :]
        t = np.arange(-1, horizon)[:, None]
        full = survival_share(model, EPOCH + t - ages - model.birth_offset, np.broadcast_to(ages, (horizon + 1, ages.size)))
        S, S_prev = full[1:], full[:-1]
        S_bar, _ = paused_survival(S, S_prev, T, h)
        return cls(S=S, S_bar=S_bar, births=births, T=T)

    def peril_factors(self, d, onset):
        """(1-d)**min(t - onset, a) after onset, 1 before."""
        H, A = self.S.shape
        t = np.arange(H)[:, None]
        a = np.arange(A)[None, :]
        k = np.clip(np.minimum(t - onset, a), 0, None)
        return np.where(t <= onset, 1.0, np.exp(k * math.log1p(-d)))

    def populations(self, d, t1):
        P_sq = self.births * np.sum(self.peril_factors(d, t1) * self.S, axis=1)
        P_ps = self.births * np.sum(self.peril_factors(d, t1 + 1) * self.S_bar, axis=1)
        return P_sq, P_ps

    def decompose(self, p, G, g, d, t1, tail_tol=1e-6):
        """Four-way split of V_SQ - V_PS; G and g are annual growth rates."""
        T = self.T
        P_sq, P_ps = self.populations(d, t1)
        t = np.arange(self.horizon, dtype=float)
        disc = np.exp(t * math.log(p))
        lnG, lng = math.log1p(G), math.log1p(g)
        U_sq = 2.0 + t * lnG
        U_ps = U_sq + np.where(t > T, lng - lnG, 0.0)
        pre, post = t <= T, t > T
        dP = P_sq - P_ps
        parts = (
            math.fsum((disc * dP * U_sq)[pre]),
            math.fsum((disc * P_ps * (U_sq - U_ps))[post]),
            math.fsum((disc * dP * (2.0 + (T + 1) * lnG))[post]),
            math.fsum((disc * dP * (t - T - 1) * lnG)[post]),
        )
        gross = math.fsum(disc * P_sq * U_sq)
        last = disc[-1] * (P_sq[-1] * U_sq[-1] + P_ps[-1] * U_ps[-1])
        tail = last * p / (1.0 - p) * (1.0 + lnG / U_sq[-1]) / (1.0 - p * lnG / U_sq[-1] - 1e-300)
        if tail > tail_tol * gross:
            raise HorizonError(f"horizon {self.horizon} leaves tail {tail:.3g} above {tail_tol:g} of total")
        return ImpactDecomposition.from_parts(*parts)


@lru_cache(maxsize=16)
def _cached_grid(model, T, h, horizon, births):
    return CohortGrid.build(model, T, h, horizon, births)


def cohort_grid(model, T, h=DEFAULT_H, horizon=HORIZON, births=BIRTHS_PER_YEAR):
    return _cached_grid(model, int(T), float(h), int(horizon), float(births))


def realistic_impact(params, model=None, h=DEFAULT_H, horizon=HORIZON, births=BIRTHS_PER_YEAR):
    """V_SQ - V_PS in utils under cohort survival, split as in the baseline.

    Uses ``p``, ``G``, ``g``, ``T``, ``t1`` and ``d`` from ``params``;
    population growth rates and ``n0`` do not enter (births are constant).
    """
    model = default_survival_model() if model is None else model
    grid = cohort_grid(model, params.T, h, horizon, births)
    return grid.decompose(params.p, params.G, params.g, params.d, params.t1)


def realistic_breakeven(params, model=None, h=DEFAULT_H, xtol=1e-10, horizon=HORIZON, births=BIRTHS_PER_YEAR):
    model = default_survival_model() if model is None else model
    grid = cohort_grid(model, params.T, h, horizon, births)
    return solve_breakeven(lambda d: grid.decompose(params.p, params.G, params.g, d, params.t1).total, xtol=xtol)


def population_path(model, horizon=HORIZON, births=BIRTHS_PER_YEAR):
    """Status-quo population by period with no time of perils."""
    ages = np.arange(model.age_cap + 1)[None, :]
    t = np.arange(horizon)[:, None]
    S = survival_share(model, EPOCH + t - ages - model.birth_offset, np.broadcast_to(ages, (horizon, ages.size)))
    return births * S.sum(axis=1)
