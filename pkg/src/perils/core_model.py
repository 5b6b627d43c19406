"""Closed-form baseline welfare model.

Two scenarios are compared. In the status quo (SQ) the time of perils starts
after ``t1`` periods and adds annual mortality ``d``. Pausing science for one
year (PS) delays that onset by one period and, after the lag ``T``, lowers
income growth for one year from ``G`` to ``g`` and population growth from
``s`` to ``s_bar``. The difference ``V_SQ - V_PS`` splits into four parts:
pure peril, pure income, pure health and health-income interaction.

Two conventions are exposed on :class:`ModelParams`:

``log_growth``
    Per-period utility growth is ``ln(1 + G)`` (the exact log-income
    increment) rather than the first-order approximation ``G``.
``peril_lag``
    The pure-peril window is weighted by an extra ``(p(1+s))**peril_lag``.
    ``peril_lag=0`` is the textbook closed form.

The defaults (``log_growth=True``, ``peril_lag=1``) are the ones under which
the published baseline tables are reproduced; see the README.
"""

import math
from dataclasses import asdict, dataclass, fields, replace

import numpy as np

from . import roi
from .errors import DivergenceError, DomainError, HorizonError, NoRootError
from .solvers import bisect_root

D_TOL = 1e-12


@dataclass(frozen=True)
class ModelParams:
    p: float = 0.98
    G: float = 0.01
    g: float = 0.0075
    T: int = 74
    t1: int = 15
    n0: float = 8.05e9
    s: float = 0.006
    s_bar: float = 0.005967
    d: float = 0.0
    log_growth: bool = True
    peril_lag: int = 1

    def __post_init__(self):
        if not 0.0 < self.p < 1.0:
            raise DomainError(f"p must lie in (0, 1), got {self.p}")
        if not 0.0 <= self.g <= self.G:
            raise DomainError(f"need 0 <= g <= G, got g={self.g}, G={self.G}")
        if not 0.0 <= self.s_bar <= self.s:
            raise DomainError(f"need 0 <= s_bar <= s, got s_bar={self.s_bar}, s={self.s}")
        if not 0.0 <= self.d < 1.0:
            raise DomainError(f"d must lie in [0, 1), got {self.d}")
        if int(self.T) != self.T or self.T < 1:
            raise DomainError(f"T must be an integer >= 1, got {self.T}")
        if int(self.t1) != self.t1 or not 0 <= self.t1 <= self.T:
            raise DomainError(f"t1 must be an integer in [0, T], got {self.t1}")
        if self.n0 <= 0:
            raise DomainError("n0 must be positive")
        if int(self.peril_lag) != self.peril_lag or self.peril_lag < 0:
            raise DomainError("peril_lag must be a nonnegative integer")
        object.__setattr__(self, "T", int(self.T))
        object.__setattr__(self, "t1", int(self.t1))
        object.__setattr__(self, "peril_lag", int(self.peril_lag))

    @property
    def t2(self):
        return self.T - self.t1

    @property
    def G_flow(self):
        """Per-period increment of flow utility in the status quo."""
        return math.log1p(self.G) if self.log_growth else self.G

    @property
    def g_flow(self):
        return math.log1p(self.g) if self.log_growth else self.g

    def with_(self, **changes):
        return replace(self, **changes)

    def to_dict(self):
        return asdict(self)


PARAM_NAMES = tuple(f.name for f in fields(ModelParams))


@dataclass(frozen=True)
class ModelTerms:
    L: float
    L_bar: float
    Delta: float
    N_T: float
    U_T1: float


@dataclass(frozen=True)
class ImpactDecomposition:
    pure_peril: float
    pure_income: float
    pure_health: float
    health_income: float
    total: float

    @classmethod
    def from_parts(cls, pure_peril, pure_income, pure_health, health_income):
        total = pure_peril + pure_income + pure_health + health_income
        # Adding 0.0 turns a signed zero (e.g. -d * ... at d = 0) into +0.0.
        parts = (float(pure_peril) + 0.0, float(pure_income) + 0.0, float(pure_health) + 0.0, float(health_income) + 0.0)
        return cls(*parts, float(total) + 0.0)

    def components(self):
        return (self.pure_peril, self.pure_income, self.pure_health, self.health_income)

    def as_tuple(self):
        return self.components() + (self.total,)

    def scaled(self, factor):
        return ImpactDecomposition.from_parts(*(c * factor for c in self.components()))

    def to_multiples(self, science_spend=roi.SCIENCE_SPEND, benchmark_income=roi.BENCHMARK_INCOME):
        return self.scaled(roi.to_op_multiple(1.0, science_spend, benchmark_income))


def life_years_factor(p, s, d):
    """L(s, d): discounted future life-years per survivor, starting next period."""
    r = p * (1.0 + s) * (1.0 - d)
    if r >= 1.0:
        raise DivergenceError(f"p(1+s)(1-d) = {r} >= 1; series diverges")
    return r / (1.0 - r)


def arith_geo_sum(r, n, a, b):
    """sum_{k=0}^{n-1} r**k * (a + b*k); ``n`` may be ``math.inf`` when |r| < 1."""
    if n <= 0:
        return 0.0
    if math.isinf(n):
        if not abs(r) < 1.0:
            raise DivergenceError(f"ratio {r} >= 1")
        return a / (1.0 - r) + b * r / (1.0 - r) ** 2
    if r == 1.0:
        return a * n + b * n * (n - 1) / 2.0
    rn = r**n
    geo = (1.0 - rn) / (1.0 - r)
    lin = r * (1.0 - n * r ** (n - 1) + (n - 1) * rn) / (1.0 - r) ** 2
    return a * geo + b * lin


def _check_convergence(params):
    r = params.p * (1.0 + params.s) * (1.0 - params.d)
    if r >= 1.0:
        raise DivergenceError(f"p(1+s)(1-d) = {r} >= 1; series diverges")


def model_terms(params):
    _check_convergence(params)
    p, s, d = params.p, params.s, params.d
    G = params.G_flow
    growth = p * (1.0 + s)
    r = growth * (1.0 - d)
    delta = growth ** (params.t1 + 1 + params.peril_lag) * arith_geo_sum(
        r, params.t2, 2.0 + (params.t1 + 1) * G, G
    )
    return ModelTerms(
        L=life_years_factor(p, s, d),
        L_bar=life_years_factor(p, params.s_bar, d),
        Delta=delta,
        N_T=params.n0 * growth**params.T * (1.0 - d) ** params.t2,
        U_T1=2.0 + (params.T + 1) * G,
    )


def impact_decomposition(params):
    """V_SQ - V_PS in utils, split into its four channels."""
    k = model_terms(params)
    d = params.d
    G, g = params.G_flow, params.g_flow
    inv = 1.0 / (1.0 - d)
    return ImpactDecomposition.from_parts(
        pure_peril=-d * params.n0 * k.Delta,
        pure_income=k.N_T * inv * k.L_bar * (G - g),
        pure_health=k.N_T * k.U_T1 * (k.L - inv * k.L_bar),
        health_income=k.N_T * G * (k.L**2 - inv * k.L_bar**2),
    )


def too_late_impact(params):
    """Returns when the time of perils has already begun in both scenarios.

    Pausing science no longer delays the onset, so there is no pure peril
    term and the ``1/(1-d)`` factor on the pause-science stream disappears.
    """
    _check_convergence(params)
    p, d = params.p, params.d
    G, g = params.G_flow, params.g_flow
    n_T = params.n0 * (p * (1.0 + params.s) * (1.0 - d)) ** params.T
    L = life_years_factor(p, params.s, d)
    Lb = life_years_factor(p, params.s_bar, d)
    U = 2.0 + (params.T + 1) * G
    return ImpactDecomposition.from_parts(
        pure_peril=0.0,
        pure_income=n_T * Lb * (G - g),
        pure_health=n_T * U * (L - Lb),
        health_income=n_T * G * (L**2 - Lb**2),
    )


# ---------------------------------------------------------------------------
# Direct summation oracles (test and diagnostics path)


def _powers(base, exponents):
    exponents = np.asarray(exponents, dtype=float)
    if base <= 0.0:
        return np.where(exponents == 0, 1.0, 0.0)
    return np.exp(exponents * math.log(base))


def _tail_bound(weight, u_last, G, ratio):
    """Bound on sum_{k>=1} weight * ratio**k * (u_last + k*G)."""
    if ratio >= 1.0:
        return math.inf
    return abs(weight) * (ratio * u_last / (1.0 - ratio) + G * ratio / (1.0 - ratio) ** 2)


def _check_tail(w_sq, w_ps, tp, G, ratio, rel_tol, horizon):
    # Both streams shrink by at most ``ratio`` per period after the horizon.
    # Reference is the gross status-quo stream, which stays positive even
    # when the net difference is zero.
    if not len(tp):
        return
    u = 2.0 + tp * G
    tail = _tail_bound(w_sq[-1] + w_ps[-1], u[-1], G, ratio)
    if tail > rel_tol * math.fsum(w_sq * u):
        raise HorizonError(f"horizon {horizon} leaves tail bound above {rel_tol:g} of the partial sum")


def _auto_horizon(params, ratio, rel_tol, minimum=200):
    # Periods past T after which the tail is negligible relative to the
    # first post-T term; generous but cheap.
    if ratio >= 1.0:
        raise DivergenceError("series diverges")
    G = params.G_flow
    u0 = 2.0 + (params.T + 1) * G
    h = minimum
    while _tail_bound(ratio**h, u0 + h * G, G, ratio) / u0 > rel_tol * 1e-3 and h < 50_000_000:
        h = int(h * 1.5)
    return h


def brute_force_impact(params, horizon=None, rel_tol=1e-9):
    """Term-by-term V_SQ - V_PS over periods 0..horizon.

    Regime-exit utility is identical in both scenarios and is not summed.
    Raises :class:`HorizonError` when the geometric tail beyond ``horizon``
    could exceed ``rel_tol`` of the accumulated total.
    """
    _check_convergence(params)
    p, s, sb, d = params.p, params.s, params.s_bar, params.d
    T, t1, n0, lag = params.T, params.t1, params.n0, params.peril_lag
    G, g = params.G_flow, params.g_flow
    ratio = p * (1.0 + s) * (1.0 - d)
    if horizon is None:
        horizon = T + _auto_horizon(params, ratio, rel_tol)

    # Peril window t1+1..T: SQ carries one more period of peril than PS.
    tw = np.arange(t1 + 1, T + 1)
    u_w = 2.0 + tw * G
    growth_w = _powers(p * (1.0 + s), tw + lag)
    peril_terms = n0 * growth_w * u_w * (_powers(1.0 - d, tw - t1) - _powers(1.0 - d, tw - t1 - 1))

    # After T: SQ vs PS populations and utilities.
    tp = np.arange(T + 1, horizon + 1)
    w_sq = n0 * _powers(p * (1.0 + s), tp) * _powers(1.0 - d, tp - t1)
    w_ps = n0 * (1.0 + s) ** T * _powers(p, tp) * _powers(1.0 + sb, tp - T) * _powers(1.0 - d, tp - t1 - 1)
    U_T1 = 2.0 + (T + 1) * G
    dw = w_sq - w_ps
    parts = (
        math.fsum(peril_terms),
        math.fsum(w_ps * (G - g)),
        math.fsum(dw * U_T1),
        math.fsum(dw * (tp - T - 1) * G),
    )
    _check_tail(w_sq, w_ps, tp, G, ratio, rel_tol, horizon)
    return ImpactDecomposition.from_parts(*parts)


def brute_force_too_late(params, horizon=None, rel_tol=1e-9):
    """Direct summation of the too-late difference (no onset delay)."""
    _check_convergence(params)
    p, s, sb, d, T, n0 = params.p, params.s, params.s_bar, params.d, params.T, params.n0
    G, g = params.G_flow, params.g_flow
    ratio = p * (1.0 + s) * (1.0 - d)
    if horizon is None:
        horizon = T + _auto_horizon(params, ratio, rel_tol)
    tp = np.arange(T + 1, horizon + 1)
    w_sq = n0 * _powers(p * (1.0 + s) * (1.0 - d), tp)
    w_ps = n0 * (1.0 + s) ** T * _powers(p * (1.0 - d), tp) * _powers(1.0 + sb, tp - T)
    dw = w_sq - w_ps
    U_T1 = 2.0 + (T + 1) * G
    parts = (
        0.0,
        math.fsum(w_ps * (G - g)),
        math.fsum(dw * U_T1),
        math.fsum(dw * (tp - T - 1) * G),
    )
    _check_tail(w_sq, w_ps, tp, G, ratio, rel_tol, horizon)
    return ImpactDecomposition.from_parts(*parts)


# ---------------------------------------------------------------------------
# Break-even solving

VARIANTS = ("baseline", "immediate_onset", "realistic")


def solve_breakeven(objective, d_start=0.01, xtol=D_TOL):
    """Smallest-bracket root of a total-impact objective decreasing in d."""
    f0 = objective(0.0)
    if not f0 > 0.0:
        raise NoRootError(f"impact at d=0 is {f0:.6g}; no positive break-even")
    upper = 1.0 - 1e-12
    return bisect_root(objective, 0.0, d_start, xtol=xtol, upper_limit=upper)


def breakeven_peril(params, variant="baseline", xtol=D_TOL, survival_model=None, h=None):
    """Peril rate d* at which V_SQ - V_PS = 0."""
    if variant not in VARIANTS:
        raise DomainError(f"unknown variant {variant!r}; expected one of {VARIANTS}")
    if variant == "realistic":
        from . import realistic

        kwargs = {} if h is None else {"h": h}
        return realistic.realistic_breakeven(params, survival_model, xtol=max(xtol, 1e-10), **kwargs)
    base = params.with_(t1=1) if variant == "immediate_onset" else params
    return solve_breakeven(lambda d: impact_decomposition(base.with_(d=d)).total, xtol=xtol)
