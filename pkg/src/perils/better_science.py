"""Better-science variant: an extra effective year of science that also cuts d.

The "more science" scenario brings the time of perils forward by one period
(as in the baseline) but lowers its annual peril rate from ``d`` to
``d_bar``. Life expectancy is treated as the reciprocal of a constant
mortality hazard; a year of science adds ``LE_GAIN`` years to
``LIFE_EXPECTANCY``, so ``d_bar = d * LIFE_EXPECTANCY / (LIFE_EXPECTANCY + LE_GAIN)``.
"""

import math

import numpy as np

from .core_model import (
    ImpactDecomposition,
    _auto_horizon,
    _check_convergence,
    _check_tail,
    _powers,
    arith_geo_sum,
    impact_decomposition,
    life_years_factor,
    solve_breakeven,
    D_TOL,
)
from .errors import DomainError
from .extinction import DEFAULT_W
from .variants import scenario_impact

LIFE_EXPECTANCY = 72.8
# Annual world life-expectancy gain (0.338 yr) times the share attributed to
# science (0.56), rounded to 0.19 yr as in the published calibration.
LE_GAIN = 0.19


def reduction_factor(life_exp=LIFE_EXPECTANCY, le_gain=LE_GAIN):
    return life_exp / (life_exp + le_gain)


def reduced_peril(d, life_exp=LIFE_EXPECTANCY, le_gain=LE_GAIN):
    if not 0.0 <= d < 1.0:
        raise DomainError("d must lie in [0, 1)")
    return reduction_factor(life_exp, le_gain) * d


def better_science_impact(params, d_bar=None):
    """V_BS - V_PS: the more-science scenario runs its perils at ``d_bar``.

    Components mirror the baseline split: the peril window, the one-year
    income gain, and the health and interaction terms after the lag.
    """
    _check_convergence(params)
    d = params.d
    db = reduced_peril(d) if d_bar is None else d_bar
    if not 0.0 <= db <= d:
        raise DomainError("need 0 <= d_bar <= d")
    p, s, n0, T, t1 = params.p, params.s, params.n0, params.T, params.t1
    G, g = params.G_flow, params.g_flow
    growth = p * (1.0 + s)
    a = 2.0 + (t1 + 1) * G
    window = growth ** (t1 + 1 + params.peril_lag) * (
        (1.0 - db) * arith_geo_sum(growth * (1.0 - db), params.t2, a, G) - arith_geo_sum(growth * (1.0 - d), params.t2, a, G)
    )
    n_T = n0 * growth**T * (1.0 - d) ** params.t2
    n_bs = n0 * growth**T * (1.0 - db) ** params.t2
    L_bs = life_years_factor(p, s, db)
    L_bar = life_years_factor(p, params.s_bar, d)
    U = 2.0 + (T + 1) * G
    inv = 1.0 / (1.0 - d)
    return ImpactDecomposition.from_parts(
        pure_peril=n0 * window,
        pure_income=n_T * inv * L_bar * (G - g),
        pure_health=U * (n_bs * L_bs - n_T * inv * L_bar),
        health_income=G * (n_bs * L_bs**2 - n_T * inv * L_bar**2),
    )


def brute_force_better(params, d_bar, horizon=None, rel_tol=1e-9):
    """Direct summation oracle for :func:`better_science_impact`."""
    _check_convergence(params)
    p, s, sb, d = params.p, params.s, params.s_bar, params.d
    T, t1, n0, lag = params.T, params.t1, params.n0, params.peril_lag
    G, g = params.G_flow, params.g_flow
    ratio = p * (1.0 + s) * (1.0 - d_bar)
    if horizon is None:
        horizon = T + _auto_horizon(params, ratio, rel_tol)
    tw = np.arange(t1 + 1, T + 1)
    window = n0 * _powers(p * (1.0 + s), tw + lag) * (2.0 + tw * G) * (
        _powers(1.0 - d_bar, tw - t1) - _powers(1.0 - d, tw - t1 - 1)
    )
    tp = np.arange(T + 1, horizon + 1)
    w_bs = n0 * _powers(p * (1.0 + s), tp) * _powers(1.0 - d_bar, tp - t1)
    w_ps = n0 * (1.0 + s) ** T * _powers(p, tp) * _powers(1.0 + sb, tp - T) * _powers(1.0 - d, tp - t1 - 1)
    dw = w_bs - w_ps
    _check_tail(w_bs, w_ps, tp, G, ratio, rel_tol, horizon)
    return ImpactDecomposition.from_parts(
        math.fsum(window),
        math.fsum(w_ps * (G - g)),
        math.fsum(dw * (2.0 + (T + 1) * G)),
        math.fsum(dw * (tp - T - 1) * G),
    )


def utility_scaling(params, d_bar=None):
    """(V_BS - V_PS) / (V_SQ - V_PS); the less-science scenario is the pause."""
    base = impact_decomposition(params).total
    if base == 0.0:
        raise DomainError("baseline impact is zero (at break-even); ratio undefined")
    return better_science_impact(params, d_bar).total / base


def better_science_breakeven(params, xtol=D_TOL, life_exp=LIFE_EXPECTANCY, le_gain=LE_GAIN):
    """Peril rate at which V_BS - V_PS = 0 with d_bar tied to d."""
    f = reduction_factor(life_exp, le_gain)
    return solve_breakeven(lambda d: better_science_impact(params.with_(d=d), f * d).total, xtol=xtol)


def extinction_improvement_condition(p, dx, lambda_x):
    """True when cutting extinction risk to ``lambda_x * dx`` outweighs the earlier onset."""
    if not 0.0 <= lambda_x <= 1.0:
        raise DomainError("lambda_x must lie in [0, 1]")
    return p / (1.0 - p * dx) > lambda_x


def extinction_bracket(p, dx, dx_bar):
    """Per-unit-of-(1-p)E[V*] extinction cost of more-and-better science."""
    return (1.0 + p * dx) / (1.0 - p * (1.0 - dx)) - 1.0 / (1.0 - p * (1.0 - dx_bar))


def breakeven_lambda_better(
    params,
    dx,
    dx_bar=None,
    W=DEFAULT_W,
    variant="simplified",
    numerator="baseline",
    survival_model=None,
    h=None,
):
    """Break-even post-regime value when science also scales dx down.

    ``numerator="baseline"`` uses V_SQ - V_PS (the choice that reproduces the
    published table); ``"better"`` uses V_BS(d_bar) - V_PS(d) and is only
    available for the simplified model.
    """
    if dx <= 0.0:
        raise DomainError("dx must be positive")
    dx_bar = reduced_peril(dx) if dx_bar is None else dx_bar
    bracket = extinction_bracket(params.p, dx, dx_bar)
    if bracket <= 0.0:
        raise DomainError("extinction term is net positive; no finite break-even lambda")
    if numerator == "baseline":
        v = scenario_impact(params, variant, survival_model, h)
    elif numerator == "better":
        if variant != "simplified":
            raise DomainError("the 'better' numerator is only defined for the simplified model")
        v = better_science_impact(params).total
    else:
        raise DomainError("numerator must be 'baseline' or 'better'")
    return v / W / (1.0 - params.p) / bracket


def capability_ratio(s_share, o_share, g, T, x_leak=0.0):
    """Defensive-to-offensive capability ratio.

    Large actors hold ``(1+g)**T`` times the capabilities of small ones.
    A leak of share ``x_leak`` of the gap to small actors gives
    ``s / (o * ((1 - x) / (1+g)**T + x))``; at ``x_leak = 0`` this is
    ``s (1+g)**T / o`` and at ``x_leak = 1`` it is ``s / o``.
    """
    if o_share <= 0.0:
        raise DomainError("o_share must be positive")
    if s_share < 0.0:
        raise DomainError("s_share must be nonnegative")
    if g <= -1.0:
        raise DomainError("g must exceed -1")
    if not 0.0 <= x_leak <= 1.0:
        raise DomainError("x_leak must lie in [0, 1]")
    lead = (1.0 + g) ** T
    if x_leak == 0.0:
        return s_share * lead / o_share
    return s_share / (o_share * ((1.0 - x_leak) / lead + x_leak))
