"""Civilization-ending risk on top of the baseline model.

With annual extinction probability ``dx`` during the time of perils, and the
value of everything after leaving the current regime written as
``E[V*] = lam * W`` (``W`` = one year of present world utility), pausing
science also delays by one period the exposure that gates ``E[V*]``. The
net effect of science is::

    V_SQ - V_PS - dx (1 - p) / (1 - p (1 - dx)) * lam * W
"""

import math
from dataclasses import dataclass

from .errors import DomainError, NoRootError
from .solvers import bisect_root
from .variants import scenario_impact

DEFAULT_W = 16e9


@dataclass(frozen=True)
class ExtinctionParams:
    dx: float
    W: float = DEFAULT_W
    lam: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.dx < 1.0:
            raise DomainError("dx must lie in [0, 1)")
        if self.W <= 0.0:
            raise DomainError("W must be positive")
        if self.lam < 0.0:
            raise DomainError("lambda must be nonnegative")


def world_utility(n0):
    """One year of world utility at two utils per person."""
    return 2.0 * n0


def extinction_penalty(p, dx, value_after_exit):
    """Expected loss of post-regime value from one extra period of exposure."""
    if p * (1.0 - dx) >= 1.0:
        raise DomainError("p(1 - dx) must be < 1")
    return dx * (1.0 - p) / (1.0 - p * (1.0 - dx)) * value_after_exit


def adjusted_from_impact(base_impact, p, ext):
    """Subtract the extinction penalty from a precomputed V_SQ - V_PS."""
    return base_impact - extinction_penalty(p, ext.dx, ext.lam * ext.W)


def lambda_from_impact(base_impact, p, dx, W=DEFAULT_W):
    """Post-regime value, in multiples of ``W``, at which science breaks even."""
    if dx <= 0.0:
        raise DomainError("break-even lambda is undefined without an extinction channel (dx = 0)")
    if W <= 0.0:
        raise DomainError("W must be positive")
    return base_impact / W * (1.0 - p * (1.0 - dx)) / (dx * (1.0 - p))


def extinction_adjusted_impact(params, ext, variant="simplified", survival_model=None, h=None):
    """Net utils from a year of science once extinction risk is priced in."""
    base = scenario_impact(params, variant, survival_model, h)
    return adjusted_from_impact(base, params.p, ext)


def breakeven_lambda(params, dx, W=DEFAULT_W, variant="simplified", survival_model=None, h=None):
    base = scenario_impact(params, variant, survival_model, h)
    return lambda_from_impact(base, params.p, dx, W)


def value_multiple(rho, G):
    """E[V*] / W for utility 2 + tG per person discounted at ``rho``."""
    return 1.0 / (1.0 - rho) + (G / 2.0) * rho / (1.0 - rho) ** 2


def rho_for_lambda(lam, G=0.01, tol=1e-10):
    """Annual discount factor that values a perpetual utility stream at ``lam * W``."""
    if not lam > 1.0:
        raise NoRootError("lambda must exceed 1 (rho = 0 already gives 1)")
    if G < 0.0:
        raise DomainError("G must be nonnegative")
    if G == 0.0:
        return 1.0 - 1.0 / lam
    # value_multiple is increasing in rho; solve in q = 1 - rho for accuracy near 1.
    def f(q):
        return value_multiple(1.0 - q, G) - lam

    q = bisect_root(f, math.ulp(1.0), 1.0, xtol=tol * 1e-3)
    return 1.0 - q
