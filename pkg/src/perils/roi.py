"""Conversion of utility differences into benchmark multiples.

The benchmark is one dollar given to someone earning ``BENCHMARK_INCOME``
per year. With log utility that dollar is worth ``1 / BENCHMARK_INCOME``
utils, so a year of science costing ``SCIENCE_SPEND`` dollars that yields
``delta`` utils returns ``delta * BENCHMARK_INCOME / SCIENCE_SPEND`` times
the benchmark.
"""

import math
from dataclasses import dataclass

from .errors import DomainError

BENCHMARK_INCOME = 50_000.0
# Global annual science spending in dollars (OECD basic + applied research
# plus a China adjustment). The knock-on cost adjustment is not applied.
SCIENCE_SPEND = 357e9


def to_op_multiple(delta_utils, science_spend=SCIENCE_SPEND, benchmark_income=BENCHMARK_INCOME):
    """Utility difference expressed in multiples of the cash benchmark."""
    if science_spend <= 0:
        raise DomainError("science_spend must be positive")
    return delta_utils * benchmark_income / science_spend


def from_op_multiple(multiple, science_spend=SCIENCE_SPEND, benchmark_income=BENCHMARK_INCOME):
    if science_spend <= 0 or benchmark_income <= 0:
        raise DomainError("science_spend and benchmark_income must be positive")
    return multiple * science_spend / benchmark_income


@dataclass(frozen=True)
class BackOfEnvelope:
    income_term: float
    health_term: float
    d_star: float


def back_of_envelope(income_gain=0.0025, life_exp=72.8, le_gain=0.338, science_share=0.56, generations=2):
    """Break-even peril rate from the two-generation indifference argument.

    ``x`` is the lifetime income gain in log points split across two periods,
    ``y`` the proportional life-year gain. Extending the horizon to
    ``generations`` periods scales the break-even by ``(n - 1) / n``.
    """
    if generations < 2:
        raise DomainError("generations must be at least 2")
    if life_exp <= science_share * le_gain:
        raise DomainError("life_exp must exceed science_share * le_gain")
    x = math.log1p(income_gain) / 2.0
    y = life_exp / (life_exp - science_share * le_gain) - 1.0
    n = generations
    return BackOfEnvelope(income_term=x, health_term=y, d_star=(n - 1) * (x + y) / n)
