"""Dispatch between the closed-form and cohort-simulation health models."""

from .core_model import impact_decomposition
from .errors import DomainError

VARIANTS = ("simplified", "realistic")


def scenario_decomposition(params, variant="simplified", survival_model=None, h=None):
    if variant == "simplified":
        return impact_decomposition(params)
    if variant == "realistic":
        from . import realistic

        kwargs = {} if h is None else {"h": h}
        return realistic.realistic_impact(params, survival_model, **kwargs)
    raise DomainError(f"unknown variant {variant!r}; expected one of {VARIANTS}")


def scenario_impact(params, variant="simplified", survival_model=None, h=None):
    """V_SQ - V_PS in utils for the chosen health model."""
    return scenario_decomposition(params, variant, survival_model, h).total
