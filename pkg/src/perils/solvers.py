"""Bracketed root finding used by every break-even solver."""

import math

import numpy as np
from scipy.optimize import bisect

from .errors import ConvergenceError, NoRootError

MAX_ITER = 500


def grow_bracket(f, lo, hi, upper_limit, factor=2.0, max_steps=200):
    """Expand ``hi`` geometrically toward ``upper_limit`` until f changes sign.

    Returns ``(lo, hi, f_lo, f_hi)``. Raises :class:`NoRootError` when no
    sign change is found before ``upper_limit``.
    """
    f_lo = f(lo)
    if f_lo == 0.0:
        return lo, lo, f_lo, f_lo
    f_hi = f(hi)
    steps = 0
    while math.copysign(1.0, f_lo) == math.copysign(1.0, f_hi):
        if hi >= upper_limit or steps >= max_steps:
            raise NoRootError(f"no sign change on [{lo}, {hi}]")
        hi = min(upper_limit, lo + (hi - lo) * factor)
        f_hi = f(hi)
        steps += 1
    return lo, hi, f_lo, f_hi


def bisect_root(f, lo, hi, xtol=1e-12, upper_limit=None):
    """Root of ``f`` on ``[lo, hi]`` by bisection, growing ``hi`` if needed."""
    upper = hi if upper_limit is None else upper_limit
    lo, hi, f_lo, _ = grow_bracket(f, lo, hi, upper)
    if lo == hi:
        return lo
    root, info = bisect(f, lo, hi, xtol=xtol, rtol=4 * np.finfo(float).eps, maxiter=MAX_ITER, full_output=True, disp=False)
    if not info.converged:
        raise ConvergenceError(f"bisection did not converge after {info.iterations} iterations")
    return root
