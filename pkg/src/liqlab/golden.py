"""Golden-section search for unimodal maxima on a bracketed interval."""

from __future__ import annotations

import math
from typing import Callable

from .errors import BracketError

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_section_max(fn: Callable[[float], float], lo: float, hi: float,
                       rel_tol: float = 1e-10, max_iter: int = 200) -> float:
    """Argmax of a unimodal ``fn`` on ``[lo, hi]``.

    The interval shrinks until its width falls below
    ``rel_tol * max(1, |lo|, |hi|)``; the midpoint of the final interval
    is returned.
    """
    if not hi > lo:
        raise BracketError(f"empty bracket [{lo}, {hi}]")
    a, b = lo, hi
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = fn(c), fn(d)
    tol = rel_tol * max(1.0, abs(lo), abs(hi))
    for _ in range(max_iter):
        if b - a <= tol:
            break
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = fn(d)
    return 0.5 * (a + b)


def bracket_decreasing(deriv: Callable[[float], float], start: float = 1.0,
                       lo_limit: float = 1e-200, hi_limit: float = 1e200) -> tuple[float, float]:
    """Bracket the sign change of a decreasing ``deriv`` by doubling/halving.

    Returns ``(lo, hi)`` with ``deriv(lo) > 0 >= deriv(hi)``.  Raises
    :class:`BracketError` when no sign change exists within the limits,
    i.e. no interior maximum can be bracketed.
    """
    if deriv(start) > 0.0:
        lo, hi = start, 2.0 * start
        while deriv(hi) > 0.0:
            lo = hi
            hi *= 2.0
            if hi > hi_limit:
                raise BracketError(
                    f"derivative still positive at {lo:.3e}; no interior maximum")
    else:
        hi, lo = start, 0.5 * start
        while deriv(lo) <= 0.0:
            hi = lo
            lo *= 0.5
            if lo < lo_limit:
                raise BracketError(
                    f"derivative non-positive down to {hi:.3e}; no interior maximum")
    return lo, hi
