"""Sliding closed-window infimum and supremum of step functions.

For a window ``(d, m)`` with ``0 <= m <= d``:

* ``erode(u)(t) = 1`` iff ``u`` is 1 on all of ``[t - d, t - d + m]``
* ``dilate(u)(t) = 1`` iff ``u`` is 1 somewhere on ``[t - d, t - d + m]``

Because constancy intervals are half open, a maximal 1-run ``[a, b)`` of
``u`` erodes to ``[a + d, b + d - m)`` (empty unless ``b - a > m``) and
dilates to ``[a + d - m, b + d)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Tuple, Union

from .errors import InvalidWindow
from .sigcore import (
    IntervalSet,
    StepFunction,
    TimeLike,
    as_time,
    indicator,
    support,
    translate,
)


@dataclass(frozen=True)
class WindowSpec:
    """Window ``[t - d, t - d + m]``: offset ``d`` and width ``m``."""

    d: Fraction
    m: Fraction

    def __post_init__(self):
        d, m = as_time(self.d), as_time(self.m)
        if m < 0 or d < 0 or m > d:
            raise InvalidWindow(f"window needs 0 <= m <= d, got d={d}, m={m}")
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "m", m)


WindowLike = Union[WindowSpec, Tuple[TimeLike, TimeLike]]


def as_window(w: WindowLike) -> WindowSpec:
    if isinstance(w, WindowSpec):
        return w
    d, m = w
    return WindowSpec(d, m)


def _shift(bound, k):
    return None if bound is None else bound + k


def erode(u: StepFunction, window: WindowLike) -> StepFunction:
    """Closed-window infimum; a pulse survives only if strictly longer than ``m``.

    >>> from delaycalc.sigcore import make_signal
    >>> erode(make_signal([(0, 3)]), (3, 1))
    Signal([3,5))
    """
    w = as_window(window)
    parts = []
    for a, b in support(u):
        if a is not None and b is not None and b - a <= w.m:
            continue
        parts.append((_shift(a, w.d), _shift(b, w.d - w.m)))
    return indicator(IntervalSet.union(parts))


def dilate(u: StepFunction, window: WindowLike) -> StepFunction:
    """Closed-window supremum."""
    w = as_window(window)
    parts = [(_shift(a, w.d - w.m), _shift(b, w.d)) for a, b in support(u)]
    return indicator(IntervalSet.union(parts))


def erode_via_derivative(u: StepFunction, window: WindowLike) -> StepFunction:
    """Erosion computed from the transitions of ``u`` instead of its 1-runs.

    The result is 1 at ``t`` iff ``u(t - d + m) = 1`` and ``u`` has no
    transition in the half-open window ``(t - d, t - d + m]``.
    """
    w = as_window(window)
    end_value = translate(u, w.d - w.m)
    if w.m == 0:
        return end_value
    # a transition at tau lies in (t-d, t-d+m] exactly for t in [tau+d-m, tau+d)
    switching = indicator(IntervalSet.union((tau + w.d - w.m, tau + w.d) for tau in u.transitions))
    return end_value & ~switching
