"""Exact right-continuous step functions R -> {0, 1}.

A :class:`StepFunction` is stored as its value on ``(-inf, t_0)`` plus the
strictly increasing tuple of instants ``t_0 < t_1 < ...`` at which it toggles.
The value *at* a toggle instant is the new value, so every function built here
is right continuous and has left and right limits everywhere.

A :class:`Signal` is a step function that is 0 before time 0.  Operations
return a ``Signal`` whenever the result satisfies that invariant and a plain
``StepFunction`` otherwise, so ``~u`` of a signal ``u`` is a ``StepFunction``.

All time values are :class:`fractions.Fraction`; floats are rejected.
"""
from __future__ import annotations

import bisect
import enum
import heapq
import numbers
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Tuple, Union

from .errors import NegativeSupport

TimeLike = Union[int, str, Fraction, numbers.Rational]
# None stands for -inf on the left of an interval and +inf on the right.
Bound = Optional[Fraction]


def as_time(value: TimeLike) -> Fraction:
    """Coerce ``value`` to an exact rational time.

    >>> as_time("3/4") + as_time(1)
    Fraction(7, 4)
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool) or isinstance(value, float):
        raise TypeError(f"time values must be exact, got {value!r}")
    if isinstance(value, (int, numbers.Rational, str)):
        return Fraction(value)
    # Decimal and friends
    try:
        return Fraction(value)
    except TypeError:
        raise TypeError(f"cannot interpret {value!r} as a time") from None


def format_time(t: Bound, *, side: str = "right") -> str:
    if t is None:
        return "-inf" if side == "left" else "inf"
    return str(t)


@dataclass(frozen=True)
class IntervalSet:
    """Sorted, disjoint, maximal union of half-open intervals ``[a, b)``.

    A left bound of None means the interval is unbounded below, a right
    bound of None means unbounded above.  Use :meth:`union` to normalize an
    arbitrary collection of intervals.
    """

    intervals: Tuple[Tuple[Bound, Bound], ...] = ()

    def __post_init__(self):
        ivs = tuple((None if a is None else as_time(a), None if b is None else as_time(b))
                    for a, b in self.intervals)
        object.__setattr__(self, "intervals", ivs)
        prev_end: Bound = None
        for i, (a, b) in enumerate(ivs):
            if a is not None and b is not None and not a < b:
                raise ValueError(f"empty or reversed interval [{a},{b})")
            if i > 0:
                if a is None or prev_end is None or not prev_end < a:
                    raise ValueError("intervals must be sorted, disjoint and non-adjacent")
            prev_end = b

    @classmethod
    def union(cls, pairs: Iterable[Tuple[Optional[TimeLike], Optional[TimeLike]]]) -> "IntervalSet":
        """Normalize any finite collection of ``[a, b)`` intervals; empty ones are dropped."""
        ivs = []
        for a, b in pairs:
            a = None if a is None else as_time(a)
            b = None if b is None else as_time(b)
            if a is not None and b is not None and not a < b:
                continue
            ivs.append((a, b))
        ivs.sort(key=lambda ab: (ab[0] is not None, ab[0] if ab[0] is not None else 0))
        merged: list = []
        for a, b in ivs:
            if merged:
                pa, pb = merged[-1]
                if pb is None:
                    continue
                if a is None or a <= pb:
                    merged[-1] = (pa, None if b is None else max(pb, b))
                    continue
            merged.append((a, b))
        return cls(tuple(merged))

    def __iter__(self):
        return iter(self.intervals)

    def __len__(self):
        return len(self.intervals)

    def __contains__(self, t) -> bool:
        t = as_time(t)
        return any((a is None or a <= t) and (b is None or t < b) for a, b in self.intervals)

    def endpoints(self) -> Tuple[Fraction, ...]:
        return tuple(x for ab in self.intervals for x in ab if x is not None)

    def __str__(self):
        if not self.intervals:
            return "empty"
        return " ".join(f"{'(' if a is None else '['}{format_time(a, side='left')},{format_time(b)})"
                        for a, b in self.intervals)


@dataclass(frozen=True, eq=False)
class StepFunction:
    """Right-continuous piecewise-constant binary function of real time."""

    initial: int
    transitions: Tuple[Fraction, ...] = ()

    def __post_init__(self):
        if self.initial not in (0, 1):
            raise ValueError("initial value must be 0 or 1")
        ts = tuple(as_time(t) for t in self.transitions)
        if any(not a < b for a, b in zip(ts, ts[1:])):
            raise ValueError("transitions must be strictly increasing")
        object.__setattr__(self, "initial", int(self.initial))
        object.__setattr__(self, "transitions", ts)

    # Equality is structural and ignores the Signal/StepFunction distinction,
    # which is itself a function of the structure.
    def __eq__(self, other):
        if not isinstance(other, StepFunction):
            return NotImplemented
        return self.initial == other.initial and self.transitions == other.transitions

    def __hash__(self):
        return hash((self.initial, self.transitions))

    def __call__(self, t: TimeLike) -> int:
        return eval_at(self, t)

    def __invert__(self):
        return combine(BoolOp.NOT, self)

    def __and__(self, other):
        return combine(BoolOp.AND, self, other)

    def __or__(self, other):
        return combine(BoolOp.OR, self, other)

    def __xor__(self, other):
        return combine(BoolOp.XOR, self, other)

    @property
    def is_signal(self) -> bool:
        return self.initial == 0 and (not self.transitions or self.transitions[0] >= 0)

    def __repr__(self):
        return f"{type(self).__name__}({self.initial}, {support(self)})"


class Signal(StepFunction):
    """Step function that vanishes before time 0 (an element of the set S)."""

    def __init__(self, initial: int = 0, transitions: Iterable[TimeLike] = ()):
        super().__init__(initial, tuple(transitions))

    def __post_init__(self):
        super().__post_init__()
        if not self.is_signal:
            raise NegativeSupport(f"support of {support(StepFunction(self.initial, self.transitions))} "
                                  "is not contained in [0, inf)")

    def __repr__(self):
        return f"Signal({support(self)})"


ZERO = Signal()


def _promote(initial: int, transitions: Tuple[Fraction, ...]) -> StepFunction:
    if initial == 0 and (not transitions or transitions[0] >= 0):
        return Signal(0, transitions)
    return StepFunction(initial, transitions)


def from_toggles(initial: int, toggles: Iterable[TimeLike]) -> StepFunction:
    """Build from an unsorted multiset of toggle instants; repeated toggles cancel."""
    parity: dict = {}
    for t in toggles:
        t = as_time(t)
        parity[t] = parity.get(t, 0) ^ 1
    return _promote(int(initial), tuple(sorted(t for t, p in parity.items() if p)))


def to_signal(f: StepFunction) -> Signal:
    """Return ``f`` as a :class:`Signal` or raise :class:`NegativeSupport`."""
    if isinstance(f, Signal):
        return f
    return Signal(f.initial, f.transitions)


def indicator(ones: Union[IntervalSet, Iterable]) -> StepFunction:
    """Characteristic function of a finite union of ``[a, b)`` intervals."""
    if not isinstance(ones, IntervalSet):
        ones = IntervalSet.union(ones)
    initial = 0
    toggles = []
    for a, b in ones:
        if a is None:
            initial = 1
        else:
            toggles.append(a)
        if b is not None:
            toggles.append(b)
    return _promote(initial, tuple(toggles))


def make_signal(ones: Union[IntervalSet, Iterable] = ()) -> Signal:
    """Signal equal to 1 exactly on ``ones``.

    >>> make_signal([(0, 2), (3, 4)]).transitions
    (Fraction(0, 1), Fraction(2, 1), Fraction(3, 1), Fraction(4, 1))
    """
    if not isinstance(ones, IntervalSet):
        ones = IntervalSet.union(ones)
    for a, _ in ones:
        if a is None or a < 0:
            raise NegativeSupport(f"interval starting at {format_time(a, side='left')} lies before 0")
    return to_signal(indicator(ones))


def support(f: StepFunction) -> IntervalSet:
    """The set where ``f`` equals 1, as an :class:`IntervalSet`."""
    out = []
    start: Bound = None
    value = f.initial
    for t in f.transitions:
        value ^= 1
        if value:
            start = t
        else:
            out.append((start, t))
    if value:
        out.append((start, None))
    return IntervalSet(tuple(out))


def eval_at(f: StepFunction, t: TimeLike) -> int:
    """Value of ``f`` at ``t``; at a transition instant this is the new value."""
    n = bisect.bisect_right(f.transitions, as_time(t))
    return f.initial ^ (n & 1)


def left_limit_at(f: StepFunction, t: TimeLike) -> int:
    """Value of ``f`` on ``(t - eps, t)`` for all small ``eps``."""
    n = bisect.bisect_left(f.transitions, as_time(t))
    return f.initial ^ (n & 1)


def final_value(f: StepFunction) -> int:
    """Limit of ``f`` at +inf (always exists for finitely many transitions)."""
    return f.initial ^ (len(f.transitions) & 1)


def derivative_set(f: StepFunction) -> Tuple[Fraction, ...]:
    """Instants where ``f(t-0) != f(t)``, sorted.  The right derivative is 0 by construction."""
    return f.transitions


def rising_edges(f: StepFunction) -> Tuple[Fraction, ...]:
    start = 0 if f.initial == 0 else 1
    return f.transitions[start::2]


def falling_edges(f: StepFunction) -> Tuple[Fraction, ...]:
    start = 0 if f.initial == 1 else 1
    return f.transitions[start::2]


class BoolOp(enum.Enum):
    NOT = "not"
    AND = "and"
    OR = "or"
    XOR = "xor"


_BINARY = {
    BoolOp.AND: lambda a, b: a & b,
    BoolOp.OR: lambda a, b: a | b,
    BoolOp.XOR: lambda a, b: a ^ b,
}


def _merged_times(*fs: StepFunction):
    out = []
    for t in heapq.merge(*(f.transitions for f in fs)):
        if not out or out[-1] != t:
            out.append(t)
    return out


def combine(op, f: StepFunction, g: Optional[StepFunction] = None) -> StepFunction:
    """Pointwise Boolean combination, canonicalized.

    ``op`` is a :class:`BoolOp` or its name (``"not"``, ``"and"``, ...).
    """
    op = BoolOp(op.lower()) if isinstance(op, str) else BoolOp(op)
    if op is BoolOp.NOT:
        if g is not None:
            raise TypeError("NOT takes a single operand")
        return _promote(f.initial ^ 1, f.transitions)
    if g is None:
        raise TypeError(f"{op.name} takes two operands")
    fn = _BINARY[op]
    if op is BoolOp.XOR:
        return from_toggles(f.initial ^ g.initial, f.transitions + g.transitions)
    value = fn(f.initial, g.initial)
    initial = value
    out = []
    vf, vg = f.initial, g.initial
    tf, tg = set(f.transitions), set(g.transitions)
    for t in _merged_times(f, g):
        if t in tf:
            vf ^= 1
        if t in tg:
            vg ^= 1
        v = fn(vf, vg)
        if v != value:
            out.append(t)
            value = v
    return _promote(initial, tuple(out))


def first_violation(f: StepFunction, g: StepFunction) -> Optional[Fraction]:
    """Earliest instant with ``f(t) = 1`` and ``g(t) = 0``, or None if ``f <= g``.

    When the violation already holds on ``(-inf, t0)`` a point inside that ray
    is returned.
    """
    if f.initial and not g.initial:
        ts = f.transitions + g.transitions
        return (min(ts) - 1) if ts else Fraction(0)
    vf, vg = f.initial, g.initial
    tf, tg = set(f.transitions), set(g.transitions)
    for t in _merged_times(f, g):
        if t in tf:
            vf ^= 1
        if t in tg:
            vg ^= 1
        if vf and not vg:
            return t
    return None


def first_difference(f: StepFunction, g: StepFunction) -> Optional[Fraction]:
    """Earliest instant where ``f`` and ``g`` differ, or None if equal."""
    d = combine(BoolOp.XOR, f, g)
    return first_violation(d, ZERO)


def leq(f: StepFunction, g: StepFunction) -> bool:
    """``f(t) <= g(t)`` for every real ``t`` (exact sweep over the merged transitions)."""
    return first_violation(f, g) is None


def translate(f: StepFunction, d: TimeLike) -> StepFunction:
    """``t -> f(t - d)``.  A signal shifted by ``d >= 0`` is again a signal."""
    d = as_time(d)
    return _promote(f.initial, tuple(t + d for t in f.transitions))
