"""Delay conditions: membership checks, consistency predicates and solvers.

Conventions used throughout:

* ``rise`` window of a parameter bundle is ``(d_r, m_r)`` (or ``(delta_r, mu_r)``),
  ``fall`` window is ``(d_f, m_f)``.
* ``erode(u, rise)`` is the "input was 1 long enough" function and
  ``erode(~u, fall)`` the "input was 0 long enough" function.

Every checker returns a :class:`CheckReport` which is truthy iff the pair is
accepted and otherwise carries the earliest violating instant.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional

from .errors import (
    ConsistencyViolated,
    InvalidWindow,
    NegativeDelay,
    PreconditionFailed,
)
from .sigcore import (
    Signal,
    StepFunction,
    TimeLike,
    _merged_times,
    as_time,
    eval_at,
    final_value,
    first_difference,
    first_violation,
    left_limit_at,
    make_signal,
    to_signal,
    translate,
)
from .windows import WindowSpec, dilate, erode


# --------------------------------------------------------------------------
# parameter bundles


def _check_pair(mem, delay, names):
    if not (0 <= mem <= delay):
        raise InvalidWindow(f"need 0 <= {names[0]} <= {names[1]}, got {names[0]}={mem}, {names[1]}={delay}")


def _fmt(*values) -> str:
    return ",".join(str(v) for v in values)


@dataclass(frozen=True)
class BdcParams:
    """Memories and delay upper bounds ``(m_r, d_r, m_f, d_f)`` of a bounded delay."""

    m_r: Fraction
    d_r: Fraction
    m_f: Fraction
    d_f: Fraction

    def __post_init__(self):
        for name in ("m_r", "d_r", "m_f", "d_f"):
            object.__setattr__(self, name, as_time(getattr(self, name)))
        _check_pair(self.m_r, self.d_r, ("m_r", "d_r"))
        _check_pair(self.m_f, self.d_f, ("m_f", "d_f"))

    @property
    def rise(self) -> WindowSpec:
        return WindowSpec(self.d_r, self.m_r)

    @property
    def fall(self) -> WindowSpec:
        return WindowSpec(self.d_f, self.m_f)

    def shifted(self, d: TimeLike) -> "BdcParams":
        d = as_time(d)
        return BdcParams(self.m_r, self.d_r + d, self.m_f, self.d_f + d)

    def __add__(self, other: "BdcParams") -> "BdcParams":
        return BdcParams(self.m_r + other.m_r, self.d_r + other.d_r,
                         self.m_f + other.m_f, self.d_f + other.d_f)

    def as_tuple(self):
        return (self.m_r, self.d_r, self.m_f, self.d_f)

    def __str__(self):
        return f"bdc({_fmt(*self.as_tuple())})"


@dataclass(frozen=True)
class RidcParams:
    """Inertia parameters ``(mu_r, delta_r, mu_f, delta_f)`` of a relative inertial delay."""

    mu_r: Fraction
    delta_r: Fraction
    mu_f: Fraction
    delta_f: Fraction

    def __post_init__(self):
        for name in ("mu_r", "delta_r", "mu_f", "delta_f"):
            object.__setattr__(self, name, as_time(getattr(self, name)))
        _check_pair(self.mu_r, self.delta_r, ("mu_r", "delta_r"))
        _check_pair(self.mu_f, self.delta_f, ("mu_f", "delta_f"))

    @property
    def rise(self) -> WindowSpec:
        return WindowSpec(self.delta_r, self.mu_r)

    @property
    def fall(self) -> WindowSpec:
        return WindowSpec(self.delta_f, self.mu_f)

    def shifted(self, d: TimeLike) -> "RidcParams":
        d = as_time(d)
        return RidcParams(self.mu_r, self.delta_r + d, self.mu_f, self.delta_f + d)

    def as_tuple(self):
        return (self.mu_r, self.delta_r, self.mu_f, self.delta_f)

    def as_bdc(self) -> BdcParams:
        return BdcParams(*self.as_tuple())

    def __str__(self):
        return f"ridc({_fmt(*self.as_tuple())})"


@dataclass(frozen=True)
class BridcParams:
    bdc: BdcParams
    ridc: RidcParams

    def shifted(self, d: TimeLike) -> "BridcParams":
        return BridcParams(self.bdc.shifted(d), self.ridc.shifted(d))

    def __str__(self):
        return f"bridc({_fmt(*self.bdc.as_tuple())};{_fmt(*self.ridc.as_tuple())})"


# --------------------------------------------------------------------------
# reports


@dataclass(frozen=True)
class Witness:
    time: Optional[Fraction]
    reason: str

    def __str__(self):
        where = "" if self.time is None else f"t={self.time}: "
        return where + self.reason


@dataclass(frozen=True)
class CheckReport:
    verdict: bool
    witness: Optional[Witness] = None

    def __post_init__(self):
        if not self.verdict and self.witness is None:
            raise ValueError("a negative report needs a witness")

    def __bool__(self):
        return self.verdict


ACCEPT = CheckReport(True)


def _reject(time, reason) -> CheckReport:
    return CheckReport(False, Witness(time, reason))


def _earliest(*reports: CheckReport) -> CheckReport:
    """Combine reports conjunctively, keeping the earliest located witness."""
    failed = [r for r in reports if not r.verdict]
    if not failed:
        return ACCEPT
    timed = [r for r in failed if r.witness.time is not None]
    if timed:
        return min(timed, key=lambda r: r.witness.time)
    return failed[0]


# --------------------------------------------------------------------------
# stability


def check_sc(u: Signal, x: Signal) -> CheckReport:
    """Stability: the output settles to the same final value as the input."""
    fu, fx = final_value(u), final_value(x)
    if fu == fx:
        return ACCEPT
    return _reject(None, f"stability violated: input settles to {fu}, output to {fx}")


# --------------------------------------------------------------------------
# bounded delays


def cc_violation(p: BdcParams) -> Optional[str]:
    """Message naming the first failed consistency inequality, or None."""
    if p.d_r - p.m_r > p.d_f:
        return f"CC violated: d_r - m_r > d_f ({p.d_r - p.m_r} > {p.d_f})"
    if p.d_f - p.m_f > p.d_r:
        return f"CC violated: d_f - m_f > d_r ({p.d_f - p.m_f} > {p.d_r})"
    return None


def cc_bdc(p: BdcParams) -> bool:
    """``d_r - m_r <= d_f`` and ``d_f - m_f <= d_r``."""
    return cc_violation(p) is None


def _require_cc(p: BdcParams):
    msg = cc_violation(p)
    if msg:
        raise ConsistencyViolated(msg)


@dataclass(frozen=True)
class CCWitness:
    """Input whose bounded-delay solution set is empty, with the instant proving it."""

    u: Signal
    t: Fraction


def cc_witness(p: BdcParams) -> Optional[CCWitness]:
    """Certificate that ``p`` is inconsistent, or None when CC holds.

    When CC fails, the rise window ``[t-d_r, t-d_r+m_r]`` and the fall window
    ``[t-d_f, t-d_f+m_f]`` are disjoint for every ``t``.  The returned input is
    1 on the first of them and 0 on the second (or vice versa), with the
    switch placed halfway through the gap, so that ``erode(u, rise)(t) = 1``
    while ``dilate(u, fall)(t) = 0``.
    """
    if cc_bdc(p):
        return None
    t = max(p.d_r, p.d_f) + 1
    rise_lo, rise_hi = t - p.d_r, t - p.d_r + p.m_r
    fall_lo, fall_hi = t - p.d_f, t - p.d_f + p.m_f
    if rise_hi < fall_lo:
        u = make_signal([(rise_lo, (rise_hi + fall_lo) / 2)])
    else:
        u = make_signal([((fall_hi + rise_lo) / 2, rise_hi + 1)])
    return CCWitness(u, t)


def check_bdc(u: Signal, p: BdcParams, x: Signal) -> CheckReport:
    """``erode(u, rise) <= x <= dilate(u, fall)`` everywhere."""
    lower = first_violation(erode(u, p.rise), x)
    upper = first_violation(x, dilate(u, p.fall))
    reports = []
    if lower is not None:
        reports.append(_reject(lower, "input was 1 over the whole rise window but output is 0"))
    if upper is not None:
        reports.append(_reject(upper, "output is 1 but input was 0 over the whole fall window"))
    return _earliest(*reports)


def bdc_solution(u: Signal, p: BdcParams, y: Signal) -> Signal:
    """The bounded-delay solution selected by ``y``.

    ``erode(u, rise) | (y & dilate(u, fall))``; as ``y`` ranges over all
    signals this ranges over the full solution set.
    """
    _require_cc(p)
    return to_signal(erode(u, p.rise) | (y & dilate(u, p.fall)))


# --------------------------------------------------------------------------
# fixed delays


def fdc_apply(u: Signal, d: TimeLike) -> Signal:
    d = as_time(d)
    if d < 0:
        raise NegativeDelay(f"fixed delay must be >= 0, got {d}")
    return to_signal(translate(u, d))


def check_fdc(u: Signal, d: TimeLike, x: Signal) -> CheckReport:
    t = first_difference(fdc_apply(u, d), x)
    if t is None:
        return ACCEPT
    return _reject(t, f"output differs from the input shifted by {as_time(d)}")


def check_constant_bounds(u: Signal, x: Signal, d_r: TimeLike, d_f: TimeLike) -> CheckReport:
    """Every rise of ``x`` at ``t`` has ``u(t-d_r)=1``; every fall has ``u(t-d_f)=0``."""
    d_r, d_f = as_time(d_r), as_time(d_f)
    if d_r < 0 or d_f < 0:
        raise NegativeDelay("constant delay bounds must be >= 0")
    for t in x.transitions:
        if eval_at(x, t):
            if not eval_at(u, t - d_r):
                return _reject(t, f"rising edge while u(t - {d_r}) = 0")
        elif eval_at(u, t - d_f):
            return _reject(t, f"falling edge while u(t - {d_f}) = 1")
    return ACCEPT


# --------------------------------------------------------------------------
# relative inertial delays


def nzc_violation(p: RidcParams) -> Optional[str]:
    if p.delta_r - p.mu_r > p.delta_f:
        return f"NZC violated: delta_r - mu_r > delta_f ({p.delta_r - p.mu_r} > {p.delta_f})"
    if p.delta_f - p.mu_f > p.delta_r:
        return f"NZC violated: delta_f - mu_f > delta_r ({p.delta_f - p.mu_f} > {p.delta_r})"
    return None


def nzc(p: RidcParams) -> bool:
    """Non-zenoness: ``delta_r - mu_r <= delta_f`` and ``delta_f - mu_f <= delta_r``."""
    return nzc_violation(p) is None


def nzc_trivial(p: RidcParams) -> bool:
    """Both non-zenoness inequalities hold with equality."""
    return p.delta_r - p.mu_r == p.delta_f and p.delta_f - p.mu_f == p.delta_r


def _edge_report(u: Signal, rise: WindowSpec, fall: WindowSpec, x: Signal) -> CheckReport:
    # the inequalities only bite at transitions of x
    ok_rise = erode(u, rise)
    ok_fall = erode(~u, fall)
    for t in x.transitions:
        if eval_at(x, t):
            if not eval_at(ok_rise, t):
                return _reject(t, "rising edge without the input being 1 over the rise window")
        elif not eval_at(ok_fall, t):
            return _reject(t, "falling edge without the input being 0 over the fall window")
    return ACCEPT


def check_ridc(u: Signal, p: RidcParams, x: Signal) -> CheckReport:
    """Stability plus: output edges only after sufficiently persistent input."""
    edges = _edge_report(u, p.rise, p.fall, x)
    if not edges:
        return edges
    return check_sc(u, x)


def check_ridc_pointwise(u: Signal, p: RidcParams, x: Signal, *, premultiplied: bool = False) -> CheckReport:
    """Reference RIDC check evaluating the edge inequalities at every event.

    With ``premultiplied`` the right-hand sides are multiplied by the
    complemented (resp. plain) left limit of ``x``, which is an equivalent
    formulation.  Used to cross-check :func:`check_ridc`.
    """
    ok_rise = erode(u, p.rise)
    ok_fall = erode(~u, p.fall)
    for t in _sample_points(u, x, ok_rise, ok_fall):
        xl, xv = left_limit_at(x, t), eval_at(x, t)
        a, b = eval_at(ok_rise, t), eval_at(ok_fall, t)
        up, down = (1 - xl) & xv, xl & (1 - xv)
        if premultiplied:
            a, b = (1 - xl) & a, xl & b
        if up > a:
            return _reject(t, "rising edge without the input being 1 over the rise window")
        if down > b:
            return _reject(t, "falling edge without the input being 0 over the fall window")
    return check_sc(u, x)


def edge_separation_check(u: Signal, p: RidcParams, x: Signal) -> CheckReport:
    """Consecutive opposite edges of an accepted output are strictly separated.

    A rise at ``d`` followed by a fall at ``d'`` needs
    ``d' - d > delta_f - delta_r + mu_r``; a fall followed by a rise needs
    ``d' - d > delta_r - delta_f + mu_f``.
    """
    msg = nzc_violation(p)
    if msg:
        raise PreconditionFailed(msg)
    if not check_ridc(u, p, x):
        raise PreconditionFailed("output is not accepted by the relative inertial delay condition")
    rise_gap = p.delta_f - p.delta_r + p.mu_r
    fall_gap = p.delta_r - p.delta_f + p.mu_f
    ts = x.transitions
    for d, d2 in zip(ts, ts[1:]):
        if eval_at(x, d):
            if not d2 - d > rise_gap:
                return _reject(d2, f"fall {d2 - d} after rise at {d}, needs > {rise_gap}")
        elif not d2 - d > fall_gap:
            return _reject(d2, f"rise {d2 - d} after fall at {d}, needs > {fall_gap}")
    return ACCEPT


# --------------------------------------------------------------------------
# bounded relative inertial delays


def bridc_disjuncts(p: BridcParams) -> Dict[str, bool]:
    """Truth value of each of the four alternative consistency chains."""
    m_r, d_r, m_f, d_f = p.bdc.as_tuple()
    mu_r, de_r, mu_f, de_f = p.ridc.as_tuple()

    def chain(*xs):
        return all(a <= b for a, b in zip(xs, xs[1:]))

    return {
        "a": chain(d_f - m_f, de_r, d_r, de_r - mu_r + m_r)
        and chain(d_r - m_r, de_f, d_f, de_f - mu_f + m_f),
        "b": chain(d_r - m_r + mu_r, de_r, d_f - m_f, d_r)
        and chain(d_f - m_f + mu_f, de_f, d_r - m_r, d_f),
        "c": chain(d_f - m_f, de_r, d_r - m_r + mu_r, d_r)
        and chain(d_r - m_r, de_f, d_f - m_f + mu_f, d_f),
        "d": chain(de_r, d_f - m_f, de_r + m_r - mu_r, d_r)
        and chain(de_f, d_r - m_r, de_f + m_f - mu_f, d_f),
    }


def cc_bridc(p: BridcParams) -> bool:
    return any(bridc_disjuncts(p).values())


def check_bridc(u: Signal, p: BridcParams, x: Signal) -> CheckReport:
    return _earliest(check_bdc(u, p.bdc, x), check_ridc(u, p.ridc, x))


# --------------------------------------------------------------------------
# deterministic relative inertial delays


def solve_dridc(u: Signal, p: BdcParams) -> Signal:
    """The unique output of the deterministic inertial delay with parameters ``p``.

    The output is set to 1 wherever the input has been 1 over the rise window,
    to 0 wherever it has been 0 over the fall window, and holds its previous
    value elsewhere.  Consistency guarantees the two conditions never fire
    together.
    """
    _require_cc(p)
    set_fn = erode(u, p.rise)
    reset_fn = erode(~u, p.fall)
    state = 0
    out: List[Fraction] = []
    for t in _merged_times(set_fn, reset_fn):
        s, r = eval_at(set_fn, t), eval_at(reset_fn, t)
        if s and r:
            raise ConsistencyViolated(f"set and reset both active at t={t}")
        new = 1 if s else 0 if r else state
        if new != state:
            out.append(t)
            state = new
    return Signal(0, out)


FORMS = ("a", "b", "c", "d", "e", "f")


def _sample_points(*fs: StepFunction) -> List[Fraction]:
    """Every event instant plus one point inside each open gap, and one beyond each end."""
    events = _merged_times(*fs)
    if not events:
        return [Fraction(0)]
    pts = [events[0] - 1]
    for t, nxt in zip(events, events[1:]):
        pts += [t, (t + nxt) / 2]
    pts += [events[-1], events[-1] + 1]
    return pts


def _form_holds(form: str, xl: int, xv: int, a: int, b: int, psi: int) -> bool:
    nxl, nxv, na, nb = 1 - xl, 1 - xv, 1 - a, 1 - b
    if form == "a":
        return nxl & xv == nxl & a and xl & nxv == xl & b
    if form == "b":
        return a <= xv and b <= nxv and (na & nb) <= ((nxl & nxv) | (xl & xv))
    if form == "c":
        expected = 1 if a else 0 if b else xl
        return xv == expected
    if form == "d":
        return xv == a | (xl & psi)
    if form == "e":
        return xl ^ xv == (nxl & a) | (xl & b)
    if form == "f":
        return ((nxl & xv & a) | (xl & nxv & b) | (nxl & nxv & na) | (xl & xv & nb)) == 1
    raise ValueError(f"unknown form {form!r}; expected one of {FORMS}")


def check_dridc_form(u: Signal, p: BdcParams, x: Signal, form: str) -> CheckReport:
    """Evaluate one of the six equivalent deterministic-inertial-delay systems.

    ``a``: edge equations; ``b``: three inequalities; ``c``: case definition;
    ``d``: recursion through the left limit; ``e``: derivative equation;
    ``f``: four-term disjunction equal to 1.
    """
    if form not in FORMS:
        raise ValueError(f"unknown form {form!r}; expected one of {FORMS}")
    _require_cc(p)
    a_fn = erode(u, p.rise)
    b_fn = erode(~u, p.fall)
    psi_fn = dilate(u, p.fall)
    for t in _sample_points(u, x, a_fn, b_fn, psi_fn):
        vals = (left_limit_at(x, t), eval_at(x, t), eval_at(a_fn, t), eval_at(b_fn, t), eval_at(psi_fn, t))
        if not _form_holds(form, *vals):
            return _reject(t, f"form {form} fails")
    return ACCEPT


# --------------------------------------------------------------------------
# min/max parameterization of bounded inertial delays


@dataclass(frozen=True)
class MinMaxParams:
    """Two-sided edge bounds: ``*_max`` windows force edges, ``*_min`` windows permit them."""

    m_r_min: Fraction
    d_r_min: Fraction
    m_r_max: Fraction
    d_r_max: Fraction
    m_f_min: Fraction
    d_f_min: Fraction
    m_f_max: Fraction
    d_f_max: Fraction

    def __post_init__(self):
        for name in self.__dataclass_fields__:
            object.__setattr__(self, name, as_time(getattr(self, name)))
        for side in ("r", "f"):
            for bound in ("min", "max"):
                _check_pair(getattr(self, f"m_{side}_{bound}"), getattr(self, f"d_{side}_{bound}"),
                            (f"m_{side}_{bound}", f"d_{side}_{bound}"))


def _chain_violation(labels_values) -> Optional[str]:
    for (la, a), (lb, b) in zip(labels_values, labels_values[1:]):
        if not a <= b:
            return f"{la} <= {lb} fails ({a} > {b})"
    return None


def _strengthened_violation(m_r, d_r, m_f, d_f, mu_r, de_r, mu_f, de_f, names) -> Optional[str]:
    n = names
    return (_chain_violation([(f"{n[3]} - {n[2]}", d_f - m_f), (f"{n[7]} - {n[6]}", de_f - mu_f),
                              (n[5], de_r), (n[1], d_r)])
            or _chain_violation([(f"{n[1]} - {n[0]}", d_r - m_r), (f"{n[5]} - {n[4]}", de_r - mu_r),
                                 (n[7], de_f), (n[3], d_f)]))


_A_NAMES = ("m_r", "d_r", "m_f", "d_f", "mu_r", "delta_r", "mu_f", "delta_f")
_B_NAMES = ("m_r_max", "d_r_max", "m_f_max", "d_f_max", "m_r_min", "d_r_min", "m_f_min", "d_f_min")


def to_min_max(p: BridcParams) -> MinMaxParams:
    """Rename bounded-inertial parameters into min/max form (inertial = min, bounded = max)."""
    values = p.bdc.as_tuple() + p.ridc.as_tuple()
    msg = _strengthened_violation(*values, names=_A_NAMES)
    if msg:
        raise PreconditionFailed(msg)
    m_r, d_r, m_f, d_f = p.bdc.as_tuple()
    mu_r, de_r, mu_f, de_f = p.ridc.as_tuple()
    return MinMaxParams(mu_r, de_r, m_r, d_r, mu_f, de_f, m_f, d_f)


def from_min_max(q: MinMaxParams) -> BridcParams:
    values = (q.m_r_max, q.d_r_max, q.m_f_max, q.d_f_max, q.m_r_min, q.d_r_min, q.m_f_min, q.d_f_min)
    msg = _strengthened_violation(*values, names=_B_NAMES)
    if msg:
        raise PreconditionFailed(msg)
    return BridcParams(BdcParams(*values[:4]), RidcParams(*values[4:]))


def check_min_max(u: Signal, q: MinMaxParams, x: Signal) -> CheckReport:
    """Two-sided edge inequalities of the min/max form, evaluated pointwise."""
    rise_max = erode(u, (q.d_r_max, q.m_r_max))
    rise_min = erode(u, (q.d_r_min, q.m_r_min))
    nu = ~u
    fall_max = erode(nu, (q.d_f_max, q.m_f_max))
    fall_min = erode(nu, (q.d_f_min, q.m_f_min))
    for t in _sample_points(u, x, rise_max, rise_min, fall_max, fall_min):
        xl, xv = left_limit_at(x, t), eval_at(x, t)
        nxl, nxv = 1 - xl, 1 - xv
        if not (nxl & eval_at(rise_max, t)) <= (nxl & xv) <= (nxl & eval_at(rise_min, t)):
            return _reject(t, "rising-edge bounds fail")
        if not (xl & eval_at(fall_max, t)) <= (xl & nxv) <= (xl & eval_at(fall_min, t)):
            return _reject(t, "falling-edge bounds fail")
    return ACCEPT
