"""Delay elements as values: membership, application, serial connection.

Element kinds and the relation each one denotes:

=============  ==========================================================
``Wire``       identity
``Fixed(d)``   pure shift by ``d``
``FullBDE``    every output allowed by the bounded delay condition
``FullRIDE``   every output allowed by the relative inertial condition
``FullBRIDE``  conjunction of the two above
``DRIDE``      the unique deterministic inertial delay output
=============  ==========================================================

Library composition follows relation order: ``compose_params(outer, inner)``
is ``outer o inner``, i.e. ``inner`` is fed first.  :func:`chain_apply` and the
CLI take stages in signal-flow order instead.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Union

from .conditions import (
    BdcParams,
    BridcParams,
    CheckReport,
    RidcParams,
    Witness,
    bdc_solution,
    cc_bridc,
    cc_violation,
    check_bdc,
    check_bridc,
    check_dridc_form,
    check_fdc,
    check_ridc,
    nzc_violation,
    solve_dridc,
)
from .errors import ConsistencyViolated, NegativeDelay, Nondeterministic, NotClosed, Unsupported
from .sigcore import (
    Signal,
    as_time,
    eval_at,
    first_difference,
    left_limit_at,
    make_signal,
    rising_edges,
    falling_edges,
    support,
)
from .windows import dilate, erode


@dataclass(frozen=True)
class Wire:
    def __str__(self):
        return "wire"


@dataclass(frozen=True)
class Fixed:
    d: Fraction

    def __post_init__(self):
        d = as_time(self.d)
        if d < 0:
            raise NegativeDelay(f"fixed delay must be >= 0, got {d}")
        object.__setattr__(self, "d", d)

    def __str__(self):
        return f"fixed({self.d})"


@dataclass(frozen=True)
class FullBDE:
    params: BdcParams

    def __post_init__(self):
        msg = cc_violation(self.params)
        if msg:
            raise ConsistencyViolated(msg)

    def __str__(self):
        return "bde" + str(self.params)[3:]


@dataclass(frozen=True)
class FullRIDE:
    params: RidcParams

    def __post_init__(self):
        msg = nzc_violation(self.params)
        if msg:
            raise ConsistencyViolated(msg)

    def __str__(self):
        return "ride" + str(self.params)[4:]


@dataclass(frozen=True)
class FullBRIDE:
    params: BridcParams

    def __post_init__(self):
        if not cc_bridc(self.params):
            raise ConsistencyViolated("CC violated: none of the four consistency chains holds")

    def __str__(self):
        return "bride" + str(self.params)[5:]


@dataclass(frozen=True)
class DRIDE:
    params: BdcParams

    def __post_init__(self):
        msg = cc_violation(self.params)
        if msg:
            raise ConsistencyViolated(msg)

    def __str__(self):
        return "dride" + str(self.params)[3:]


DelayElement = Union[Wire, Fixed, FullBDE, FullRIDE, FullBRIDE, DRIDE]
DETERMINISTIC = (Wire, Fixed, DRIDE)
INERTIAL = (FullRIDE, FullBRIDE, DRIDE)


def membership(e: DelayElement, u: Signal, x: Signal) -> CheckReport:
    """Whether ``(u, x)`` belongs to the relation denoted by ``e``."""
    if isinstance(e, Wire):
        return check_fdc(u, 0, x)
    if isinstance(e, Fixed):
        return check_fdc(u, e.d, x)
    if isinstance(e, FullBDE):
        return check_bdc(u, e.params, x)
    if isinstance(e, FullRIDE):
        return check_ridc(u, e.params, x)
    if isinstance(e, FullBRIDE):
        return check_bridc(u, e.params, x)
    if isinstance(e, DRIDE):
        t = first_difference(solve_dridc(u, e.params), x)
        if t is None:
            return CheckReport(True)
        return CheckReport(False, Witness(t, "output differs from the unique inertial delay solution"))
    raise TypeError(f"not a delay element: {e!r}")


def apply_deterministic(e: DelayElement, u: Signal) -> Signal:
    """The unique output of a deterministic element."""
    if isinstance(e, Wire):
        return u
    if isinstance(e, Fixed):
        return make_signal((a + e.d, None if b is None else b + e.d) for a, b in support(u))
    if isinstance(e, DRIDE):
        return solve_dridc(u, e.params)
    raise Nondeterministic(f"{e} relates each input to a set of outputs")


def _selector_grid(u: Signal, p: BdcParams) -> List[Fraction]:
    pts = sorted(set(erode(u, p.rise).transitions) | set(dilate(u, p.fall).transitions))
    mids = [(a + b) / 2 for a, b in zip(pts, pts[1:])]
    return sorted(set(pts) | set(mids))


def sample(e: DelayElement, u: Signal, seed: int) -> Signal:
    """Draw one output of a full bounded delay element, reproducibly.

    A selector signal is drawn on the grid formed by the transitions of the
    erosion and dilation of ``u`` and their midpoints.  Seed 0 selects the
    all-zero selector, i.e. the minimum solution.
    """
    if isinstance(e, DETERMINISTIC):
        return apply_deterministic(e, u)
    if not isinstance(e, FullBDE):
        raise Unsupported(f"cannot sample {e}: no representation of its solution set")
    if seed == 0:
        return bdc_solution(u, e.params, Signal())
    rng = random.Random(seed)
    grid = _selector_grid(u, e.params)
    cells = []
    for i, a in enumerate(grid):
        if rng.random() < 0.5:
            cells.append((a, grid[i + 1] if i + 1 < len(grid) else None))
    return bdc_solution(u, e.params, make_signal(cells))


def _bde_envelope(e: DelayElement) -> Optional[BdcParams]:
    if isinstance(e, Wire):
        return BdcParams(0, 0, 0, 0)
    if isinstance(e, Fixed):
        return BdcParams(0, e.d, 0, e.d)
    if isinstance(e, (FullBDE, DRIDE)):
        return e.params
    if isinstance(e, FullBRIDE):
        return e.params.bdc
    return None


def _shift(e: DelayElement, d: Fraction) -> DelayElement:
    if isinstance(e, Fixed):
        return Fixed(e.d + d)
    if isinstance(e, FullBDE):
        return FullBDE(e.params.shifted(d))
    if isinstance(e, FullRIDE):
        return FullRIDE(e.params.shifted(d))
    if isinstance(e, FullBRIDE):
        return FullBRIDE(e.params.shifted(d))
    if isinstance(e, DRIDE):
        return DRIDE(e.params.shifted(d))
    raise TypeError(e)


def compose_params(outer: DelayElement, inner: DelayElement) -> DelayElement:
    """Single element for the serial connection ``outer o inner`` (``inner`` first).

    Exact for wires, fixed delays, and any element shifted by a fixed delay.
    For bounded delays the result is the full element with summed parameters,
    which contains the connection.  Inertial elements are not closed under
    connection: :class:`NotClosed` is raised, carrying the bounded envelope
    when both operands have one.
    """
    if isinstance(outer, Wire):
        return inner
    if isinstance(inner, Wire):
        return outer
    if isinstance(outer, Fixed) and isinstance(inner, Fixed):
        return Fixed(outer.d + inner.d)
    if isinstance(inner, Fixed):
        return _shift(outer, inner.d)
    if isinstance(outer, Fixed):
        return _shift(inner, outer.d)
    env_outer, env_inner = _bde_envelope(outer), _bde_envelope(inner)
    envelope = FullBDE(env_outer + env_inner) if env_outer is not None and env_inner is not None else None
    if isinstance(outer, INERTIAL) and isinstance(inner, INERTIAL):
        raise NotClosed(f"{inner} followed by {outer} is not an inertial delay element", envelope)
    if isinstance(outer, FullRIDE) or isinstance(inner, FullRIDE):
        raise NotClosed(f"no closed form for {inner} followed by {outer}", envelope)
    return envelope


@dataclass(frozen=True)
class Stage:
    element: DelayElement
    input: Signal
    output: Signal
    verdict: CheckReport


@dataclass(frozen=True)
class CompositionReport:
    input: Signal
    stages: List[Stage] = field(default_factory=list)

    @property
    def output(self) -> Signal:
        return self.stages[-1].output if self.stages else self.input

    @property
    def intermediates(self) -> List[Signal]:
        return [s.output for s in self.stages[:-1]]

    @property
    def ok(self) -> bool:
        return all(s.verdict for s in self.stages)


def _stage_seeds(seed: int, n: int) -> List[int]:
    if seed == 0:
        return [0] * n
    rng = random.Random(seed)
    return [rng.randrange(1, 2**31) for _ in range(n)]


def chain_apply(elements: Sequence[DelayElement], u: Signal, seed: int = 0) -> CompositionReport:
    """Thread ``u`` through ``elements`` in signal-flow order, recording every stage."""
    stages = []
    current = u
    for e, s in zip(elements, _stage_seeds(seed, len(elements))):
        out = sample(e, current, s)
        stages.append(Stage(e, current, out, membership(e, current, out)))
        current = out
    return CompositionReport(u, stages)


def fold_chain(elements: Sequence[DelayElement]):
    """Fold a signal-flow chain into one element.

    Returns ``(element, closed)``.  Once a step is not closed, folding
    continues on the bounded envelope and ``closed`` is False; ``element`` is
    None when no envelope exists.
    """
    acc: Optional[DelayElement] = Wire()
    closed = True
    for e in elements:
        try:
            acc = compose_params(e, acc)
        except NotClosed as exc:
            closed = False
            acc = exc.envelope
            if acc is None:
                return None, False
    return acc, closed


# --------------------------------------------------------------------------
# the non-closure counterexample


@dataclass(frozen=True)
class Bound:
    """Constraint on the common memory ``mu`` of a symmetric model."""

    source: str
    relation: str  # "<" or ">="
    value: Fraction

    def admits(self, mu: Fraction) -> bool:
        return mu < self.value if self.relation == "<" else mu >= self.value

    def __str__(self):
        return f"mu {self.relation} {self.value}  ({self.source})"


@dataclass(frozen=True)
class CounterexampleReport:
    u: Signal
    x: Signal
    y: Signal
    first: DRIDE
    second: DRIDE
    delta: Fraction
    rise_at_5: bool
    fall_at_9: bool
    no_rise_at_12: bool
    bounds: List[Bound]
    contradiction: bool
    swept_memories: List[Fraction]
    swept_rejected: bool
    grid_matches: List[BdcParams]

    @property
    def confirmed(self) -> bool:
        return (self.rise_at_5 and self.fall_at_9 and self.no_rise_at_12 and self.contradiction
                and self.swept_rejected and not self.grid_matches)


def _run_after(f: Signal, t: Fraction) -> Fraction:
    """Length of the constancy run of ``f`` starting at ``t`` (inf as None)."""
    for s in f.transitions:
        if s > t:
            return s - t
    return None


def _memory_bound_for_window(level_fn, t: Fraction, delta: Fraction, fires: bool, source: str) -> Bound:
    """Bound on mu making ``[t - delta, t - delta + mu]`` all-ones in ``level_fn`` (or not)."""
    start = t - delta
    if not eval_at(level_fn, start):
        # window can never be all-ones
        return Bound(source, "<" if fires else ">=", Fraction(0))
    run = _run_after(level_fn, start)
    if run is None:
        raise ValueError("unbounded run: no constraint on mu")
    return Bound(source, "<" if fires else ">=", run)


def ride_composition_counterexample(delta: Fraction = Fraction(5)) -> CounterexampleReport:
    """Two inertial delays whose series connection no symmetric inertial delay reproduces.

    Runs ``dride(1,2,1,2)`` then ``dride(2,3,2,3)`` on ``[0,2) [3,4) [7,9)`` and
    derives the constraints a single ``dride(mu,delta,mu,delta)`` would face:
    the rise of the result at 5 forces ``mu < 2`` while the missing rise at 12
    forces ``mu >= 2``.
    """
    delta = Fraction(delta)
    u = make_signal([(0, 2), (3, 4), (7, 9)])
    first, second = DRIDE(BdcParams(1, 2, 1, 2)), DRIDE(BdcParams(2, 3, 2, 3))
    x = apply_deterministic(first, u)
    y = apply_deterministic(second, x)
    t5, t9, t12 = Fraction(5), Fraction(9), Fraction(12)
    rise_at_5 = t5 in rising_edges(y)
    fall_at_9 = t9 in falling_edges(y)
    no_rise_at_12 = left_limit_at(y, t12) == 0 and eval_at(y, t12) == 0
    nu = ~u
    bounds = [
        _memory_bound_for_window(u, t5, delta, True, "rising edge at t=5"),
        _memory_bound_for_window(nu, t9, delta, True, "falling edge at t=9"),
        _memory_bound_for_window(u, t12, delta, False, "no rising edge at t=12"),
    ]
    # the set of mu admitted by all bounds is an interval [lo, hi)
    lo = max((b.value for b in bounds if b.relation == ">="), default=Fraction(0))
    hi = min((b.value for b in bounds if b.relation == "<"), default=None)
    contradiction = hi is not None and hi <= lo
    swept = [Fraction(0), Fraction(1), Fraction(3, 2)]
    swept_rejected = all(not check_dridc_form(u, BdcParams(mu, delta, mu, delta), y, "a") for mu in swept)
    quarter = Fraction(1, 4)
    matches = []
    for dk in range(0, 13 * 4):
        dd = dk * quarter
        for mk in range(0, dk + 1):
            p = BdcParams(mk * quarter, dd, mk * quarter, dd)
            if solve_dridc(u, p) == y:
                matches.append(p)
    return CounterexampleReport(u, x, y, first, second, delta, rise_at_5, fall_at_9, no_rise_at_12,
                                bounds, contradiction, swept, swept_rejected, matches)
