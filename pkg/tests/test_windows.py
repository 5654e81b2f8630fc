from fractions import Fraction as Q

import pytest
from hypothesis import given
from hypothesis import strategies as st

from delaycalc.errors import InvalidWindow
from delaycalc.sigcore import ZERO, eval_at, left_limit_at, leq, make_signal, translate
from delaycalc.windows import WindowSpec, dilate, erode, erode_via_derivative

from oracles import brute_dilate, brute_erode, brute_window, grid
from strategies import signals, step_functions, windows

U3 = make_signal([(0, 2), (3, 4), (7, 9)])
P = make_signal([(0, 3)])


def test_erode_examples():
    assert erode(P, (3, 1)) == make_signal([(3, 5)])
    assert erode(U3, (2, 1)) == make_signal([(2, 3), (9, 10)])
    assert erode(U3, (4, 0)) == translate(U3, 4)


def test_erode_complement_has_rays():
    # the fall licence of the three-pulse input
    assert str(erode(~U3, (2, 1)).__repr__()) == "StepFunction(1, (-inf,1) [6,8) [11,inf))"


def test_dilate_examples():
    assert dilate(P, (3, 1)) == make_signal([(2, 6)])
    assert dilate(ZERO, (5, 2)) == ZERO
    assert dilate(U3, (3, 0)) == translate(U3, 3)


def test_derivative_route_examples():
    assert erode_via_derivative(P, (3, 1)) == make_signal([(3, 5)])
    assert erode_via_derivative(U3, (2, 0)) == translate(U3, 2)
    assert erode_via_derivative(ZERO, (2, 1)) == ZERO


@pytest.mark.parametrize("d,m", [(-1, 0), (1, -1), (1, 2)])
def test_invalid_windows(d, m):
    with pytest.raises(InvalidWindow):
        WindowSpec(d, m)
    with pytest.raises(InvalidWindow):
        erode(P, (d, m))


def test_pulse_cancellation_boundary():
    # transmitted iff strictly longer than the memory
    assert erode(make_signal([(0, 2)]), (3, 2)) == ZERO
    assert erode(make_signal([(0, Q(9, 4))]), (3, 2)) == make_signal([(3, Q(13, 4))])


@given(step_functions(), windows())
def test_matches_brute_force(u, w):
    d, m = w
    pts = grid(Q(-8), Q(20), Q(1, 8))
    e, g = erode(u, w), dilate(u, w)
    assert [eval_at(e, t) for t in pts] == brute_erode(u, d, m, pts, Q(1, 8))
    assert [eval_at(g, t) for t in pts] == brute_dilate(u, d, m, pts, Q(1, 8))


@given(step_functions(), windows())
def test_duality(u, w):
    assert dilate(u, w) == ~erode(~u, w)


@given(step_functions(), windows())
def test_derivative_route_agrees(u, w):
    assert erode_via_derivative(u, w) == erode(u, w)


@given(signals(), windows(), st.integers(0, 100))
def test_sandwich_around_translate(u, w, k):
    d, m = w
    dp = d - m * Q(k, 100)
    assert leq(erode(u, w), translate(u, dp))
    assert leq(translate(u, dp), dilate(u, w))


@given(signals(), windows())
def test_signals_stay_signals(u, w):
    assert erode(u, w).is_signal and dilate(u, w).is_signal


@given(signals(), windows())
def test_left_limits_at_transitions(u, w):
    # just before an edge of the erosion, the window [t-d, t-d+m) is what matters
    d, m = w
    step = Q(1, 8)
    e, g = erode(u, w), dilate(u, w)
    for t in e.transitions:
        run = all(eval_at(u, s) for s in grid(t - d, t - d + m, step)[:-1]) if m else True
        assert left_limit_at(e, t) == (left_limit_at(u, t - d) & int(run))
    for t in g.transitions:
        run = any(eval_at(u, s) for s in grid(t - d, t - d + m, step)[:-1]) if m else False
        assert left_limit_at(g, t) == (left_limit_at(u, t - d) | int(run))


@given(signals(), windows())
def test_single_window_probe(u, w):
    d, m = w
    for t in (Q(0), Q(5, 2), Q(7), Q(31, 4)):
        assert eval_at(erode(u, w), t) == brute_window(u, d, m, t, Q(1, 8))
