from fractions import Fraction as Q

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from delaycalc.conditions import (
    FORMS,
    BdcParams,
    BridcParams,
    MinMaxParams,
    RidcParams,
    bdc_solution,
    bridc_disjuncts,
    cc_bdc,
    cc_bridc,
    cc_violation,
    cc_witness,
    check_bdc,
    check_bridc,
    check_constant_bounds,
    check_dridc_form,
    check_fdc,
    check_min_max,
    check_ridc,
    check_ridc_pointwise,
    check_sc,
    edge_separation_check,
    fdc_apply,
    from_min_max,
    nzc,
    nzc_trivial,
    solve_dridc,
    to_min_max,
)
from delaycalc.errors import ConsistencyViolated, InvalidWindow, NegativeDelay, PreconditionFailed
from delaycalc.sigcore import ZERO, Signal, eval_at, left_limit_at, make_signal, translate
from delaycalc.windows import dilate, erode

from oracles import simulate_recursion, toggle
from strategies import bdc_params, ridc_params, signals

U3 = make_signal([(0, 2), (3, 4), (7, 9)])
X3 = make_signal([(2, 6), (9, 11)])
P = make_signal([(0, 3)])
B1212 = BdcParams(1, 2, 1, 2)


def S(*pairs):
    return make_signal(pairs)


# --------------------------------------------------------------------------
# parameters


def test_bundle_validation():
    with pytest.raises(InvalidWindow):
        BdcParams(3, 2, 0, 1)
    with pytest.raises(InvalidWindow):
        RidcParams(0, 1, -1, 1)


def test_param_strings_and_arith():
    assert str(B1212) == "bdc(1,2,1,2)"
    assert B1212 + BdcParams(2, 3, 2, 3) == BdcParams(3, 5, 3, 5)
    assert B1212.shifted(3) == BdcParams(1, 5, 1, 5)
    assert str(BridcParams(BdcParams(4, 8, 4, 8), RidcParams(1, 6, 1, 6))) == "bridc(4,8,4,8;1,6,1,6)"


# --------------------------------------------------------------------------
# stability and bounded delays


def test_sc_examples():
    assert check_sc(P, S((3, 5)))
    r = check_sc(P, Signal(0, (Q(2),)))
    assert not r and r.witness is not None
    assert check_sc(ZERO, ZERO)


@pytest.mark.parametrize("p,ok", [((1, 2, 1, 2), True), ((0, 3, 0, 1), False), ((0, 7, 0, 7), True)])
def test_cc_examples(p, ok):
    assert cc_bdc(BdcParams(*p)) is ok


def test_cc_message_names_inequality():
    assert cc_violation(BdcParams(0, 3, 0, 1)) == "CC violated: d_r - m_r > d_f (3 > 1)"


def test_cc_witness_examples():
    w = cc_witness(BdcParams(0, 3, 0, 1))
    assert w.u == S((1, 2)) and w.t == 4
    assert cc_witness(B1212) is None
    p = BdcParams(0, 5, 0, 1)
    w = cc_witness(p)
    assert eval_at(erode(w.u, p.rise), w.t) == 1 and eval_at(dilate(w.u, p.fall), w.t) == 0


def test_check_bdc_examples():
    p = BdcParams(1, 3, 1, 3)
    assert check_bdc(P, p, S((3, 5)))
    assert check_bdc(P, p, S((2, 6)))
    r = check_bdc(P, p, S((0, 1)))
    assert not r and r.witness.time == 0


def test_bdc_solution_examples():
    p = BdcParams(1, 3, 1, 3)
    assert bdc_solution(P, p, ZERO) == S((3, 5))
    assert bdc_solution(P, p, S((0, None))) == S((2, 6))
    assert bdc_solution(P, p, S((0, 4))) == S((2, 5))
    with pytest.raises(ConsistencyViolated):
        bdc_solution(P, BdcParams(0, 3, 0, 1), ZERO)


def test_fdc_examples():
    assert fdc_apply(P, 2) == S((2, 5))
    assert check_fdc(P, 2, S((2, 5)))
    assert not check_fdc(P, 2, S((3, 5)))
    with pytest.raises(NegativeDelay):
        fdc_apply(P, -1)


def test_constant_bounds_examples():
    assert check_constant_bounds(P, translate(P, 2), 2, 2)
    assert check_constant_bounds(U3, X3, 2, 2)
    assert not check_constant_bounds(P, S((1, 2)), 5, 5)


@settings(max_examples=60)
@given(signals(), bdc_params(), signals())
def test_generated_solutions_are_members(u, p, y):
    x = bdc_solution(u, p, y)
    assert check_bdc(u, p, x) and check_sc(u, x)


@settings(max_examples=60)
@given(signals(), bdc_params())
def test_fixed_delay_inside_bounds(u, p):
    lo, hi = max(p.d_r - p.m_r, p.d_f - p.m_f), min(p.d_r, p.d_f)
    if lo <= hi:
        assert check_bdc(u, p, fdc_apply(u, (lo + hi) / 2))


@settings(max_examples=60)
@given(signals(), bdc_params(), signals())
def test_left_limit_sandwich(u, p, y):
    # at every event the left limit of x sits between those of the two bounds
    x = bdc_solution(u, p, y)
    lo, hi = erode(u, p.rise), dilate(u, p.fall)
    for t in sorted(set(x.transitions) | set(lo.transitions) | set(hi.transitions)):
        assert left_limit_at(lo, t) <= left_limit_at(x, t) <= left_limit_at(hi, t)


# --------------------------------------------------------------------------
# relative inertial delays


@pytest.mark.parametrize("p,ok,trivial", [((1, 2, 1, 2), True, False), ((1, 10, 1, 2), False, False),
                                          ((0, 4, 0, 4), True, True)])
def test_nzc_examples(p, ok, trivial):
    assert nzc(RidcParams(*p)) is ok
    assert nzc_trivial(RidcParams(*p)) is trivial


def test_check_ridc_examples():
    p = RidcParams(1, 2, 1, 2)
    assert check_ridc(U3, p, X3)
    r = check_ridc(U3, p, S((1, 6)))
    assert not r and r.witness.time == 1
    assert check_ridc(ZERO, p, ZERO)


def test_edge_separation_examples():
    p = RidcParams(1, 2, 1, 2)
    assert edge_separation_check(U3, p, X3)
    assert edge_separation_check(ZERO, p, ZERO)
    with pytest.raises(PreconditionFailed):
        edge_separation_check(U3, RidcParams(1, 10, 1, 2), X3)
    with pytest.raises(PreconditionFailed):
        edge_separation_check(U3, p, S((1, 6)))


@settings(max_examples=80)
@given(signals(), bdc_params())
def test_pointwise_and_edge_checks_agree(u, p):
    rp = RidcParams(*p.as_tuple())
    for x in (solve_dridc(u, p), toggle(solve_dridc(u, p), Q(1), Q(5, 2)), translate(u, p.d_r)):
        edge = bool(check_ridc(u, rp, x))
        assert bool(check_ridc_pointwise(u, rp, x)) == edge
        assert bool(check_ridc_pointwise(u, rp, x, premultiplied=True)) == edge


@settings(max_examples=80)
@given(signals(), ridc_params())
def test_accepted_outputs_are_separated(u, p):
    x = solve_dridc(u, p.as_bdc())
    assert check_ridc(u, p, x)
    assert edge_separation_check(u, p, x)


# --------------------------------------------------------------------------
# bounded relative inertial delays


@pytest.mark.parametrize("bdc,ridc,ok", [((3, 6, 3, 6), (1, 4, 1, 4), True), ((1, 2, 1, 2), (1, 2, 1, 2), True),
                                         ((0, 1, 0, 1), (0, 100, 0, 100), False)])
def test_cc_bridc_examples(bdc, ridc, ok):
    assert cc_bridc(BridcParams(BdcParams(*bdc), RidcParams(*ridc))) is ok


def test_cc_bridc_reports_disjuncts():
    d = bridc_disjuncts(BridcParams(BdcParams(3, 6, 3, 6), RidcParams(1, 4, 1, 4)))
    assert set(d) == {"a", "b", "c", "d"} and d["a"]


def test_check_bridc_examples():
    p = BridcParams(B1212, RidcParams(1, 2, 1, 2))
    assert check_bridc(U3, p, X3)
    x = S((3, 5))
    assert bool(check_bridc(U3, p, x)) == (bool(check_bdc(U3, B1212, x)) and bool(check_ridc(U3, p.ridc, x)))
    assert check_bridc(ZERO, p, ZERO)


# --------------------------------------------------------------------------
# deterministic inertial delays


def test_solver_examples():
    assert solve_dridc(U3, B1212) == X3
    assert solve_dridc(X3, BdcParams(2, 3, 2, 3)) == S((5, 9))
    assert solve_dridc(P, BdcParams(0, 4, 0, 4)) == S((4, 7))
    with pytest.raises(ConsistencyViolated):
        solve_dridc(P, BdcParams(0, 3, 0, 1))


@pytest.mark.parametrize("form", FORMS)
def test_forms_on_example(form):
    assert check_dridc_form(U3, B1212, X3, form)
    assert not check_dridc_form(U3, B1212, toggle(X3, Q(4), Q(5)), form)
    assert check_dridc_form(ZERO, B1212, ZERO, form)


def test_form_rejects_inconsistent():
    with pytest.raises(ConsistencyViolated):
        check_dridc_form(U3, BdcParams(0, 3, 0, 1), X3, "a")


@settings(max_examples=60)
@given(signals(), bdc_params())
def test_solver_matches_grid_recursion(u, p):
    horizon = Q(12 + 6 + 2)
    assert solve_dridc(u, p) == simulate_recursion(u, p.as_tuple(), horizon, Q(1, 4))


@settings(max_examples=60)
@given(signals(), bdc_params())
def test_solver_is_bounded_inertial_solution(u, p):
    x = solve_dridc(u, p)
    assert check_bridc(u, BridcParams(p, RidcParams(*p.as_tuple())), x)
    assert check_constant_bounds(u, x, p.d_r, p.d_f)


@given(signals(), st.integers(0, 24).map(lambda k: Q(k, 4)))
def test_zero_memory_is_pure_delay(u, d):
    assert solve_dridc(u, BdcParams(0, d, 0, d)) == translate(u, d)


# --------------------------------------------------------------------------
# min/max parameterization


A_EX = BridcParams(BdcParams(3, 6, 3, 6), RidcParams(1, 4, 1, 4))


def test_min_max_examples():
    q = to_min_max(A_EX)
    assert (q.m_r_max, q.d_r_max, q.m_r_min, q.d_r_min) == (3, 6, 1, 4)
    assert (q.m_f_max, q.d_f_max, q.m_f_min, q.d_f_min) == (3, 6, 1, 4)
    assert from_min_max(q) == A_EX


def test_min_max_precondition():
    with pytest.raises(PreconditionFailed, match="delta_r"):
        to_min_max(BridcParams(BdcParams(3, 6, 3, 6), RidcParams(1, 7, 1, 4)))


@st.composite
def strengthened(draw):
    # d_f - m_f <= qf - uf <= qr <= d_r  and  d_r - m_r <= qr - ur <= qf <= d_f
    k = st.integers(0, 12)
    while True:
        qr, qf = Q(draw(k), 2), Q(draw(k), 2)
        ur, uf = Q(draw(st.integers(0, int(qr * 2))), 2), Q(draw(st.integers(0, int(qf * 2))), 2)
        dr, df = qr + Q(draw(st.integers(0, 6)), 2), qf + Q(draw(st.integers(0, 6)), 2)
        mr, mf = Q(draw(st.integers(0, int(dr * 2))), 2), Q(draw(st.integers(0, int(df * 2))), 2)
        if df - mf <= qf - uf <= qr <= dr and dr - mr <= qr - ur <= qf <= df:
            return BridcParams(BdcParams(mr, dr, mf, df), RidcParams(ur, qr, uf, qf))


@settings(max_examples=120)
@given(strengthened(), signals(denom=2), signals(denom=2, hi=20))
def test_min_max_checker_agrees(p, u, x):
    q = to_min_max(p)
    assert from_min_max(q) == p
    assert bool(check_min_max(u, q, x)) == bool(check_bridc(u, p, x))


@settings(max_examples=60)
@given(strengthened(), signals(denom=2))
def test_min_max_checker_agrees_on_members(p, u):
    x = solve_dridc(u, p.ridc.as_bdc())
    assert bool(check_min_max(u, to_min_max(p), x)) == bool(check_bridc(u, p, x))
    assert MinMaxParams(*(getattr(to_min_max(p), f) for f in MinMaxParams.__dataclass_fields__)) == to_min_max(p)
