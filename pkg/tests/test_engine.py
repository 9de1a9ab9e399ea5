from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from mpmath import mp, mpf

from cfx.engine import (
    ConvergentState,
    ExpansionSpec,
    CoefficientRule,
    TailSequence,
    convergents,
    equivalence_transform,
    estimate_limit,
    euler_wallis_step,
    successive_difference,
    unshift_first_step,
    waadeland_limit,
)
from cfx.families import make_e_euler, make_exp_n, make_exp_n_shifted, shifted_tail
from cfx.kernel import NonConvergenceError, ParameterError, SingularError
from cfx.oracle import exp_series, hyp_2f2

E_EULER_TABLE = [
    Fraction(3),
    Fraction(11, 4),
    Fraction(49, 18),
    Fraction(87, 32),
    Fraction(1631, 600),
    Fraction(11743, 4320),
]


def test_convergents_e_euler_table():
    convs = convergents(make_e_euler(), 5)
    assert [c.value for c in convs] == E_EULER_TABLE


def test_convergents_exp_n_depth0():
    convs = convergents(make_exp_n(1), 0)
    assert convs[0].value == 3


def test_convergents_exp2_limit_close_to_e_squared():
    convs = convergents(make_exp_n(2), 40)
    with mp.workdps(60):
        target = exp_series(2, 50).value
        v = mpf(convs[40].value.numerator) / convs[40].value.denominator
        assert abs(v - target) < mpf(10) ** -30


def test_euler_wallis_step_first_two():
    state = ConvergentState.initial(3)
    state = euler_wallis_step(state, -1, 4)
    assert (state.p_cur, state.q_cur) == (11, 4)
    state = euler_wallis_step(state, -2, 5)
    assert (state.p_cur, state.q_cur) == (49, 18)


def test_euler_wallis_rejects_zero_numerator():
    with pytest.raises(ParameterError):
        euler_wallis_step(ConvergentState.initial(1), 0, 1)


def test_determinant_identity_exact_to_200():
    for spec in (make_e_euler(), make_exp_n(3)):
        state = ConvergentState.initial(spec.head_value())
        prod = 1
        for k in range(1, 201):
            a_k, b_k = spec.rule.a(k), spec.rule.b(k)
            state = euler_wallis_step(state, a_k, b_k)
            prod *= a_k
            det = state.p_cur * state.q_prev - state.p_prev * state.q_cur
            assert det == (-1) ** (k - 1) * prod


def test_successive_differences_e_euler():
    spec = make_e_euler()
    assert successive_difference(spec, 1) == Fraction(-1, 4)
    assert successive_difference(spec, 2) == Fraction(-1, 36)
    # the printed table says -1/784 here; exact subtraction disagrees
    assert successive_difference(spec, 3) == Fraction(-1, 288)
    assert successive_difference(spec, 4) == Fraction(-1, 2400)


def test_successive_difference_requires_k_ge_1():
    with pytest.raises(ParameterError):
        successive_difference(make_e_euler(), 0)


def test_monotone_decrease_e_euler_to_200():
    convs = convergents(make_e_euler(), 200)
    values = [c.value for c in convs]
    assert all(values[k] < values[k - 1] for k in range(1, 201))


def test_equivalence_transform_identity():
    spec = make_e_euler()
    same = equivalence_transform(spec, lambda m: 1)
    for c1, c2 in zip(convergents(spec, 20), convergents(same, 20)):
        assert c1.value == c2.value and c1.p_raw == c2.p_raw


def test_equivalence_transform_sign_flip_preserves_values():
    spec = make_e_euler()
    flipped = equivalence_transform(spec, lambda m: -1)
    for c1, c2 in zip(convergents(spec, 20), convergents(flipped, 20)):
        assert c1.value == c2.value


def test_equivalence_transform_scaling_changes_raw_q():
    spec = make_exp_n(2)
    scaled = equivalence_transform(spec, lambda m: Fraction(1, 2))
    c_orig = convergents(spec, 20)
    c_new = convergents(scaled, 20)
    for k in range(21):
        assert c_orig[k].value == c_new[k].value
    assert any(c_orig[k].q_raw != c_new[k].q_raw for k in range(1, 21))


@given(
    factors=st.lists(
        st.fractions(min_value=-9, max_value=9, max_denominator=5).filter(lambda f: f != 0),
        min_size=12,
        max_size=12,
    )
)
@settings(max_examples=25, deadline=None)
def test_equivalence_transform_invariance_random(factors):
    spec = make_exp_n(2)
    transformed = equivalence_transform(spec, lambda m: factors[(m - 1) % len(factors)])
    for c1, c2 in zip(convergents(spec, 12), convergents(transformed, 12)):
        assert c1.value == c2.value


def test_equivalence_transform_rejects_zero_factor():
    spec = make_e_euler()
    bad = equivalence_transform(spec, lambda m: 0)
    with pytest.raises(ParameterError):
        convergents(bad, 2)


def test_tail_sequence_recursion_thm2_families():
    for n in range(1, 11):
        rule = make_exp_n_shifted(n).rule
        tail = TailSequence(shifted_tail(n))
        for j in range(1, 201):
            assert tail.satisfies(rule, j)


def test_waadeland_limit_trivial():
    assert waadeland_limit(Fraction(-7), 1) == 0
    with pytest.raises(SingularError):
        waadeland_limit(1, 0)


def test_waadeland_reconstructs_e():
    with mp.workdps(60):
        sigma = hyp_2f2(1, 1, 3, 3, 1, 50).value
        f1 = waadeland_limit(mpf(-4), sigma)
        # e = 3 + K, and K = a1/(b1 + f1) with a1 = -1, b1 = 4
        k_value = unshift_first_step(mpf(-1), mpf(4), f1)
        target = exp_series(1, 50).value
        assert abs(3 + k_value - target) < mpf(10) ** -45


def test_waadeland_matches_shifted_cf_limit_n2():
    with mp.workdps(50):
        sigma = hyp_2f2(1, 1, 3, 4, 2, 40).value
        f1 = waadeland_limit(mpf(-6), sigma)
        cf_value, _ = estimate_limit(make_exp_n_shifted(2), 35)
        v = mpf(cf_value.numerator) / cf_value.denominator
        assert abs(v - f1) < mpf(10) ** -30


def test_unshift_first_step():
    assert unshift_first_step(1, 1, 0) == 1
    with pytest.raises(SingularError):
        unshift_first_step(1, 2, -2)


def test_unshift_first_step_value_is_e_minus_3():
    # Theorem-style rearrangement at n = 1: K = e - 3 (a negative number).
    with mp.workdps(60):
        sigma = hyp_2f2(1, 1, 3, 3, 1, 50).value
        f1 = waadeland_limit(mpf(-4), sigma)
        k_value = unshift_first_step(mpf(-1), mpf(4), f1)
        target = exp_series(1, 50).value - 3
        assert abs(k_value - target) < mpf(10) ** -45


def test_estimate_limit_e_euler_30_digits():
    value, depth = estimate_limit(make_e_euler(), 30)
    assert depth <= 40
    with mp.workdps(45):
        target = exp_series(1, 40).value
        v = mpf(value.numerator) / value.denominator
        assert abs(v - target) < mpf(10) ** -30


def test_estimate_limit_depth_cap(monkeypatch):
    monkeypatch.setenv("CFX_MAX_DEPTH", "5")
    with pytest.raises(NonConvergenceError):
        estimate_limit(make_e_euler(), 30)


def test_singular_convergent_is_recorded_not_fatal():
    # b_1 = 0 makes Q_1 = 0: the index-1 convergent has no value.
    spec = ExpansionSpec(
        name="singular-demo",
        head=0,
        rule=CoefficientRule(a=lambda m: 1, b=lambda m: 0 if m == 1 else 1),
    )
    convs = convergents(spec, 3)
    assert convs[1].value is None
    assert convs[2].value is not None
