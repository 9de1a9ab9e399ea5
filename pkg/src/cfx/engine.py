"""Generalized continued fractions b0 + K(a_m/b_m) and their convergents.

Convergents come from the Euler-Wallis recurrence

    P_k = b_k P_{k-1} + a_k P_{k-2},   Q_k = b_k Q_{k-1} + a_k Q_{k-2},

with P_{-1} = 1, Q_{-1} = 0, P_0 = b0, Q_0 = 1.  An :class:`ExpansionSpec`
wraps the fraction in an affine (or custom) finisher so the convergent at
depth k is the value of the whole expansion truncated after the k-th partial
fraction.  Raw P_k, Q_k are kept unreduced: closed forms for denominators
refer to the raw recurrence output, while reduced values match printed
convergent tables.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Any, Callable, Iterator, Optional

from mpmath import mp, mpf

from .kernel import (
    NonConvergenceError,
    ParameterError,
    Scalar,
    SingularError,
    to_mp,
)

DEFAULT_DEPTH_CAP = 10**6


def depth_cap() -> int:
    """Iteration cap for limit estimation; CFX_MAX_DEPTH overrides."""
    env = os.environ.get("CFX_MAX_DEPTH")
    return int(env) if env else DEFAULT_DEPTH_CAP


@dataclass(frozen=True)
class CoefficientRule:
    """Partial numerators a(m) and denominators b(m) for m >= 1.

    a(m) must be nonzero; this is checked lazily at each step.
    """

    a: Callable[[int], Scalar]
    b: Callable[[int], Scalar]


@dataclass(frozen=True)
class ExpansionSpec:
    """One continued-fraction family: prefix + scale * (b0 + K(a_m/b_m)).

    ``head``/``prefix``/``scale`` may be zero-arg callables for float-ring
    families whose constants must be rebuilt at the ambient precision.  A
    custom ``finish`` (mapping the bare fraction value w = b0 + K to the
    full expansion value) overrides the affine prefix/scale wrapper; this is
    how the two-level bracket of the rational-exponent family is represented
    without flattening.
    """

    name: str
    head: Any
    rule: Optional[CoefficientRule]
    prefix: Any = 0
    scale: Any = 1
    exact: bool = True
    finish: Optional[Callable[[Scalar], Scalar]] = None
    constant: bool = False  # degenerate family: every convergent equals finish(head)
    params: dict = field(default_factory=dict)

    def _value(self, attr: Any) -> Scalar:
        return attr() if callable(attr) else attr

    def head_value(self) -> Scalar:
        return self._value(self.head)

    def finish_value(self, w: Scalar) -> Scalar:
        if self.finish is not None:
            return self.finish(w)
        return self._value(self.prefix) + self._value(self.scale) * w


@dataclass(frozen=True)
class ConvergentState:
    """Euler-Wallis running state after k steps."""

    p_prev: Scalar
    p_cur: Scalar
    q_prev: Scalar
    q_cur: Scalar
    k: int

    @staticmethod
    def initial(b0: Scalar) -> "ConvergentState":
        return ConvergentState(p_prev=1, p_cur=b0, q_prev=0, q_cur=1, k=0)


def euler_wallis_step(state: ConvergentState, a_k: Scalar, b_k: Scalar) -> ConvergentState:
    """Advance the recurrence by one partial fraction."""
    if a_k == 0:
        raise ParameterError(f"partial numerator a_{state.k + 1} is zero")
    return ConvergentState(
        p_prev=state.p_cur,
        p_cur=b_k * state.p_cur + a_k * state.p_prev,
        q_prev=state.q_cur,
        q_cur=b_k * state.q_cur + a_k * state.q_prev,
        k=state.k + 1,
    )


@dataclass(frozen=True)
class Convergent:
    """Raw P_k, Q_k plus the finished (reduced) expansion value.

    ``value`` is None when the convergent is singular (Q_k = 0 or the
    finisher hit a vanishing denominator); evaluation continues past it.
    """

    k: int
    p_raw: Scalar
    q_raw: Scalar
    value: Optional[Scalar]


def iter_convergents(spec: ExpansionSpec) -> Iterator[Convergent]:
    """Yield convergents 0, 1, 2, ... of ``spec`` indefinitely."""
    if spec.constant:
        k = 0
        v = spec.finish_value(spec.head_value())
        while True:
            yield Convergent(k, v, 1, v)
            k += 1
    state = ConvergentState.initial(spec.head_value())
    while True:
        yield _finish(spec, state)
        state = euler_wallis_step(state, spec.rule.a(state.k + 1), spec.rule.b(state.k + 1))


def _finish(spec: ExpansionSpec, state: ConvergentState) -> Convergent:
    try:
        if state.q_cur == 0:
            raise ZeroDivisionError
        w = state.p_cur / state.q_cur
        if isinstance(state.p_cur, int) and isinstance(state.q_cur, int):
            w = Fraction(state.p_cur, state.q_cur)
        value = spec.finish_value(w)
    except ZeroDivisionError:
        value = None
    return Convergent(state.k, state.p_cur, state.q_cur, value)


def convergents(spec: ExpansionSpec, depth: int) -> list[Convergent]:
    """Convergents 0..depth (inclusive)."""
    if depth < 0:
        raise ParameterError("depth must be >= 0")
    out = []
    for conv in iter_convergents(spec):
        out.append(conv)
        if conv.k == depth:
            return out


def successive_difference(spec: ExpansionSpec, k: int) -> Fraction:
    """C_k - C_{k-1} in lowest terms; exact rings only."""
    if k < 1:
        raise ParameterError("difference requires k >= 1")
    if not spec.exact:
        raise ParameterError("successive_difference requires an exact-ring spec")
    convs = convergents(spec, k)
    a, b = convs[k - 1].value, convs[k].value
    if a is None or b is None:
        raise SingularError(f"singular convergent near index {k} of {spec.name}")
    return b - a


def equivalence_transform(spec: ExpansionSpec, r: Callable[[int], Scalar]) -> ExpansionSpec:
    """Rescale a_m -> r_m r_{m-1} a_m, b_m -> r_m b_m (r_0 = 1).

    Convergent values are unchanged; raw P_k, Q_k generally differ.
    """
    rule = spec.rule

    def r_checked(m: int) -> Scalar:
        v = r(m) if m >= 1 else 1
        if v == 0:
            raise ParameterError(f"equivalence factor r_{m} is zero")
        return v

    new_rule = CoefficientRule(
        a=lambda m: r_checked(m) * r_checked(m - 1) * rule.a(m),
        b=lambda m: r_checked(m) * rule.b(m),
    )
    return replace(spec, rule=new_rule, name=spec.name + "~equiv")


def waadeland_limit(t0: Scalar, sigma_inf: Scalar) -> Scalar:
    """Fraction value from a tail sequence start and the tail-product sum.

    Returns t0 * (1 - 1/sigma_inf).
    """
    if sigma_inf == 0:
        raise SingularError("sigma_inf must be nonzero")
    return t0 * (1 - 1 / sigma_inf)


def unshift_first_step(a1: Scalar, b1: Scalar, tail_value: Scalar) -> Scalar:
    """Value a1/(b1 + t) of a fraction whose tail from index 2 has value t."""
    denom = b1 + tail_value
    if denom == 0:
        raise SingularError("b1 + tail_value vanishes")
    return a1 / denom


@dataclass(frozen=True)
class TailSequence:
    """Candidate tail values t_j, j >= 0, for a coefficient rule."""

    t: Callable[[int], Scalar]

    def satisfies(self, rule: CoefficientRule, j: int) -> bool:
        # t_{j-1} = a_j / (b_j + t_j), rearranged to avoid division.
        return self.t(j - 1) * (rule.b(j) + self.t(j)) == rule.a(j)


def estimate_limit(
    spec: ExpansionSpec,
    target_digits: int,
    max_depth: Optional[int] = None,
) -> tuple[Scalar, int]:
    """Iterate convergents until two consecutive steps move by < 10^-digits.

    The stopping test is |C_k - C_{k-1}| < 10^-target_digits * max(1, |C_k|)
    at two consecutive depths.  Exact specs compare exact rationals; float
    specs run once at guard precision and once at doubled guard precision and
    must agree (two-precision policy).
    """
    cap = max_depth if max_depth is not None else depth_cap()
    if spec.exact:
        threshold = Fraction(1, 10**target_digits)
        return _estimate(spec, threshold, cap, lambda v: abs(v))
    guard = max(10, target_digits // 4)
    with mp.workdps(target_digits + guard):
        lo, depth = _estimate(spec, mpf(10) ** (-target_digits), cap, abs)
    with mp.workdps(target_digits + 2 * guard):
        hi, depth = _estimate(spec, mpf(10) ** (-target_digits), cap, abs)
        if abs(hi - lo) > mpf(10) ** (-(target_digits - 2)) * max(1, abs(hi)):
            raise NonConvergenceError(
                f"two-precision runs of {spec.name} disagree at {target_digits} digits"
            )
    return hi, depth


def _estimate(spec, threshold, cap, absval):
    prev_value = None
    small_streak = 0
    for conv in iter_convergents(spec):
        if conv.k > cap:
            raise NonConvergenceError(
                f"{spec.name} did not converge within depth {cap}"
            )
        v = conv.value
        if v is None:
            prev_value = None
            small_streak = 0
            continue
        if prev_value is not None:
            if absval(v - prev_value) < threshold * max(1, absval(v)):
                small_streak += 1
                if small_streak >= 2:
                    return v, conv.k
            else:
                small_streak = 0
        prev_value = v
