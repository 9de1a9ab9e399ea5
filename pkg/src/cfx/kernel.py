"""Arbitrary-precision arithmetic substrate.

Exact values live in Python ints and ``fractions.Fraction``; inexact real and
complex values live in mpmath ``mpf``/``mpc`` under an explicit
:class:`PrecisionContext`.  Nothing in here mutates global state permanently:
precision is always applied through ``mp.workdps`` scopes.
"""

from __future__ import annotations

import math
import re as _re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Union

from mpmath import mp, mpc, mpf

# Type aliases for the exact side.  Python ints are already sign+magnitude
# arbitrary precision and Fraction keeps den > 0, gcd(num, den) = 1.
BigInt = int
BigRational = Fraction

HighPrecReal = mpf
HighPrecComplex = mpc

Scalar = Union[int, Fraction, mpf, mpc]


class CFXError(Exception):
    """Base class for all library errors."""


class DomainError(CFXError):
    """Argument outside the mathematical domain (e.g. branch cut)."""


class ParameterError(CFXError):
    """Structurally invalid parameter (wrong range, pole, zero numerator)."""


class SingularError(CFXError):
    """A value is undefined because a denominator vanished."""


class PrecisionError(CFXError):
    """Two-precision agreement policy failed."""


class NonConvergenceError(CFXError):
    """Iteration hit its depth cap before reaching the target accuracy."""


@dataclass(frozen=True)
class PrecisionContext:
    """Decimal working precision plus guard digits for error control.

    Float results are accepted only when a run at ``working_digits`` guard
    precision agrees with a run at doubled guard precision; see
    :func:`eval_two_precision`.
    """

    working_digits: int = 30
    guard_digits: int = 10

    def __post_init__(self) -> None:
        if self.working_digits < 10:
            raise ParameterError("working_digits must be >= 10")
        if self.guard_digits < 5:
            raise ParameterError("guard_digits must be >= 5")

    def workdps(self, extra: int = 0):
        """mpmath context manager at working + guard (+ extra) digits."""
        return mp.workdps(self.working_digits + self.guard_digits + extra)


def eval_two_precision(fn: Callable[[], Scalar], ctx: PrecisionContext) -> Scalar:
    """Evaluate ``fn`` twice, at guard and doubled-guard precision.

    Returns the higher-precision value; raises :class:`PrecisionError` if the
    two runs disagree beyond working_digits - 2 digits.
    """
    with ctx.workdps():
        lo = fn()
    with ctx.workdps(ctx.guard_digits):
        hi = fn()
        tol = mpf(10) ** (-(ctx.working_digits - 2))
        if abs(hi - lo) > tol * max(1, abs(hi)):
            raise PrecisionError(
                f"results disagree at {ctx.working_digits} digits: {lo} vs {hi}"
            )
    return hi


def factorial(k: int) -> BigInt:
    """k! as an exact integer."""
    if k < 0:
        raise ParameterError("factorial requires k >= 0")
    return math.factorial(k)


def pochhammer(a: Scalar, k: int) -> Scalar:
    """Rising factorial a(a+1)...(a+k-1) by direct product; (a)_0 = 1.

    The product form keeps rational arguments exact; no gamma ratios.
    """
    if k < 0:
        raise ParameterError("pochhammer requires k >= 0")
    result = a - a + 1 if not isinstance(a, int) else 1
    for j in range(k):
        result = result * (a + j)
    return result


# Complex literal grammar: [-]ddd[.ddd][(+|-)ddd[.ddd]i], no whitespace.
_COMPLEX_RE = _re.compile(
    r"^(?P<re>-?\d+(?:\.\d+)?)(?:(?P<sign>[+-])(?P<im>\d+(?:\.\d+)?)i)?$"
)


@dataclass(frozen=True)
class ComplexParam:
    """Exact rectangular complex parameter.

    Families that evaluate in the float ring store their parameter in this
    form so coefficient rules can be re-materialized at any precision.
    """

    re: Fraction
    im: Fraction = Fraction(0)

    @staticmethod
    def parse(text: str) -> "ComplexParam":
        m = _COMPLEX_RE.match(text)
        if m is None:
            raise ParameterError(f"cannot parse complex literal {text!r}")
        re_part = Fraction(m.group("re"))
        if m.group("im") is None:
            return ComplexParam(re_part)
        im_part = Fraction(m.group("im"))
        if m.group("sign") == "-":
            im_part = -im_part
        return ComplexParam(re_part, im_part)

    @staticmethod
    def coerce(z: "ComplexParam | Fraction | int | complex | str") -> "ComplexParam":
        if isinstance(z, ComplexParam):
            return z
        if isinstance(z, str):
            return ComplexParam.parse(z)
        if isinstance(z, complex):
            return ComplexParam(Fraction(z.real), Fraction(z.imag))
        return ComplexParam(Fraction(z))

    @property
    def is_real(self) -> bool:
        return self.im == 0

    @property
    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def as_fraction(self) -> Fraction:
        if not self.is_real:
            raise ParameterError(f"{self} is not real")
        return self.re

    def to_mp(self) -> Scalar:
        """mpf/mpc at the ambient mpmath precision."""
        re_v = mpf(self.re.numerator) / self.re.denominator
        if self.is_real:
            return re_v
        return mpc(re_v, mpf(self.im.numerator) / self.im.denominator)

    def __str__(self) -> str:
        if self.is_real:
            return str(self.re)
        sign = "+" if self.im >= 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"


def arg_in_cut_plane(z, ctx: PrecisionContext | None = None) -> bool:
    """True iff z avoids the closed negative real axis (|arg z| < pi).

    For negative real part the imaginary part is compared against
    10^(-working_digits/2), so values indistinguishable from the cut at
    working precision are rejected.
    """
    ctx = ctx or PrecisionContext()
    z = ComplexParam.coerce(z) if isinstance(z, (ComplexParam, Fraction, int, complex, str)) else z
    if isinstance(z, ComplexParam):
        if z.is_zero:
            raise DomainError("z = 0 is not in the cut plane")
        if z.re >= 0:
            return True
        return abs(z.im) > Fraction(1, 10 ** (ctx.working_digits // 2))
    # mpf / mpc
    re_v = getattr(z, "real", z)
    im_v = getattr(z, "imag", 0)
    if re_v == 0 and im_v == 0:
        raise DomainError("z = 0 is not in the cut plane")
    if re_v >= 0:
        return True
    return abs(im_v) > mpf(10) ** (-(ctx.working_digits // 2))


def to_mp(x: Scalar) -> Scalar:
    """Convert exact values to mpf at ambient precision; pass floats through."""
    if isinstance(x, Fraction):
        return mpf(x.numerator) / x.denominator
    if isinstance(x, int):
        return mpf(x)
    if isinstance(x, ComplexParam):
        return x.to_mp()
    return x
