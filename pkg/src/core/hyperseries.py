# Ramanujan-Orr series: exact representation, summation and verification
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction
from typing import Optional, Sequence, Tuple

from sympy import factorint

from ..errors import DivergentSeries, PrecisionExhausted, SeriesNonConvergence
from ..utils import format_rational, monitor_performance, precision_retry, setup_logging
from .jet import Jet
from .lvalues import dirichlet_L
from .precision import PrecisionContext

logger = setup_logging()


class DenomPattern(str, Enum):
    ONE = "1"
    TWO_N_PLUS_ONE = "2n+1"
    N_CUBED = "n^3"
    ONE_MINUS_2N_TIMES_N_CUBED = "(1-2n)n^3"

    def evaluate(self, n: int) -> int:
        if self is DenomPattern.ONE:
            return 1
        if self is DenomPattern.TWO_N_PLUS_ONE:
            return 2 * n + 1
        if self is DenomPattern.N_CUBED:
            return n ** 3
        return (1 - 2 * n) * n ** 3

    @property
    def first_safe_index(self) -> int:
        return 1 if self in (DenomPattern.N_CUBED, DenomPattern.ONE_MINUS_2N_TIMES_N_CUBED) else 0


def is_squarefree(d: int) -> bool:
    return d >= 1 and all(e == 1 for e in factorint(d).values())


@dataclass(frozen=True)
class LValueTag:
    discriminant: int = -7
    s: int = 2
    coefficient: Fraction = Fraction(1)
    shift: Fraction = Fraction(0)


@dataclass(frozen=True)
class AlgebraicConstant:
    """rat * sqrt(surd) / pi^pi_power, or coefficient * L_D(s) + shift when l_value is set."""

    rat: Fraction
    surd: int = 1
    pi_power: int = 0
    l_value: Optional[LValueTag] = None

    def __post_init__(self):
        object.__setattr__(self, "rat", Fraction(self.rat))
        if not is_squarefree(self.surd):
            raise ValueError(f"surd must be a squarefree positive integer, got {self.surd}")

    def evaluate(self, ctx: PrecisionContext):
        mp = ctx.mp
        if self.l_value is not None:
            tag = self.l_value
            value = dirichlet_L(tag.discriminant, tag.s, ctx)
            return ctx.convert(tag.coefficient) * value + ctx.convert(tag.shift)
        value = ctx.convert(self.rat)
        if self.surd != 1:
            value = value * mp.sqrt(self.surd)
        if self.pi_power:
            value = value / mp.pi ** self.pi_power
        return value

    def scaled(self, factor: Fraction) -> "AlgebraicConstant":
        factor = Fraction(factor)
        if self.l_value is not None:
            tag = self.l_value
            return replace(
                self,
                l_value=LValueTag(tag.discriminant, tag.s, tag.coefficient * factor, tag.shift * factor),
            )
        return replace(self, rat=self.rat * factor)

    def same_shape(self, other: "AlgebraicConstant") -> bool:
        return (self.surd, self.pi_power, self.l_value is None) == (other.surd, other.pi_power, other.l_value is None)

    def __str__(self) -> str:
        if self.l_value is not None:
            tag = self.l_value
            text = f"L_{tag.discriminant}({tag.s})"
            if tag.coefficient != 1:
                text = f"{format_rational(tag.coefficient)}*{text}"
            if tag.shift:
                sign = "+" if tag.shift > 0 else "-"
                text = f"{text} {sign} {format_rational(abs(tag.shift))}"
            return text
        num = self.rat.numerator
        parts = [str(num)] if num != 1 or self.surd == 1 else []
        if self.surd != 1:
            parts.append(f"sqrt({self.surd})")
        top = "*".join(parts)
        den = []
        if self.rat.denominator != 1:
            den.append(str(self.rat.denominator))
        if self.pi_power == 1:
            den.append("pi")
        elif self.pi_power:
            den.append(f"pi^{self.pi_power}")
        if not den:
            return top
        bottom = den[0] if len(den) == 1 else "(" + "*".join(den) + ")"
        return f"{top}/{bottom}"


def _fractions(values: Sequence) -> Tuple[Fraction, ...]:
    return tuple(Fraction(v) for v in values)


@dataclass(frozen=True)
class FormulaSpec:
    """
    sum_{n >= start_index} scale * prod (u)_n / prod (l)_n * z^n * P(n) / D(n) = rhs

    upper and lower list every Pochhammer factor, (1)_n included, so they have
    equal length. numerator holds the integer coefficients of P in ascending order.
    """

    upper: Tuple[Fraction, ...]
    lower: Tuple[Fraction, ...]
    z: Fraction
    numerator: Tuple[int, ...] = (1,)
    denom_pattern: DenomPattern = DenomPattern.ONE
    rhs: Optional[AlgebraicConstant] = None
    scale: Fraction = Fraction(1)
    start_index: int = 0
    conjectural: bool = False

    def __post_init__(self):
        object.__setattr__(self, "upper", _fractions(self.upper))
        object.__setattr__(self, "lower", _fractions(self.lower))
        object.__setattr__(self, "z", Fraction(self.z))
        object.__setattr__(self, "scale", Fraction(self.scale))
        object.__setattr__(self, "denom_pattern", DenomPattern(self.denom_pattern))
        coeffs = tuple(self.numerator)
        if not coeffs or any(not isinstance(c, int) or isinstance(c, bool) for c in coeffs):
            raise ValueError(f"numerator must be a non-empty tuple of integers, got {coeffs!r}")
        while len(coeffs) > 1 and coeffs[-1] == 0:
            coeffs = coeffs[:-1]
        object.__setattr__(self, "numerator", coeffs)
        if len(self.upper) != len(self.lower):
            raise ValueError("upper and lower parameter lists must have equal length, (1)_n included")
        if self.start_index not in (0, 1):
            raise ValueError(f"start_index must be 0 or 1, got {self.start_index}")
        if self.start_index < self.denom_pattern.first_safe_index:
            raise ValueError(f"denominator {self.denom_pattern.value} vanishes at n = 0; start at 1")
        for low in self.lower:
            if low <= 0 and low.denominator == 1:
                raise ValueError(f"lower parameter {low} makes a Pochhammer symbol vanish")

    @property
    def convergent(self) -> bool:
        return abs(self.z) < 1

    @property
    def degree(self) -> int:
        return len(self.numerator) - 1

    def polynomial(self, n: int) -> int:
        value = 0
        for c in reversed(self.numerator):
            value = value * n + c
        return value

    def weight(self, n: int) -> Fraction:
        """Everything multiplying the Pochhammer-and-z part at index n."""
        return self.scale * Fraction(self.polynomial(n), self.denom_pattern.evaluate(n))

    def pochhammer_ratio(self, n: int) -> Fraction:
        ratio = self.z
        if ratio == 0:
            return ratio
        for u in self.upper:
            ratio *= n + u
        for low in self.lower:
            ratio /= n + low
        return ratio

    def core(self) -> "FormulaSpec":
        """The bare hypergeometric part: same parameters and argument, P = 1, D = 1."""
        return FormulaSpec(self.upper, self.lower, self.z)

    def with_numerator(self, coeffs: Sequence[int]) -> "FormulaSpec":
        return replace(self, numerator=tuple(coeffs))


def term_ratio(f: FormulaSpec, n: int) -> Tuple[int, int]:
    """Exact T(n+1)/T(n) of the Pochhammer-and-z part, as (numerator, denominator)."""
    if n < 0:
        raise ValueError("term_ratio needs n >= 0")
    ratio = f.pochhammer_ratio(n)
    return ratio.numerator, ratio.denominator


def pochhammer_part(f: FormulaSpec, n: int) -> Fraction:
    """T(n) by the incremental ratio recurrence, exactly."""
    value = Fraction(1)
    for k in range(n):
        value *= f.pochhammer_ratio(k)
    return value


def exact_terms(f: FormulaSpec, count: int) -> list:
    """The first count summands (from start_index) as exact rationals."""
    terms = []
    value = pochhammer_part(f, f.start_index)
    n = f.start_index
    while len(terms) < count:
        terms.append(value * f.weight(n))
        value *= f.pochhammer_ratio(n)
        n += 1
    return terms


def tail_ratio(z: Fraction) -> Fraction:
    """Safety-inflated asymptotic term ratio, kept strictly below 1."""
    az = abs(Fraction(z))
    return min(2 * az, (1 + az) / 2)


@dataclass(frozen=True)
class SeriesSum:
    value: object
    terms_used: int
    tail_bound: object = field(default=0, compare=False)


def max_terms(ctx: PrecisionContext, rho) -> int:
    rho = float(rho)
    if rho <= 0:
        return 4
    return 4 * math.ceil(ctx.working_digits * math.log(10) / -math.log(rho)) + 1000


def sum_series_stats(f: FormulaSpec, ctx: PrecisionContext) -> SeriesSum:
    if not f.convergent:
        raise DivergentSeries(f"|z| = {float(abs(f.z)):.4g} >= 1; use the translator for this series")
    mp = ctx.mp
    threshold = ctx.eps()
    rho = tail_ratio(f.z)
    rho_mp = ctx.real(rho)
    tail_factor = rho_mp / (1 - rho_mp)
    limit = max_terms(ctx, rho)

    pochhammer = ctx.real(pochhammer_part(f, f.start_index))
    total = mp.mpf(0)
    largest = mp.mpf(0)
    previous = None
    n = f.start_index
    used = 0
    while True:
        w = f.weight(n)
        term = pochhammer * w.numerator / w.denominator
        total += term
        used += 1
        size = abs(term)
        if size > largest:
            largest = size
        tail = size * tail_factor
        settled = previous is None or previous == 0 or size <= rho_mp * previous
        if size < threshold and tail < threshold and used >= 2 and settled:
            break
        if used > limit:
            raise SeriesNonConvergence(f"series not settled after {limit} terms")
        num, den = term_ratio(f, n)
        pochhammer = pochhammer * num / den
        previous = size
        n += 1

    rounding = largest * used * mp.mpf(2) ** (-mp.prec + 2)
    if rounding > ctx.tolerance() * max(abs(total), 1):
        raise PrecisionExhausted(f"accumulated rounding {mp.nstr(rounding, 5)} exceeds the target tolerance")
    logger.debug(f"series summed with {used} terms")
    return SeriesSum(value=mp.mpc(total), terms_used=used, tail_bound=tail)


def sum_series(f: FormulaSpec, ctx: PrecisionContext):
    return sum_series_stats(f, ctx).value


def hyper_sum_jet(upper: Sequence[Fraction], lower: Sequence[Fraction], y: Jet) -> Jet:
    """sum_n prod (u)_n / prod (l)_n * y^n along a jet; the family left-hand sides."""
    ctx = y.ctx
    if abs(y.c0) >= 1:
        raise DivergentSeries(f"|y| = {ctx.mp.nstr(abs(y.c0), 6)} >= 1")
    threshold = ctx.eps()
    term = y.lift(1)
    total = term
    quiet = 0
    limit = max_terms(ctx, (1 + float(abs(y.c0))) / 2)
    for n in range(limit):
        ratio = Fraction(1)
        for u in upper:
            ratio *= n + Fraction(u)
        for low in lower:
            ratio /= n + Fraction(low)
        term = (term * y) * ratio
        total = total + term
        scale = max(total.max_abs(), 1)
        if term.max_abs() < threshold * scale:
            quiet += 1
            if quiet >= 2:
                return total
        else:
            quiet = 0
    raise SeriesNonConvergence(f"jet series not settled after {limit} terms")


@dataclass(frozen=True)
class VerificationResult:
    match: bool
    digits_agreed: int
    terms_used: int
    value: object = field(compare=False, default=None)
    expected: object = field(compare=False, default=None)


MATCH_SLACK_DIGITS = 5


@monitor_performance("verify_formula")
def verify_formula(f: FormulaSpec, ctx: PrecisionContext) -> VerificationResult:
    if f.rhs is None:
        raise ValueError("verify_formula needs a right-hand side")

    def attempt(current: PrecisionContext) -> VerificationResult:
        summed = sum_series_stats(f, current)
        expected = f.rhs.evaluate(current)
        digits = current.digits_agreed(summed.value, expected)
        return VerificationResult(
            match=digits >= current.target_digits - MATCH_SLACK_DIGITS,
            digits_agreed=digits,
            terms_used=summed.terms_used,
            value=summed.value,
            expected=expected,
        )

    return precision_retry(attempt, ctx)
