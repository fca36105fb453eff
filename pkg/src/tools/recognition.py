# Rational and surd recognition by continued fractions
from __future__ import annotations

from fractions import Fraction
from itertools import islice
from typing import Iterator, List, Optional, Tuple

from sympy import Integer, Rational, factorint
from sympy.ntheory.continued_fraction import continued_fraction_convergents, continued_fraction_iterator

from ..errors import RecognitionFailure
from ..utils import setup_logging

logger = setup_logging()

DEFAULT_MAX_DENOMINATOR = 10 ** 6
MAX_SURD = 100


def _exact_binary(value, mp) -> Rational:
    number = mp.mpf(value)
    man, exp = number.man_exp
    exact = Integer(man) * Integer(2) ** exp
    return -exact if number < 0 else exact


def continued_fraction_terms(value, mp, max_terms: int = 200) -> List[int]:
    """Partial quotients of the exact binary value of a real mp number."""
    iterator = continued_fraction_iterator(_exact_binary(value, mp))
    return [int(a) for a in islice(iterator, max_terms)]


def convergents(terms: List[int]) -> Iterator[Fraction]:
    for c in continued_fraction_convergents(terms):
        yield Fraction(int(c.p), int(c.q))


def recognize_rational(value, ctx, max_denominator: int = DEFAULT_MAX_DENOMINATOR, tolerance=None) -> Fraction:
    """
    The first continued-fraction convergent p/q (q <= max_denominator) within
    tolerance of value, relative to max(1, |value|).

    Raises:
        RecognitionFailure: value is not real to tolerance, or no convergent fits
    """
    mp = ctx.mp
    tolerance = ctx.tolerance() if tolerance is None else tolerance
    value = mp.mpc(value)
    scale = max(abs(value), mp.mpf(1))
    if abs(value.imag) > tolerance * scale:
        raise RecognitionFailure(f"value {mp.nstr(value, 15)} is not real to tolerance")
    x = value.real
    for candidate in convergents(continued_fraction_terms(x, mp)):
        if candidate.denominator > max_denominator:
            break
        if abs(x - ctx.real(candidate)) <= tolerance * scale:
            logger.debug(f"recognized {mp.nstr(x, 20)} as {candidate}")
            return candidate
    raise RecognitionFailure(
        f"{mp.nstr(x, 20)} is not a rational with denominator <= {max_denominator} "
        f"to tolerance {mp.nstr(tolerance, 3)}"
    )


def squarefree_decomposition(n: int) -> Tuple[int, int]:
    """n = s^2 * d with d squarefree; returns (s, d). n must be positive."""
    if n <= 0:
        raise ValueError(f"squarefree_decomposition needs a positive integer, got {n}")
    s, d = 1, 1
    for prime, power in factorint(n).items():
        s *= prime ** (power // 2)
        if power % 2:
            d *= prime
    return s, d


def squarefree_numbers(limit: int = MAX_SURD) -> List[int]:
    return [d for d in range(1, limit + 1) if squarefree_decomposition(d)[1] == d]


def recognize_surd_multiple(
    value,
    ctx,
    pi_power: int = 1,
    max_surd: int = MAX_SURD,
    max_denominator: int = DEFAULT_MAX_DENOMINATOR,
    tolerance=None,
) -> Tuple[Fraction, int]:
    """Find (q, d) with value = q * sqrt(d) / pi^pi_power, d squarefree and at most max_surd."""
    mp = ctx.mp
    reduced = mp.mpc(value) * mp.pi ** pi_power
    for d in squarefree_numbers(max_surd):
        try:
            q = recognize_rational(reduced / mp.sqrt(d), ctx, max_denominator, tolerance)
        except RecognitionFailure:
            continue
        return q, d
    raise RecognitionFailure(f"no surd d <= {max_surd} makes {mp.nstr(reduced, 20)} / sqrt(d) rational")


def confirm_rational(value, candidate: Fraction, ctx, tolerance=None) -> Optional[Fraction]:
    mp = ctx.mp
    tolerance = ctx.tolerance() if tolerance is None else tolerance
    value = mp.mpc(value)
    if abs(value - ctx.convert(candidate)) <= tolerance * max(abs(value), mp.mpf(1)):
        return candidate
    return None
