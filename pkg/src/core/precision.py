# Precision policy: every numeric routine receives one of these explicitly
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from mpmath import MPContext

DEFAULT_GUARD_DIGITS = 30
# ulp headroom so that "agree to 10^-working" tests are reachable in rounding
EXTRA_BITS = 16


@dataclass(frozen=True)
class PrecisionContext:
    target_digits: int
    guard_digits: int = DEFAULT_GUARD_DIGITS
    mp: MPContext = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if int(self.target_digits) <= 0:
            raise ValueError(f"target_digits must be positive, got {self.target_digits}")
        if int(self.guard_digits) <= 0:
            raise ValueError(f"guard_digits must be positive, got {self.guard_digits}")
        ctx = MPContext()
        ctx.prec = self.working_bits
        object.__setattr__(self, "mp", ctx)

    @property
    def working_digits(self) -> int:
        return self.target_digits + self.guard_digits

    @property
    def working_bits(self) -> int:
        return math.ceil(self.working_digits * math.log2(10)) + EXTRA_BITS

    def with_guard(self, guard_digits: int) -> "PrecisionContext":
        return PrecisionContext(self.target_digits, guard_digits)

    def with_doubled_guard(self) -> "PrecisionContext":
        return self.with_guard(2 * self.guard_digits)

    def with_target(self, target_digits: int) -> "PrecisionContext":
        return PrecisionContext(target_digits, self.guard_digits)

    def eps(self):
        return self.mp.mpf(10) ** (-self.working_digits)

    def tolerance(self, slack_digits: int = 0):
        """10^-(target - slack): the acceptance threshold of most checks."""
        return self.mp.mpf(10) ** (-(self.target_digits - slack_digits))

    def convert(self, value: Any):
        """Exact rationals, ints and foreign mp numbers into this context's mpc."""
        mp = self.mp
        if isinstance(value, Fraction):
            return mp.mpc(mp.mpf(value.numerator) / value.denominator)
        if isinstance(value, (int, str)):
            return mp.mpc(mp.mpf(value))
        if isinstance(value, complex):
            return mp.mpc(value.real, value.imag)
        return mp.mpc(value)

    def real(self, value: Any):
        mp = self.mp
        if isinstance(value, Fraction):
            return mp.mpf(value.numerator) / value.denominator
        return mp.mpf(value)

    def digits_agreed(self, computed, expected) -> int:
        """-log10 of the relative difference, capped at target_digits."""
        mp = self.mp
        diff = abs(mp.mpc(computed) - mp.mpc(expected))
        if diff == 0:
            return self.target_digits
        scale = max(abs(mp.mpc(expected)), mp.mpf(10) ** (-self.working_digits))
        rel = diff / scale
        agreed = int(mp.floor(-mp.log10(rel)))
        return max(0, min(self.target_digits, agreed))
