# Truncated Taylor series (jets) over the mpc numbers of one PrecisionContext
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence, Union

from ..errors import DivisionBySingularJet, JetMismatch, OrderExhausted
from .precision import PrecisionContext

DEFAULT_JET_ORDER = 6

Scalar = Union[int, Fraction, object]


class Jet:
    """
    Taylor coefficients c0..c_d of an analytic function at base_point.

    Arithmetic operators accept jets of identical base point and order, or
    scalars (int, Fraction, mpf, mpc), which act as constant jets.
    """

    __slots__ = ("ctx", "base_point", "coeffs")

    def __init__(self, ctx: PrecisionContext, base_point, coeffs: Iterable):
        mp = ctx.mp
        coeffs = tuple(mp.mpc(c) for c in coeffs)
        if not coeffs:
            raise ValueError("A jet needs at least one coefficient")
        self.ctx = ctx
        self.base_point = mp.mpc(base_point)
        self.coeffs = coeffs

    # ----- construction -----

    @classmethod
    def constant(cls, ctx: PrecisionContext, value, base_point=0, order: int = 0) -> "Jet":
        value = ctx.convert(value)
        return cls(ctx, base_point, (value,) + (ctx.mp.mpc(0),) * order)

    @classmethod
    def variable(cls, ctx: PrecisionContext, base_point, order: int = DEFAULT_JET_ORDER) -> "Jet":
        """The identity function x at base_point."""
        x0 = ctx.convert(base_point)
        if order == 0:
            return cls(ctx, x0, (x0,))
        zeros = (ctx.mp.mpc(0),) * (order - 1)
        return cls(ctx, x0, (x0, ctx.mp.mpc(1)) + zeros)

    @classmethod
    def scalar(cls, ctx: PrecisionContext, value) -> "Jet":
        """Order-0 jet: the scalar path of every jet-evaluable expression."""
        value = ctx.convert(value)
        return cls(ctx, value, (value,))

    def lift(self, value) -> "Jet":
        return Jet.constant(self.ctx, value, self.base_point, self.order)

    # ----- accessors -----

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @property
    def c0(self):
        return self.coeffs[0]

    def truncate(self, order: int) -> "Jet":
        if order > self.order:
            raise OrderExhausted(f"Cannot extend a jet of order {self.order} to {order}")
        return Jet(self.ctx, self.base_point, self.coeffs[: order + 1])

    def max_abs(self):
        return max(abs(c) for c in self.coeffs)

    def derivative_values(self) -> list:
        """k-th derivatives at the base point: k! * c_k."""
        mp = self.ctx.mp
        return [c * mp.factorial(k) for k, c in enumerate(self.coeffs)]

    def __repr__(self) -> str:
        shown = ", ".join(self.ctx.mp.nstr(c, 8) for c in self.coeffs)
        return f"Jet(order={self.order}, at={self.ctx.mp.nstr(self.base_point, 8)}, coeffs=({shown}))"

    # ----- operators -----

    def _coerce(self, other) -> "Jet":
        if isinstance(other, Jet):
            _check_compatible(self, other)
            return other
        return self.lift(other)

    def __add__(self, other):
        if not isinstance(other, Jet):
            s = self.ctx.convert(other)
            return Jet(self.ctx, self.base_point, (self.coeffs[0] + s,) + self.coeffs[1:])
        return jet_add(self, other)

    __radd__ = __add__

    def __neg__(self):
        return Jet(self.ctx, self.base_point, tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        if not isinstance(other, Jet):
            s = self.ctx.convert(other)
            return Jet(self.ctx, self.base_point, (self.coeffs[0] - s,) + self.coeffs[1:])
        return jet_add(self, -other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Jet):
            s = self.ctx.convert(other)
            return Jet(self.ctx, self.base_point, tuple(c * s for c in self.coeffs))
        return jet_mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, Jet):
            s = self.ctx.convert(other)
            if s == 0:
                raise DivisionBySingularJet("Division of a jet by zero")
            return Jet(self.ctx, self.base_point, tuple(c / s for c in self.coeffs))
        return jet_div(self, other)

    def __rtruediv__(self, other):
        return jet_div(self.lift(other), self)

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError("Jet powers take nonnegative integer exponents; use jet_root for fractional ones")
        result = self.lift(1)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    def sqrt(self) -> "Jet":
        return jet_root(self, 2)

    def root(self, k: int) -> "Jet":
        return jet_root(self, k)

    def derivative(self) -> "Jet":
        return jet_derivative(self)


def _check_compatible(a: Jet, b: Jet) -> None:
    if a.order != b.order:
        raise JetMismatch(f"Jet orders differ: {a.order} vs {b.order}")
    if a.base_point != b.base_point:
        raise JetMismatch("Jet base points differ")


def _rational(ctx: PrecisionContext, value: Fraction):
    return ctx.mp.mpf(value.numerator) / value.denominator


def jet_add(a: Jet, b: Jet) -> Jet:
    _check_compatible(a, b)
    return Jet(a.ctx, a.base_point, tuple(x + y for x, y in zip(a.coeffs, b.coeffs)))


def jet_mul(a: Jet, b: Jet) -> Jet:
    """Cauchy product, summed in symmetric pairs so that a*b and b*a agree bit for bit."""
    _check_compatible(a, b)
    ac, bc = a.coeffs, b.coeffs
    out = []
    for k in range(a.order + 1):
        acc = None
        i, j = 0, k
        while i < j:
            pair = ac[i] * bc[j] + ac[j] * bc[i]
            acc = pair if acc is None else acc + pair
            i += 1
            j -= 1
        if i == j:
            middle = ac[i] * bc[i]
            acc = middle if acc is None else acc + middle
        out.append(acc)
    return Jet(a.ctx, a.base_point, out)


def _require_nonsingular(a: Jet, what: str) -> None:
    if abs(a.c0) <= a.ctx.eps():
        raise DivisionBySingularJet(f"{what}: leading coefficient vanishes to working precision")


def jet_div(a: Jet, b: Jet) -> Jet:
    _check_compatible(a, b)
    _require_nonsingular(b, "jet_div")
    b0 = b.c0
    q = []
    for k in range(a.order + 1):
        acc = a.coeffs[k]
        for j in range(1, k + 1):
            acc -= b.coeffs[j] * q[k - j]
        q.append(acc / b0)
    return Jet(a.ctx, a.base_point, q)


def jet_root(a: Jet, k: int) -> Jet:
    """Principal k-th root, continued along the jet by the power recursion."""
    if not isinstance(k, int) or k <= 0:
        raise ValueError(f"Root index must be a positive integer, got {k}")
    mp = a.ctx.mp
    a0 = a.c0
    _require_nonsingular(a, "jet_root")
    if k == 1:
        return a
    r0 = mp.sqrt(a0) if k == 2 else mp.root(a0, k)
    alpha_plus_one = Fraction(1, k) + 1
    b = [r0]
    for n in range(1, a.order + 1):
        acc = mp.mpc(0)
        for j in range(1, n + 1):
            weight = alpha_plus_one * j - n
            if weight:
                acc += a.coeffs[j] * b[n - j] * _rational(a.ctx, weight)
        b.append(acc / (n * a0))
    return Jet(a.ctx, a.base_point, b)


def jet_derivative(a: Jet) -> Jet:
    if a.order == 0:
        raise OrderExhausted("Cannot differentiate an order-0 jet")
    return Jet(a.ctx, a.base_point, [k * c for k, c in enumerate(a.coeffs) if k > 0])


def coefficientwise_deviation(a: Sequence, b: Sequence, relative: bool = True):
    """Largest |a_k - b_k|, each term scaled by max(1, |b_k|) when relative."""
    worst = 0
    for x, y in zip(a, b):
        diff = abs(x - y)
        if relative:
            scale = abs(y)
            if scale > 1:
                diff = diff / scale
        if diff > worst:
            worst = diff
    return worst
