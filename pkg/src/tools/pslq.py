"""
Fixed-point PSLQ integer relation detection.

Follows Bailey's pseudocode with gamma = 2/sqrt(3), the lattice state held as
Python integers scaled by 2^prec. Indices are 1-based to stay close to the
published algorithm.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import reduce
from typing import Dict, List, Optional, Sequence, Tuple

from ..errors import PrecisionExhausted
from ..utils import setup_logging

logger = setup_logging()

EXTRA_BITS = 60
DEFAULT_MAX_STEPS = 20000


@dataclass(frozen=True)
class RelationResult:
    coefficients: Tuple[int, ...]
    residual: object = field(compare=False, default=0)
    norm_bound: object = field(compare=False, default=None)

    @property
    def found(self) -> bool:
        return bool(self.coefficients)


def _round_fixed(x: int, prec: int) -> int:
    return ((x + (1 << (prec - 1))) >> prec) << prec


def _sqrt_fixed(x: int, prec: int) -> int:
    return math.isqrt(x << prec)


def remove_content(vector: Sequence[int]) -> Tuple[int, ...]:
    content = reduce(math.gcd, (abs(v) for v in vector), 0)
    if content <= 1:
        return tuple(vector)
    return tuple(v // content for v in vector)


def _residual(ctx, values, vector):
    mp = ctx.mp
    return abs(mp.fsum(c * v for c, v in zip(vector, values)))


def pslq(values: Sequence, ctx, max_coeff: int = 10 ** 6, max_steps: int = DEFAULT_MAX_STEPS, tolerance=None):
    """
    Search an integer vector c with |sum c_i v_i| < tolerance * max|v_i| and max|c_i| < max_coeff.

    Returns:
        RelationResult with the content-free coefficients, or with empty
        coefficients and the certified norm bound when none exists below max_coeff.

    Raises:
        PrecisionExhausted: the lattice reduction degenerated before a decision
    """
    mp = ctx.mp
    n = len(values)
    if n < 2:
        raise ValueError("pslq needs at least two values")
    reals = []
    for v in values:
        v = mp.mpc(v)
        if abs(v.imag) > ctx.tolerance() * max(abs(v), 1):
            raise ValueError("pslq works on real vectors")
        reals.append(v.real)
    if any(v == 0 for v in reals):
        raise ValueError("pslq requires a vector of nonzero numbers")

    if tolerance is None:
        tolerance = ctx.tolerance(10)
    largest = max(abs(v) for v in reals)
    prec = mp.prec + EXTRA_BITS
    tol = int(mp.nint(mp.ldexp(tolerance, prec)))
    x = [None] + [int(mp.nint(mp.ldexp(v / largest, prec))) for v in reals]

    minx = min(abs(xx) for xx in x[1:])
    if minx < tol // 100:
        logger.debug("pslq: one entry is below tolerance")
        return RelationResult(coefficients=(), norm_bound=0)

    g = _sqrt_fixed((4 << prec) // 3, prec)
    A: Dict[Tuple[int, int], int] = {}
    B: Dict[Tuple[int, int], int] = {}
    H: Dict[Tuple[int, int], int] = {}
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            A[i, j] = B[i, j] = (i == j) << prec
            H[i, j] = 0

    s = [None] + [0] * n
    for k in range(1, n + 1):
        t = 0
        for j in range(k, n + 1):
            t += x[j] ** 2 >> prec
        s[k] = _sqrt_fixed(t, prec)
    t = s[1]
    y = x[:]
    for k in range(1, n + 1):
        y[k] = (x[k] << prec) // t
        s[k] = (s[k] << prec) // t

    for i in range(1, n + 1):
        for j in range(i + 1, n):
            H[i, j] = 0
        if i <= n - 1:
            H[i, i] = (s[i + 1] << prec) // s[i] if s[i] else 0
        for j in range(1, i):
            sjj1 = s[j] * s[j + 1]
            H[i, j] = ((-y[i] * y[j]) << prec) // sjj1 if sjj1 else 0

    def reduce_row(i: int, j: int) -> None:
        t = _round_fixed((H[i, j] << prec) // H[j, j], prec)
        y[j] = y[j] + (t * y[i] >> prec)
        for k in range(1, j + 1):
            H[i, k] = H[i, k] - (t * H[j, k] >> prec)
        for k in range(1, n + 1):
            A[i, k] = A[i, k] - (t * A[j, k] >> prec)
            B[k, j] = B[k, j] + (t * B[k, i] >> prec)

    for i in range(2, n + 1):
        for j in range(i - 1, 0, -1):
            if H[j, j]:
                reduce_row(i, j)

    norm = 0
    for step in range(max_steps):
        m = -1
        szmax = -1
        for i in range(1, n):
            sz = (g ** i * abs(H[i, i])) >> (prec * (i - 1))
            if sz > szmax:
                m = i
                szmax = sz

        y[m], y[m + 1] = y[m + 1], y[m]
        for i in range(1, n + 1):
            H[m, i], H[m + 1, i] = H[m + 1, i], H[m, i]
            A[m, i], A[m + 1, i] = A[m + 1, i], A[m, i]
            B[i, m], B[i, m + 1] = B[i, m + 1], B[i, m]

        if m <= n - 2:
            t0 = _sqrt_fixed((H[m, m] ** 2 + H[m, m + 1] ** 2) >> prec, prec)
            if not t0:
                raise PrecisionExhausted(f"pslq: lattice degenerated at step {step}")
            t1 = (H[m, m] << prec) // t0
            t2 = (H[m, m + 1] << prec) // t0
            for i in range(m, n + 1):
                t3 = H[i, m]
                t4 = H[i, m + 1]
                H[i, m] = (t1 * t3 + t2 * t4) >> prec
                H[i, m + 1] = (-t2 * t3 + t1 * t4) >> prec

        for i in range(m + 1, n + 1):
            for j in range(min(i - 1, m + 1), 0, -1):
                try:
                    reduce_row(i, j)
                except ZeroDivisionError:
                    raise PrecisionExhausted(f"pslq: zero pivot at step {step}")

        for i in range(1, n + 1):
            if abs(y[i]) < tol:
                vector = [int(_round_fixed(B[j, i], prec) >> prec) for j in range(1, n + 1)]
                if not any(vector) or max(abs(v) for v in vector) >= max_coeff:
                    continue
                vector = remove_content(vector)
                residual = _residual(ctx, reals, vector)
                if residual < tolerance * largest:
                    logger.info(f"pslq: relation found after {step + 1} steps, residual {mp.nstr(residual, 3)}")
                    return RelationResult(coefficients=vector, residual=residual, norm_bound=norm)

        recnorm = max(abs(h) for h in H.values())
        if recnorm:
            norm = ((1 << (2 * prec)) // recnorm) >> prec
            norm //= 100
        else:
            raise PrecisionExhausted("pslq: reduced matrix vanished")
        if norm >= max_coeff:
            break

    logger.info(f"pslq: no relation with coefficients below {max_coeff}; norm bound {norm}")
    return RelationResult(coefficients=(), norm_bound=norm)


def relation_residual(values: Sequence, vector: Sequence[int], ctx):
    return _residual(ctx, [ctx.mp.mpc(v).real for v in values], vector)


def permuted(vector: Sequence[int], order: List[int]) -> Tuple[int, ...]:
    """Coefficients of a relation found on values[order] expressed on the original order."""
    out = [0] * len(vector)
    for position, index in enumerate(order):
        out[index] = vector[position]
    return tuple(out)
