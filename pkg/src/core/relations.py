# Integer relations: t(j) moment sums, PSLQ, and square roots of quadratic forms
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import List, Optional, Sequence, Tuple

from ..errors import DivergentSeries, NotRankOne, PrecisionExhausted, SeriesNonConvergence
from ..tools.pslq import RelationResult, pslq, relation_residual, remove_content
from ..tools.recognition import squarefree_decomposition
from ..utils import monitor_performance, setup_logging
from .hyperseries import (
    AlgebraicConstant,
    DenomPattern,
    FormulaSpec,
    VerificationResult,
    max_terms,
    pochhammer_part,
    tail_ratio,
    verify_formula,
)
from .precision import PrecisionContext

logger = setup_logging()

DISCOVERY_DEGREE = 2
MIN_VERIFY_DIGITS = 100

__all__ = [
    "RelationResult",
    "QuadraticFormSqrt",
    "DiscoveryResult",
    "compute_t_basis",
    "pslq",
    "quadratic_vector",
    "linear_factor",
    "sqrt_of_quadratic_form",
    "discover_formula",
]


@dataclass(frozen=True)
class QuadraticFormSqrt:
    """(a . t)^2 = scale^2 where the relation was sum Q_ij t_i t_j = c / pi^2."""

    linear: Tuple[int, ...]
    scale: AlgebraicConstant
    multiplier: int = 1


@dataclass
class DiscoveryResult:
    formula: Optional[FormulaSpec]
    relation: RelationResult
    root: Optional[QuadraticFormSqrt] = None
    verification: Optional[VerificationResult] = None
    notes: List[str] = field(default_factory=list)

    @property
    def found(self) -> bool:
        return self.formula is not None


def compute_t_basis(
    core: FormulaSpec,
    y0,
    j_max: int,
    ctx: PrecisionContext,
    pattern: DenomPattern = DenomPattern.TWO_N_PLUS_ONE,
) -> list:
    """
    t(j) = sum_n prod (u)_n / prod (l)_n * y0^n * n^j / D(n) for j = 0..j_max, in one pass.
    """
    y0 = Fraction(y0)
    pattern = DenomPattern(pattern)
    spec = FormulaSpec(core.upper, core.lower, y0, denom_pattern=pattern, start_index=pattern.first_safe_index)
    if not spec.convergent:
        raise DivergentSeries(f"t(j) needs |y0| < 1, got {y0}")
    mp = ctx.mp
    threshold = ctx.eps()
    rho = tail_ratio(y0)
    rho_mp = ctx.real(rho)
    tail_factor = rho_mp / (1 - rho_mp)
    limit = max_terms(ctx, rho)

    totals = [mp.mpf(0)] * (j_max + 1)
    term = ctx.real(pochhammer_part(spec, spec.start_index))
    n = spec.start_index
    previous = None
    for used in range(1, limit + 1):
        base = term / pattern.evaluate(n)
        power = mp.mpf(1)
        size = mp.mpf(0)
        for j in range(j_max + 1):
            moment = base * power
            totals[j] += moment
            size = max(size, abs(moment))
            power *= n
        settled = previous is None or size <= previous
        if size < threshold and size * tail_factor < threshold and used >= 2 and settled:
            logger.debug(f"t-basis summed with {used} terms")
            return [mp.mpc(t) for t in totals]
        ratio = spec.pochhammer_ratio(n)
        term = term * ratio.numerator / ratio.denominator
        previous = size
        n += 1
    raise SeriesNonConvergence(f"t-basis not settled after {limit} terms")


def quadratic_vector(t: Sequence, ctx: PrecisionContext) -> list:
    """[1/pi^2, t_0^2, ..., t_k^2, t_0 t_1, t_0 t_2, ..., t_{k-1} t_k]."""
    mp = ctx.mp
    values = [1 / mp.pi ** 2]
    values.extend(ti * ti for ti in t)
    values.extend(t[i] * t[j] for i, j in combinations(range(len(t)), 2))
    return values


def _basis_size(length: int) -> int:
    # 1 + k + k(k-1)/2 entries for k basis values
    k = 1
    while 1 + k + k * (k - 1) // 2 < length:
        k += 1
    if 1 + k + k * (k - 1) // 2 != length:
        raise ValueError(f"a relation of length {length} is not a constant plus a quadratic form")
    return k


def _exact_sqrt(n: int) -> Optional[int]:
    if n < 0:
        return None
    root = math.isqrt(n)
    return root if root * root == n else None


def linear_factor(diagonal: Sequence[int], cross: Sequence[int]) -> Tuple[Tuple[int, ...], int]:
    """
    Integer a and multiplier m with m * Q = a a^T, where Q has the given
    diagonal and off-diagonal sums cross (coefficient of t_i t_j for i < j,
    i.e. 2 Q_ij). m is the squarefree part of the first nonzero diagonal entry.

    Raises:
        NotRankOne: no such a exists
    """
    k = len(diagonal)
    pairs = list(combinations(range(k), 2))
    if len(cross) != len(pairs):
        raise ValueError(f"{k} diagonal entries need {len(pairs)} cross terms, got {len(cross)}")
    cross_of = dict(zip(pairs, cross))
    pivot = next((i for i, d in enumerate(diagonal) if d), None)
    if pivot is None:
        raise NotRankOne("quadratic form has a zero diagonal")
    if diagonal[pivot] < 0:
        raise NotRankOne("leading diagonal entry is negative")
    _, multiplier = squarefree_decomposition(diagonal[pivot])

    a = [0] * k
    a[pivot] = _exact_sqrt(multiplier * diagonal[pivot])
    for j in range(k):
        if j == pivot:
            continue
        pair = (min(pivot, j), max(pivot, j))
        numerator = multiplier * cross_of[pair]
        if numerator % (2 * a[pivot]):
            raise NotRankOne(f"cross term t_{pair[0]} t_{pair[1]} is not 2 a_i a_j")
        a[j] = numerator // (2 * a[pivot])
    for j in range(k):
        if a[j] * a[j] != multiplier * diagonal[j]:
            raise NotRankOne(f"diagonal entry {diagonal[j]} is not a square after scaling")
    for (i, j), c in cross_of.items():
        if 2 * a[i] * a[j] != multiplier * c:
            raise NotRankOne(f"cross term {c} for t_{i} t_{j} does not match 2 a_i a_j")
    return tuple(a), multiplier


def sqrt_of_quadratic_form(relation: RelationResult) -> QuadraticFormSqrt:
    """
    From c/pi^2 + sum Q t t = 0, the linear form a with (a . t)^2 = m(-c)/pi^2
    and scale = sqrt(-m c)/pi written as square times squarefree.
    """
    coeffs = remove_content(relation.coefficients)
    if not coeffs:
        raise NotRankOne("no relation to take the square root of")
    k = _basis_size(len(coeffs))
    diagonal = coeffs[1 : 1 + k]
    first = next((d for d in diagonal if d), 0)
    if first < 0:
        coeffs = tuple(-c for c in coeffs)
        diagonal = coeffs[1 : 1 + k]
    linear, multiplier = linear_factor(diagonal, coeffs[1 + k :])
    constant = -coeffs[0] * multiplier
    if constant <= 0:
        raise NotRankOne("the constant side of the form is not positive")
    root, squarefree = squarefree_decomposition(constant)
    scale = AlgebraicConstant(Fraction(root), squarefree, 1)
    return QuadraticFormSqrt(linear=linear, scale=scale, multiplier=multiplier)


def _relation_holds(values, vector, ctx: PrecisionContext) -> bool:
    mp = ctx.mp
    largest = max(abs(mp.mpc(v)) for v in values)
    return relation_residual(values, vector, ctx) < ctx.tolerance(10) * largest


@monitor_performance("discover_formula")
def discover_formula(
    core: FormulaSpec,
    y0,
    pattern: DenomPattern,
    ctx: PrecisionContext,
    max_coeff: int = 10 ** 12,
    j_max: int = DISCOVERY_DEGREE,
) -> DiscoveryResult:
    """
    Find sum B(n) y0^n (a_0 + a_1 n + ... ) / D(n) = q sqrt(d) / pi.

    compute_t_basis -> pslq on [1/pi^2, t_i t_j] -> sqrt_of_quadratic_form, then
    the assembled formula must pass verify_formula at >= 100 digits.
    """
    y0 = Fraction(y0)
    pattern = DenomPattern(pattern)
    mp = ctx.mp
    t = compute_t_basis(core, y0, j_max, ctx, pattern)
    vanishing = [j for j, tj in enumerate(t) if abs(tj) <= ctx.tolerance()]
    if y0 == 0 or vanishing:
        # a single rational term remains, and t(j) for j >= 1 is zero when it sits at n = 0
        logger.info(f"t basis degenerates at y0 = {y0}; nothing to search")
        return DiscoveryResult(
            formula=None,
            relation=RelationResult(coefficients=(), norm_bound=None),
            notes=[f"t basis degenerates at y0 = {y0}"],
        )
    values = quadratic_vector(t, ctx)
    relation = pslq(values, ctx, max_coeff=max_coeff)
    if not relation.found:
        return DiscoveryResult(formula=None, relation=relation, notes=[f"no relation below {max_coeff}"])

    wider = ctx.with_doubled_guard()
    wide_values = quadratic_vector(compute_t_basis(core, y0, j_max, wider, pattern), wider)
    if not _relation_holds(wide_values, relation.coefficients, wider):
        raise PrecisionExhausted("relation does not survive doubled guard digits; raise the precision")

    try:
        root = sqrt_of_quadratic_form(relation)
    except NotRankOne as e:
        logger.warning(f"relation found but not a square: {e}")
        return DiscoveryResult(formula=None, relation=relation, notes=[str(e)])

    linear = root.linear
    if mp.re(mp.fsum(a * ti for a, ti in zip(linear, t))) < 0:
        linear = tuple(-a for a in linear)
    content = math.gcd(*linear)
    linear = tuple(a // content for a in linear)
    rhs = root.scale.scaled(Fraction(1, content))
    formula = FormulaSpec(
        core.upper,
        core.lower,
        y0,
        numerator=linear,
        denom_pattern=pattern,
        rhs=rhs,
        start_index=pattern.first_safe_index,
    )

    check_ctx = ctx if ctx.target_digits >= MIN_VERIFY_DIGITS else ctx.with_target(MIN_VERIFY_DIGITS)
    verification = verify_formula(formula, check_ctx)
    if not verification.match:
        logger.warning(f"assembled formula only agrees to {verification.digits_agreed} digits")
        return DiscoveryResult(
            formula=None,
            relation=relation,
            root=root,
            verification=verification,
            notes=["assembled formula failed verification"],
        )
    logger.info(f"discovered numerator {linear} with right-hand side {rhs}")
    return DiscoveryResult(formula=formula, relation=relation, root=root, verification=verification)
