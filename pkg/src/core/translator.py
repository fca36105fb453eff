# Translation proofs: a cubic polynomial in theta = y d/dy applied to both sides of a factorization
from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction
from math import lcm
from typing import Optional, Sequence, Tuple

from ..errors import NoFamilyError, OrderExhausted, RecognitionFailure
from ..tools.recognition import (
    DEFAULT_MAX_DENOMINATOR,
    confirm_rational,
    recognize_rational,
    recognize_surd_multiple,
)
from ..utils import monitor_performance, setup_logging
from .elliptic import legendre_defect
from .factorization import (
    FactorizationCheck,
    FactorizationFamily,
    check_factorization,
    find_complementary_point,
)
from .hyperseries import AlgebraicConstant, DenomPattern, FormulaSpec, exact_terms
from .jet import DEFAULT_JET_ORDER, Jet
from .precision import PrecisionContext

logger = setup_logging()

SERIES_CHECK_TERMS = 30
RECOGNITION_SLACK_DIGITS = 20


class Verdict(str, Enum):
    PROVEN = "PROVEN"
    FAILED = "FAILED"


@dataclass(frozen=True)
class ThetaOperator:
    """p0 + p1 theta + p2 theta^2 + p3 theta^3 with exact coefficients."""

    p0: Fraction = Fraction(0)
    p1: Fraction = Fraction(0)
    p2: Fraction = Fraction(0)
    p3: Fraction = Fraction(0)

    def __post_init__(self):
        for name in ("p0", "p1", "p2", "p3"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))

    @classmethod
    def from_coefficients(cls, coeffs: Sequence) -> "ThetaOperator":
        coeffs = list(coeffs)
        if len(coeffs) > 4:
            if any(coeffs[4:]):
                raise ValueError(f"theta operators have degree at most 3, got {len(coeffs) - 1}")
            coeffs = coeffs[:4]
        return cls(*coeffs)

    @property
    def coefficients(self) -> Tuple[Fraction, ...]:
        return (self.p0, self.p1, self.p2, self.p3)

    @property
    def degree(self) -> int:
        coeffs = self.coefficients
        for k in range(3, -1, -1):
            if coeffs[k]:
                return k
        return 0

    def polynomial(self, n) -> Fraction:
        return ((self.p3 * n + self.p2) * n + self.p1) * n + self.p0

    def __str__(self) -> str:
        return "(" + ", ".join(str(c) for c in self.coefficients) + ")"


def _multiply(a: Sequence[Fraction], b: Sequence[Fraction]) -> list:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def apply_theta_to_series(op: ThetaOperator, f: FormulaSpec) -> FormulaSpec:
    """
    Termwise action of op on sum a_n y^n: a_n becomes op(n) a_n.

    The operator polynomial multiplies f's numerator; rational coefficients are
    cleared into the scale so the numerator stays integral.
    """
    product = _multiply([Fraction(c) for c in f.numerator], op.coefficients)
    denominator = lcm(*(c.denominator for c in product))
    numerator = tuple(int(c * denominator) for c in product)
    return replace(f, numerator=numerator, scale=f.scale / denominator)


def apply_theta_to_rhs(
    op: ThetaOperator,
    family: FactorizationFamily,
    x0,
    ctx: PrecisionContext,
    order: int = DEFAULT_JET_ORDER,
    swap: bool = False,
):
    """
    p0 G + p1 w G' + p2 w (w G')' + p3 w (w (w G')')' at x0, with w = y / y'.

    G is the factorized right-hand side of the family as a function of x; every
    derivative comes from jet arithmetic at x0.
    """
    if order < op.degree:
        raise OrderExhausted(f"a degree-{op.degree} operator needs jets of order >= {op.degree}, got {order}")
    x = Jet.variable(ctx, x0, order)
    y = family.y_map(x)
    w = y.truncate(order - 1) / y.derivative() if order > 0 else None
    current = family.rhs_jet(x, swap=swap)

    coeffs = op.coefficients
    value = ctx.convert(coeffs[0]) * current.c0
    for k in range(1, op.degree + 1):
        d = current.derivative()
        current = w.truncate(d.order) * d
        value += ctx.convert(coeffs[k]) * current.c0
    return value


@dataclass
class ProofReport:
    family: str
    operator: Tuple[Fraction, ...]
    x0: object
    operator_value: object
    surd: int
    pi_power: int
    surd_ratio: Optional[Fraction]
    predicted_ratio: Optional[Fraction]
    predicted_rhs: Optional[str]
    series_match: bool
    factorization: Optional[FactorizationCheck]
    confirmed: bool
    legendre_defect: object
    verdict: Verdict
    target_digits: int
    notes: list = field(default_factory=list)


def _operator_value_ratio(op, family, x0, surd: int, pi_power: int, ctx: PrecisionContext):
    mp = ctx.mp
    value = apply_theta_to_rhs(op, family, x0, ctx)
    return value, value * mp.pi ** pi_power / mp.sqrt(surd)


def _matches_family(f: FormulaSpec, family: FactorizationFamily) -> bool:
    return sorted(f.upper) == sorted(family.upper) and sorted(f.lower) == sorted(family.lower)


@monitor_performance("prove_formula")
def prove_formula(
    f: FormulaSpec,
    family: FactorizationFamily,
    ctx: PrecisionContext,
    x0=None,
    sample_count: int = 3,
) -> ProofReport:
    """
    Prove sum scale * B(n) z^n P(n) = rhs by translating the family's factorization.

    Steps: the factorization passes its numeric check; the operator with P's
    coefficients reproduces the summands exactly; its image on the right-hand
    side at the complementary point, times pi^e / sqrt(d), is a small rational;
    that rational is confirmed at a second working precision.

    Raises:
        NoFamilyError: parameters or argument do not belong to the family
        RecognitionFailure: the operator value is not a rational multiple of sqrt(d)/pi^e
    """
    mp = ctx.mp
    if f.denom_pattern is not DenomPattern.ONE or f.degree > 3:
        raise ValueError("translation proofs need a polynomial summand of degree <= 3 and no denominator")
    if not _matches_family(f, family):
        raise NoFamilyError(f"formula parameters do not match the {family.label} factorization")

    notes = []
    factorization = check_factorization(family, sample_count, ctx)
    if not factorization.passed:
        notes.append("factorization check failed")

    op = ThetaOperator.from_coefficients(f.numerator)
    transformed = replace(apply_theta_to_series(op, family.core_spec(f.z)), start_index=f.start_index)
    expected_terms = exact_terms(f, SERIES_CHECK_TERMS)
    series_terms = [t * f.scale for t in exact_terms(transformed, SERIES_CHECK_TERMS)]
    series_match = series_terms == expected_terms
    if not series_match:
        notes.append("operator does not reproduce the summands")

    if x0 is None:
        x0 = find_complementary_point(family, ctx=ctx)
    y_at_x0 = family.y_map(Jet.scalar(ctx, x0)).c0
    if abs(y_at_x0 - ctx.convert(f.z)) > ctx.tolerance(RECOGNITION_SLACK_DIGITS) * max(1, abs(y_at_x0)):
        raise NoFamilyError(
            f"complementary point maps to y = {mp.nstr(y_at_x0, 15)}, not the formula's argument {f.z}"
        )

    if f.rhs is not None:
        surd, pi_power = f.rhs.surd, f.rhs.pi_power
        predicted_ratio = f.rhs.rat / f.scale
    else:
        surd, pi_power, predicted_ratio = None, 1, None

    tolerance = ctx.tolerance(RECOGNITION_SLACK_DIGITS)
    if surd is None:
        value = apply_theta_to_rhs(op, family, x0, ctx)
        surd_ratio, surd = recognize_surd_multiple(value, ctx, pi_power=pi_power, tolerance=tolerance)
    else:
        value, ratio = _operator_value_ratio(op, family, x0, surd, pi_power, ctx)
        surd_ratio = recognize_rational(ratio, ctx, DEFAULT_MAX_DENOMINATOR, tolerance)

    # second precision: same rational within the same target
    wider = ctx.with_doubled_guard()
    wide_x0 = find_complementary_point(family, initial_guess=x0, ctx=wider)
    _, wide_ratio = _operator_value_ratio(op, family, wide_x0, surd, pi_power, wider)
    confirmed = confirm_rational(wide_ratio, surd_ratio, wider, wider.tolerance(RECOGNITION_SLACK_DIGITS)) is not None
    if not confirmed:
        notes.append("recognized rational not confirmed at doubled guard digits")

    if predicted_ratio is not None and surd_ratio != predicted_ratio:
        notes.append(f"operator gives {surd_ratio}, formula states {predicted_ratio}")

    r0 = family.r1_map(Jet.scalar(ctx, x0)).c0
    defect = legendre_defect(r0, ctx)

    proven = (
        factorization.passed
        and series_match
        and confirmed
        and (predicted_ratio is None or surd_ratio == predicted_ratio)
    )
    verdict = Verdict.PROVEN if proven else Verdict.FAILED
    predicted_rhs = AlgebraicConstant(surd_ratio * f.scale, surd, pi_power)
    logger.info(f"{family.label}: operator value ratio {surd_ratio}, verdict {verdict.value}")
    return ProofReport(
        family=family.label,
        operator=op.coefficients,
        x0=x0,
        operator_value=value,
        surd=surd,
        pi_power=pi_power,
        surd_ratio=surd_ratio,
        predicted_ratio=predicted_ratio,
        predicted_rhs=str(predicted_rhs),
        series_match=series_match,
        factorization=factorization,
        confirmed=confirmed,
        legendre_defect=defect,
        verdict=verdict,
        target_digits=ctx.target_digits,
        notes=notes,
    )


def translation_ratio(f: FormulaSpec, family: FactorizationFamily, ctx: PrecisionContext) -> Fraction:
    """The recognized surd ratio alone; raises RecognitionFailure when there is none."""
    if f.rhs is None:
        raise RecognitionFailure("translation_ratio needs the formula's right-hand side shape")
    op = ThetaOperator.from_coefficients(f.numerator)
    x0 = find_complementary_point(family, ctx=ctx)
    _, ratio = _operator_value_ratio(op, family, x0, f.rhs.surd, f.rhs.pi_power, ctx)
    return recognize_rational(ratio, ctx, tolerance=ctx.tolerance(RECOGNITION_SLACK_DIGITS))
