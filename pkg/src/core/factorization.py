# Orr-type factorizations of the 4F3 series as products of two 2F1 / K factors
from __future__ import annotations

import cmath
import random
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import List, Optional, Tuple

from ..errors import NewtonNonConvergence
from ..utils import setup_logging
from .elliptic import ellip_K_parameter
from .hyperseries import FormulaSpec, hyper_sum_jet
from .jet import DEFAULT_JET_ORDER, Jet, coefficientwise_deviation, jet_root
from .precision import PrecisionContext

logger = setup_logging()

NEWTON_MAX_ITERATIONS = 200
SAMPLE_SEED = 20240229


class FamilyId(str, Enum):
    GENERIC = "generic"
    FAM1 = "fam1"
    FAM2 = "fam2"
    FAM3 = "fam3"


def orr_parameters(s: Fraction) -> Tuple[Tuple[Fraction, ...], Tuple[Fraction, ...]]:
    """Pochhammer parameters of B(n, s): (s/2, (1-s)/2, (1+s)/2, 1-s/2) over (1/2, 1, 1, 1)."""
    s = Fraction(s)
    upper = (s / 2, (1 - s) / 2, (1 + s) / 2, 1 - s / 2)
    lower = (Fraction(1, 2), Fraction(1), Fraction(1), Fraction(1))
    return upper, lower


def infer_s(upper) -> Optional[Fraction]:
    """Recover s from a B(n, s) parameter list, or None if the list has another shape."""
    wanted = sorted(Fraction(u) for u in upper)
    for u in wanted:
        candidate = 2 * u
        if sorted(orr_parameters(candidate)[0]) == wanted:
            return candidate
    return None


def _f_quarter_parts(u: Jet) -> Tuple[Jet, Jet]:
    """2F1(1/4,3/4;1;u) = (2/pi) K(sqrt(r)) / sqrt(1+sqrt(u)), r = 2 sqrt(u)/(1+sqrt(u))."""
    su = jet_root(u, 2)
    r = 2 * su / (1 + su)
    return r, jet_root(1 + su, 2)


class FactorizationFamily:
    family_id: FamilyId
    sample_interval: Tuple[float, float] = (0.0, 0.05)
    interior_point: Fraction = Fraction(1, 40)

    def __init__(self, s: Fraction = Fraction(1, 4)):
        self.s = Fraction(s)
        self.upper, self.lower = orr_parameters(self.s)

    @property
    def label(self) -> str:
        return self.family_id.value

    def core_spec(self, z: Fraction) -> FormulaSpec:
        return FormulaSpec(self.upper, self.lower, z)

    # ----- maps -----

    def y_map(self, x: Jet) -> Jet:
        raise NotImplementedError

    def r1_map(self, x: Jet) -> Jet:
        raise NotImplementedError

    def r2_map(self, x: Jet) -> Jet:
        raise NotImplementedError

    def prefactor(self, x: Jet) -> Jet:
        raise NotImplementedError

    def factors(self, x: Jet) -> Tuple[Jet, Jet]:
        return ellip_K_parameter(self.r1_map(x)), ellip_K_parameter(self.r2_map(x))

    def lhs_jet(self, x: Jet) -> Jet:
        return hyper_sum_jet(self.upper, self.lower, self.y_map(x))

    def rhs_jet(self, x: Jet, swap: bool = False) -> Jet:
        first, second = self.factors(x)
        if swap:
            first, second = second, first
        return self.prefactor(x) * first * second

    # ----- complementary point data -----

    def x0_closed_form(self, ctx: PrecisionContext):
        return None

    def initial_guess(self, ctx: PrecisionContext):
        return None

    def complementary_y0(self) -> Optional[Fraction]:
        return None

    def sample_points(self, count: int, rng: random.Random) -> list:
        lo, hi = self.sample_interval
        return [Fraction(rng.uniform(lo, hi)) for _ in range(count)]


class GenericFamily(FactorizationFamily):
    """x is y itself; the factors are 2F1(s, 1-s; 1; (1 - sqrt(1-y) +- sqrt(-y))/2) by direct series."""

    family_id = FamilyId.GENERIC
    interior_point = Fraction(1, 5)

    @property
    def label(self) -> str:
        return f"generic(s={self.s})"

    def y_map(self, x: Jet) -> Jet:
        return x

    def _halves(self, x: Jet) -> Tuple[Jet, Jet]:
        base = (1 - jet_root(1 - x, 2)) / 2
        odd = jet_root(-x, 2) / 2
        return base, odd

    def r1_map(self, x: Jet) -> Jet:
        base, odd = self._halves(x)
        return base + odd

    def r2_map(self, x: Jet) -> Jet:
        base, odd = self._halves(x)
        return base - odd

    def prefactor(self, x: Jet) -> Jet:
        return x.lift(1)

    def factors(self, x: Jet) -> Tuple[Jet, Jet]:
        params = (self.s, 1 - self.s)
        ones = (Fraction(1), Fraction(1))
        base, odd = self._halves(x)
        return hyper_sum_jet(params, ones, base + odd), hyper_sum_jet(params, ones, base - odd)

    def sample_points(self, count: int, rng: random.Random) -> list:
        points = []
        for _ in range(count):
            radius = 0.45 * rng.random() ** 0.5
            angle = rng.uniform(-cmath.pi, cmath.pi)
            w = cmath.rect(radius, angle)
            points.append(complex(w.real, w.imag))
        return points


class QuarterFamily(FactorizationFamily):
    def __init__(self):
        super().__init__(Fraction(1, 4))


class Fam1Family(QuarterFamily):
    """y = -4x^2(x-1)^2/(2x-1)^2, product f(x) f(x/(2x-1))."""

    family_id = FamilyId.FAM1
    sample_interval = (0.0, 0.05)
    interior_point = Fraction(1, 40)

    def y_map(self, x: Jet) -> Jet:
        return -4 * x ** 2 * (x - 1) ** 2 / (2 * x - 1) ** 2

    def _companion(self, x: Jet) -> Jet:
        return x / (2 * x - 1)

    def r1_map(self, x: Jet) -> Jet:
        return _f_quarter_parts(x)[0]

    def r2_map(self, x: Jet) -> Jet:
        return _f_quarter_parts(self._companion(x))[0]

    def prefactor(self, x: Jet) -> Jet:
        mp = x.ctx.mp
        _, d1 = _f_quarter_parts(x)
        _, d2 = _f_quarter_parts(self._companion(x))
        return (2 / mp.pi) ** 2 / (d1 * d2)

    def x0_closed_form(self, ctx: PrecisionContext):
        mp = ctx.mp
        return mp.mpc(1, 4 * mp.sqrt(3)) / 49

    def initial_guess(self, ctx: PrecisionContext):
        return ctx.mp.mpc("0.02", "0.14")

    def complementary_y0(self) -> Fraction:
        return Fraction(192, 2401)


class _QuarterHFamily(QuarterFamily):
    """Shared pieces of the y = -4x^2/(x^2-1)^2 families."""

    sample_interval = (0.0, 0.3)
    interior_point = Fraction(1, 5)

    def y_map(self, x: Jet) -> Jet:
        return -4 * x ** 2 / (x ** 2 - 1) ** 2

    @staticmethod
    def _h(x: Jet) -> Jet:
        return jet_root(x / (x + 1), 2)

    @staticmethod
    def _inner(x: Jet) -> Jet:
        return (1 - jet_root(1 - x, 2)) / 2

    def r2_map(self, x: Jet) -> Jet:
        h = self._h(x)
        return 2 * h / (1 + h)


class Fam2Family(_QuarterHFamily):
    """g = sqrt(1/2 - sqrt(1-x)/2), h = sqrt(x/(x+1)); moduli 2 sqrt(g)/(1+g) and sqrt(2h/(1+h))."""

    family_id = FamilyId.FAM2

    def r1_map(self, x: Jet) -> Jet:
        g = jet_root(self._inner(x), 2)
        return 4 * g / (1 + g) ** 2

    def prefactor(self, x: Jet) -> Jet:
        mp = x.ctx.mp
        g = jet_root(self._inner(x), 2)
        h = self._h(x)
        return (4 / mp.pi ** 2) * jet_root(1 - x, 4) / ((1 + g) * jet_root(1 + h, 2))

    def x0_closed_form(self, ctx: PrecisionContext):
        mp = ctx.mp
        return mp.mpc((85 * mp.sqrt(41) - 529) / 128)

    def initial_guess(self, ctx: PrecisionContext):
        return ctx.mp.mpc("0.1")

    def complementary_y0(self) -> Fraction:
        return Fraction(-2 ** 14, 23 ** 4)


class Fam3Family(_QuarterHFamily):
    """g = 1/2 - sqrt(1-x)/2 used directly as a parameter; same h as FAM2."""

    family_id = FamilyId.FAM3
    y_guess = "0.7"

    def r1_map(self, x: Jet) -> Jet:
        return self._inner(x)

    def prefactor(self, x: Jet) -> Jet:
        mp = x.ctx.mp
        return (4 / mp.pi ** 2) * jet_root(1 - x, 4) / jet_root(1 + self._h(x), 2)

    def x0_closed_form(self, ctx: PrecisionContext):
        # positive root of 64 x^2 + 49 x - 64 = 0, i.e. y(x) = -2^14/7^4
        mp = ctx.mp
        return mp.mpc((17 * mp.sqrt(65) - 49) / 128)

    def initial_guess(self, ctx: PrecisionContext):
        return solve_y_map(self, self.complementary_y0(), ctx.mp.mpc(self.y_guess), ctx)

    def complementary_y0(self) -> Fraction:
        return Fraction(-2 ** 14, 7 ** 4)


_FAMILIES = {
    FamilyId.FAM1: Fam1Family,
    FamilyId.FAM2: Fam2Family,
    FamilyId.FAM3: Fam3Family,
}


def get_family(family_id, s: Optional[Fraction] = None) -> FactorizationFamily:
    family_id = FamilyId(family_id)
    if family_id is FamilyId.GENERIC:
        if s is None:
            raise ValueError("The generic family needs a value of s")
        return GenericFamily(Fraction(s))
    if s is not None and Fraction(s) != Fraction(1, 4):
        raise ValueError(f"{family_id.value} is an s = 1/4 family")
    return _FAMILIES[family_id]()


# -------------------- operations --------------------

def _is_base_point(x, ctx: PrecisionContext) -> bool:
    # every family is normalized to 1 at x = 0, where its radicals stop being analytic
    return ctx.convert(x) == 0


def eval_lhs(family: FactorizationFamily, x, ctx: PrecisionContext):
    if _is_base_point(x, ctx):
        return ctx.mp.mpc(1)
    return family.lhs_jet(Jet.scalar(ctx, x)).c0


def eval_rhs(family: FactorizationFamily, x, ctx: PrecisionContext, swap: bool = False):
    if _is_base_point(x, ctx):
        return ctx.mp.mpc(1)
    return family.rhs_jet(Jet.scalar(ctx, x), swap=swap).c0


def _newton(residual, guess, ctx: PrecisionContext, what: str):
    mp = ctx.mp
    x = ctx.convert(guess)
    eps = ctx.eps()
    for iteration in range(NEWTON_MAX_ITERATIONS):
        jet = residual(Jet.variable(ctx, x, 1))
        value, slope = jet.coeffs
        if abs(slope) <= eps:
            raise NewtonNonConvergence(f"{what}: derivative vanishes at {mp.nstr(x, 10)}")
        step = value / slope
        x = x - step
        if abs(step) <= eps * max(abs(x), 1) * 1000:
            logger.debug(f"{what}: Newton converged after {iteration + 1} iterations")
            return x
    raise NewtonNonConvergence(f"{what}: no convergence after {NEWTON_MAX_ITERATIONS} iterations")


def solve_y_map(family: FactorizationFamily, y0, guess, ctx: PrecisionContext):
    """Newton on y_map(x) = y0."""
    target = ctx.convert(y0)
    return _newton(lambda x: family.y_map(x) - target, guess, ctx, f"{family.label} y_map")


def complementarity(family: FactorizationFamily, x, ctx: PrecisionContext):
    x = Jet.scalar(ctx, x)
    return (family.r1_map(x) + family.r2_map(x) - 1).c0


def find_complementary_point(family: FactorizationFamily, initial_guess=None, ctx: PrecisionContext = None):
    """x0 with r1_map(x0) + r2_map(x0) = 1, by Newton on order-1 jets."""
    if isinstance(family, GenericFamily):
        raise ValueError("The generic family has no complementary point")
    if initial_guess is None:
        initial_guess = family.initial_guess(ctx)
    x0 = _newton(
        lambda x: family.r1_map(x) + family.r2_map(x) - 1,
        initial_guess,
        ctx,
        f"{family.label} complementarity",
    )
    residual = abs(complementarity(family, x0, ctx))
    if residual >= ctx.tolerance():
        raise NewtonNonConvergence(f"complementarity residual {ctx.mp.nstr(residual, 5)} above tolerance")
    return x0


@dataclass
class FactorizationCheck:
    family: str
    samples: int
    max_deviation: object
    jet_deviation: object
    passed: bool
    points: List[object] = field(default_factory=list)


def check_factorization(
    family: FactorizationFamily,
    sample_count: int,
    ctx: PrecisionContext,
    rng: Optional[random.Random] = None,
    jet_order: int = DEFAULT_JET_ORDER,
) -> FactorizationCheck:
    mp = ctx.mp
    rng = rng or random.Random(SAMPLE_SEED)
    points = family.sample_points(sample_count, rng)
    worst = mp.mpf(0)
    for x in points:
        deviation = abs(eval_lhs(family, x, ctx) - eval_rhs(family, x, ctx))
        worst = max(worst, deviation)

    jet_worst = mp.mpf(0)
    if sample_count > 0:
        x = Jet.variable(ctx, family.interior_point, jet_order)
        jet_worst = coefficientwise_deviation(family.lhs_jet(x).coeffs, family.rhs_jet(x).coeffs)

    passed = worst < ctx.tolerance(5) and jet_worst < ctx.tolerance(10)
    logger.info(
        f"{family.label}: {sample_count} samples, max deviation {mp.nstr(worst, 5)}, "
        f"jet deviation {mp.nstr(jet_worst, 5)}"
    )
    return FactorizationCheck(
        family=family.label,
        samples=sample_count,
        max_deviation=worst,
        jet_deviation=jet_worst,
        passed=bool(passed),
        points=points,
    )
