# Gosper telescoping over QQ at specialized parameters, and equivalences between contiguous formulas
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Callable, List, Optional, Sequence, Tuple

from sympy import Dummy, Poly, QQ, Rational, cancel, expand, linsolve, symbols
from sympy.concrete.gosper import gosper_normal

from ..errors import CertificateNotFound, NoLinearRelation
from ..utils import format_rational, monitor_performance, setup_logging
from .factorization import infer_s, orr_parameters
from .hyperseries import AlgebraicConstant, DenomPattern, FormulaSpec, exact_terms
from .translator import Verdict

logger = setup_logging()

_n = symbols("n")

CHECK_POINTS = 50
DIRECT_CHECK_TERMS = 30


# -------------------- exact polynomial helpers --------------------

def _to_sympy(value: Fraction) -> Rational:
    value = Fraction(value)
    return Rational(value.numerator, value.denominator)


def _to_fraction(value) -> Fraction:
    value = Rational(value)
    return Fraction(int(value.p), int(value.q))


def poly_from_coeffs(coeffs: Sequence) -> Poly:
    """Ascending coefficients to a Poly in n over QQ."""
    return Poly([_to_sympy(c) for c in reversed(tuple(coeffs))], _n, domain=QQ)


def coeffs_from_poly(poly: Poly) -> Tuple[Fraction, ...]:
    if poly.is_zero:
        return (Fraction(0),)
    return tuple(_to_fraction(c) for c in reversed(poly.all_coeffs()))


def eval_coeffs(coeffs: Sequence[Fraction], n) -> Fraction:
    value = Fraction(0)
    for c in reversed(coeffs):
        value = value * n + c
    return value


# -------------------- terms and certificates --------------------

@dataclass(frozen=True)
class HyperTerm:
    """v(n) from v(n_start) = initial and v(n+1)/v(n) = num(n)/den(n)."""

    num: Tuple[Fraction, ...]
    den: Tuple[Fraction, ...]
    initial: Fraction
    n_start: int = 0
    direct: Optional[Callable[[int], Fraction]] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "num", tuple(Fraction(c) for c in self.num))
        object.__setattr__(self, "den", tuple(Fraction(c) for c in self.den))
        object.__setattr__(self, "initial", Fraction(self.initial))
        for n in range(self.n_start, self.n_start + CHECK_POINTS + 2):
            if eval_coeffs(self.den, n) == 0:
                raise ValueError(f"ratio denominator vanishes at n = {n}")

    def ratio(self, n: int) -> Fraction:
        return eval_coeffs(self.num, n) / eval_coeffs(self.den, n)

    def values(self, count: int) -> List[Fraction]:
        """v(n_start), ..., v(n_start + count - 1) by the ratio recurrence."""
        out = []
        value = self.initial
        for k in range(count):
            out.append(value)
            value = value * self.ratio(self.n_start + k)
        return out

    def value(self, n: int) -> Fraction:
        if self.direct is not None:
            return self.direct(n)
        return self.values(n - self.n_start + 1)[-1]

    def matches_direct(self, count: int = DIRECT_CHECK_TERMS) -> bool:
        if self.direct is None:
            return True
        return self.values(count) == [self.direct(self.n_start + k) for k in range(count)]


@dataclass(frozen=True)
class GosperCertificate:
    """w(n) = R(n) v(n) with w(n+1) - w(n) = v(n); R = r_num / r_den."""

    r_num: Tuple[Fraction, ...]
    r_den: Tuple[Fraction, ...]
    term: HyperTerm = field(compare=False, repr=False)

    def R(self, n: int) -> Fraction:
        return eval_coeffs(self.r_num, n) / eval_coeffs(self.r_den, n)

    def w(self, n: int, v: Optional[Fraction] = None) -> Fraction:
        if v is None:
            v = self.term.value(n)
        return self.R(n) * v

    def check_points(self, count: int = CHECK_POINTS) -> bool:
        """w(n+1) - w(n) = v(n) exactly for n = n_start .. n_start + count."""
        vs = self.term.values(count + 2)
        start = self.term.n_start
        for k in range(count + 1):
            n = start + k
            if self.w(n + 1, vs[k + 1]) - self.w(n, vs[k]) != vs[k]:
                logger.warning(f"telescoping fails at n = {n}")
                return False
        return True

    def identity_holds(self) -> bool:
        """R(n+1) num(n) / den(n) - R(n) = 1 as rational functions."""
        a, b = poly_from_coeffs(self.r_num), poly_from_coeffs(self.r_den)
        p, q = poly_from_coeffs(self.term.num), poly_from_coeffs(self.term.den)
        lhs = a.shift(1) * p * b - a * b.shift(1) * q - b.shift(1) * b * q
        return lhs.is_zero

    def partial_sum_matches(self, upto: int) -> bool:
        """sum_{n=n_start}^{upto} v(n) = w(upto+1) - w(n_start)."""
        count = upto - self.term.n_start + 2
        vs = self.term.values(count)
        total = sum(vs[:-1], Fraction(0))
        return total == self.w(upto + 1, vs[-1]) - self.w(self.term.n_start, vs[0])


def normal_form(p: Poly, q: Poly) -> Tuple[Poly, Poly, Poly]:
    """
    p/q = Z A(n) C(n+1) / (B(n) C(n)) as sympy's Gosper normal form (Z*A, B, C),
    after cancelling the common factor sympy expects to be gone.
    """
    common = p.gcd(q)
    p, q = p.quo(common), q.quo(common)
    A, B, C = gosper_normal(p.as_expr(), q.as_expr(), _n)
    return A.set_domain(QQ), B.set_domain(QQ), C.set_domain(QQ)


def _degree_candidates(A: Poly, B: Poly, C: Poly) -> List[int]:
    # sympy's gosper_term bound; it only accepts closed-form terms, our terms come as ratios
    N, M, K = A.degree(), B.degree(), C.degree()
    if N != M or A.LC() != B.LC():
        candidates = {K - max(N, M)}
    elif N == 0:
        candidates = {K - N + 1, 0}
    else:
        candidates = {K - N + 1, (B.nth(N - 1) - A.nth(N - 1)) / A.LC()}
    return sorted(int(d) for d in candidates if Rational(d).is_integer and d >= 0)


def gosper(term: HyperTerm) -> Optional[GosperCertificate]:
    """
    Gosper's algorithm on a hypergeometric term over QQ.

    Returns the certificate R with w = R v, or None when the key equation
    A(n) x(n+1) - B(n-1) x(n) = C(n) has no polynomial solution.
    """
    A, B, C = normal_form(poly_from_coeffs(term.num), poly_from_coeffs(term.den))
    B = B.shift(-1)
    degrees = _degree_candidates(A, B, C)
    if not degrees:
        return None
    d = max(degrees)

    unknowns = symbols(f"c:{d + 1}", cls=Dummy)
    domain = A.get_domain().inject(*unknowns)
    x = Poly(list(unknowns), _n, domain=domain)
    H = A * x.shift(1) - B * x - C
    solutions = list(linsolve(H.coeffs(), list(unknowns)))
    if not solutions:
        return None
    assignment = dict(zip(unknowns, solutions[0]))
    x_expr = x.as_expr().subs(assignment, simultaneous=True)
    x_expr = x_expr.subs({c: 0 for c in unknowns})
    x_poly = Poly(x_expr, _n, domain=QQ)
    if x_poly.is_zero:
        return None

    r_num, r_den = B * x_poly, C
    common = r_num.gcd(r_den)
    r_num, r_den = r_num.quo(common), r_den.quo(common)
    lc = r_den.LC()
    r_num, r_den = r_num.quo_ground(lc), r_den.quo_ground(lc)
    logger.debug(f"gosper: key equation solved with degree bound {d}")
    return GosperCertificate(coeffs_from_poly(r_num), coeffs_from_poly(r_den), term)


# -------------------- the contiguity identity --------------------

def formequiv_bracket(s: Fraction, z: Fraction) -> Tuple[Fraction, ...]:
    """
    Ascending coefficients of N(n) with
    N(n)/(2n+1) = (s(s^2-1)(s-2) + 4(1+2s-2s^2) n + 8(1+s-s^2) n^2)/(2n+1) - 8(1-z) n^3/z + 12 n^2.
    """
    s, z = Fraction(s), Fraction(z)
    a = s * (s * s - 1) * (s - 2)
    b = 4 * (1 + 2 * s - 2 * s * s)
    c = 8 * (1 + s - s * s)
    k = 8 * (1 - z) / z
    # (2n+1)(12 n^2 - k n^3) = 12 n^2 + (24 - k) n^3 - 2k n^4
    return (a, b, c + 12, 24 - k, -2 * k)


def _check_parameters(s: Fraction, z: Fraction) -> Tuple[Fraction, Fraction]:
    s, z = Fraction(s), Fraction(z)
    if s.denominator == 1:
        raise ValueError(f"s must not be an integer, got {s}")
    if z == 0:
        raise ValueError("z must be nonzero")
    return s, z


def formequiv_spec(s, z) -> FormulaSpec:
    """The telescoping summand B(n,s) z^n N(n)/(2n+1) as a FormulaSpec with an integral numerator."""
    s, z = _check_parameters(s, z)
    upper, lower = orr_parameters(s)
    coeffs = formequiv_bracket(s, z)
    denominator = lcm(*(c.denominator for c in coeffs))
    numerator = tuple(int(c * denominator) for c in coeffs)
    return FormulaSpec(
        upper,
        lower,
        z,
        numerator=numerator,
        denom_pattern=DenomPattern.TWO_N_PLUS_ONE,
        rhs=AlgebraicConstant(Fraction(0)),
        scale=Fraction(1, denominator),
    )


def formequiv_term(s, z) -> HyperTerm:
    """
    v(n) = B(n,s) z^n N(n)/(2n+1) as one hypergeometric term; the 1/(2n+1)
    enters the ratio as (2n+1)/(2n+3).
    """
    s, z = _check_parameters(s, z)
    upper, _ = orr_parameters(s)
    bracket = poly_from_coeffs(formequiv_bracket(s, z))
    for n in range(CHECK_POINTS + 2):
        if bracket.eval(n) == 0:
            raise ValueError(f"N(n) vanishes at n = {n} for s = {s}, z = {z}")

    # v(n+1)/v(n) = 2z prod(n+u) N(n+1) / ((n+1)^3 (2n+3) N(n))
    num = Poly(2 * _to_sympy(z), _n, domain=QQ)
    for u in upper:
        num *= poly_from_coeffs((u, 1))
    num *= bracket.shift(1)
    den = poly_from_coeffs((1, 1)) ** 3 * poly_from_coeffs((3, 2)) * bracket

    spec = formequiv_spec(s, z)
    cache = {}

    def direct(n: int) -> Fraction:
        if n not in cache:
            cache[n] = exact_terms(spec, n + 1)[n]
        return cache[n]

    initial = formequiv_bracket(s, z)[0]
    return HyperTerm(coeffs_from_poly(num), coeffs_from_poly(den), initial, 0, direct)


@dataclass
class FormEquivReport:
    s: Fraction
    z: Fraction
    certificate: GosperCertificate
    w0: Fraction
    points_checked: int
    identity_exact: bool
    partial_sums_exact: bool
    convergent: bool
    verdict: Verdict

    def to_dict(self) -> dict:
        return {
            "s": format_rational(self.s),
            "z": format_rational(self.z),
            "R_numerator": [format_rational(c) for c in self.certificate.r_num],
            "R_denominator": [format_rational(c) for c in self.certificate.r_den],
            "w0": format_rational(self.w0),
            "points_checked": self.points_checked,
            "identity_exact": self.identity_exact,
            "partial_sums_exact": self.partial_sums_exact,
            "convergent": self.convergent,
            "verdict": self.verdict.value,
        }


@monitor_performance("verify_formequiv")
def verify_formequiv(s, z) -> FormEquivReport:
    """
    Prove sum_{n>=0} B(n,s) z^n N(n)/(2n+1) = 0 by telescoping: a certificate
    with w(0) = 0 and w(n) -> 0 (for |z| < 1; termwise and formal otherwise).

    Raises:
        CertificateNotFound: Gosper's key equation has no polynomial solution
    """
    s, z = _check_parameters(s, z)
    term = formequiv_term(s, z)
    certificate = gosper(term)
    if certificate is None:
        raise CertificateNotFound(f"no Gosper certificate for s = {s}, z = {z}")

    w0 = certificate.w(0, term.initial)
    identity = certificate.identity_holds()
    points = certificate.check_points(CHECK_POINTS)
    partial = all(certificate.partial_sum_matches(N) for N in (10, 20, 40))
    proven = w0 == 0 and identity and points and partial and term.matches_direct()
    verdict = Verdict.PROVEN if proven else Verdict.FAILED
    logger.info(f"form-equiv at s = {s}, z = {z}: w(0) = {w0}, verdict {verdict.value}")
    return FormEquivReport(
        s=s,
        z=z,
        certificate=certificate,
        w0=w0,
        points_checked=CHECK_POINTS + 1,
        identity_exact=identity,
        partial_sums_exact=partial,
        convergent=abs(z) < 1,
        verdict=verdict,
    )


# -------------------- equivalence transfer --------------------

@dataclass
class EquivalenceReport:
    s: Fraction
    z: Fraction
    alpha: Fraction
    beta: Fraction
    implied_rhs: Optional[AlgebraicConstant]
    rhs_match: bool
    verdict: Verdict

    def to_dict(self) -> dict:
        return {
            "s": format_rational(self.s),
            "z": format_rational(self.z),
            "alpha": format_rational(self.alpha),
            "beta": format_rational(self.beta),
            "implied_rhs": str(self.implied_rhs) if self.implied_rhs is not None else None,
            "rhs_match": self.rhs_match,
            "verdict": self.verdict.value,
        }


def _summand_expr(f: FormulaSpec):
    polynomial = sum(_to_sympy(Fraction(c)) * _n ** k for k, c in enumerate(f.numerator))
    return _to_sympy(f.scale) * polynomial / f.denom_pattern.evaluate(_n)


def equivalence_transfer(proved: FormulaSpec, target: FormulaSpec) -> EquivalenceReport:
    """
    Exact alpha, beta with target summand = alpha * proved summand + beta * form-equiv
    summand as rational functions of n; the target's sum is then alpha times the proved sum.

    Raises:
        NoLinearRelation: the formulas do not share parameters, or no such alpha, beta exist
    """
    same_shape = (
        sorted(proved.upper) == sorted(target.upper)
        and sorted(proved.lower) == sorted(target.lower)
        and proved.z == target.z
        and proved.start_index == target.start_index == 0
    )
    if not same_shape:
        raise NoLinearRelation("formulas differ in parameters, argument or starting index")
    s = infer_s(proved.upper)
    if s is None:
        raise NoLinearRelation("parameters are not of the B(n, s) shape")
    z = proved.z

    bracket = poly_from_coeffs(formequiv_bracket(s, z)).as_expr() / (2 * _n + 1)
    alpha, beta = symbols("alpha beta")
    combination = _summand_expr(target) - alpha * _summand_expr(proved) - beta * bracket
    numerator, _ = cancel(combination).as_numer_denom()
    equations = Poly(expand(numerator), _n).coeffs()
    solutions = list(linsolve(equations, [alpha, beta]))
    if not solutions:
        raise NoLinearRelation("target summand is not alpha * proved + beta * form-equiv")
    a_value, b_value = solutions[0]
    a_value = a_value.subs({alpha: 0, beta: 0})
    b_value = b_value.subs({alpha: 0, beta: 0})
    alpha_q, beta_q = _to_fraction(a_value), _to_fraction(b_value)

    implied = proved.rhs.scaled(alpha_q) if proved.rhs is not None else None
    rhs_match = implied is not None and target.rhs is not None and implied == target.rhs
    verdict = Verdict.PROVEN if rhs_match else Verdict.FAILED
    logger.info(f"equivalence: alpha = {alpha_q}, beta = {beta_q}, implied rhs {implied}")
    return EquivalenceReport(
        s=s,
        z=z,
        alpha=alpha_q,
        beta=beta_q,
        implied_rhs=implied,
        rhs_match=rhs_match,
        verdict=verdict,
    )
