from fractions import Fraction

import pytest
from sympy import Rational, factorial, rf

from src.catalog import load_catalog
from src.core.factorization import orr_parameters
from src.core.hyperseries import (
    AlgebraicConstant,
    DenomPattern,
    FormulaSpec,
    exact_terms,
    hyper_sum_jet,
    sum_series,
    sum_series_stats,
    term_ratio,
    verify_formula,
)
from src.core.jet import Jet
from src.core.precision import PrecisionContext
from src.errors import DivergentSeries


@pytest.fixture
def catalog(catalog_path):
    return load_catalog(catalog_path)


def test_denominator_patterns():
    assert DenomPattern.TWO_N_PLUS_ONE.evaluate(3) == 7
    assert DenomPattern.N_CUBED.evaluate(2) == 8
    assert DenomPattern.ONE_MINUS_2N_TIMES_N_CUBED.evaluate(2) == -24
    assert DenomPattern.N_CUBED.first_safe_index == 1


def test_constant_rendering():
    assert str(AlgebraicConstant(Fraction(294), 21, 1)) == "294*sqrt(21)/pi"
    assert str(AlgebraicConstant(Fraction(98, 9), 21, 1)) == "98*sqrt(21)/(9*pi)"
    assert str(AlgebraicConstant(Fraction(1), 23, 1)) == "sqrt(23)/pi"
    assert str(AlgebraicConstant(Fraction(56), 7, 2)) == "56*sqrt(7)/pi^2"


def test_constant_requires_squarefree_surd():
    with pytest.raises(ValueError):
        AlgebraicConstant(Fraction(1), 12, 1)


def test_constant_scaling():
    c = AlgebraicConstant(Fraction(294), 21, 1).scaled(Fraction(1, 27))
    assert c == AlgebraicConstant(Fraction(98, 9), 21, 1)


def test_formula_validation():
    upper, lower = orr_parameters(Fraction(1, 4))
    with pytest.raises(ValueError):
        FormulaSpec(upper, lower[:3], Fraction(1, 2))
    with pytest.raises(ValueError):
        FormulaSpec(upper, lower, Fraction(1, 2), denom_pattern=DenomPattern.N_CUBED)
    with pytest.raises(ValueError):
        FormulaSpec(upper, lower, Fraction(1, 2), numerator=(1.5,))
    spec = FormulaSpec(upper, lower, Fraction(1, 2), numerator=(3, 2, 0, 0))
    assert spec.numerator == (3, 2)
    assert spec.degree == 1


def test_exact_terms_match_pochhammer_symbols(catalog):
    f = catalog.get("eq-4").to_spec()
    n_values = range(8)
    terms = exact_terms(f, len(n_values))
    for n, term in zip(n_values, terms):
        b = (
            rf(Rational(1, 8), n) * rf(Rational(3, 8), n) * rf(Rational(5, 8), n) * rf(Rational(7, 8), n)
            / (rf(Rational(1, 2), n) * factorial(n) ** 3)
        )
        expected = b * Rational(192, 2401) ** n * (90 + 1428 * n - 9216 * n ** 2 + 70688 * n ** 3)
        assert term == Fraction(int(expected.p), int(expected.q))


def test_term_ratio_is_exact():
    upper, lower = orr_parameters(Fraction(1, 4))
    f = FormulaSpec(upper, lower, Fraction(192, 2401))
    num, den = term_ratio(f, 0)
    assert Fraction(num, den) == Fraction(192, 2401) * Fraction(105, 4096) / Fraction(1, 2)


def test_sum_matches_hyp2f1(ctx50):
    mp = ctx50.mp
    f = FormulaSpec((Fraction(1, 3), Fraction(2, 5)), (Fraction(7, 4), Fraction(1)), Fraction(-1, 2))
    expected = mp.hyp2f1(mp.mpf(1) / 3, mp.mpf(2) / 5, mp.mpf(7) / 4, mp.mpf(-1) / 2)
    assert abs(sum_series(f, ctx50) - expected) < ctx50.tolerance()


def test_divergent_series_refused(ctx50, catalog):
    with pytest.raises(DivergentSeries):
        sum_series(catalog.get("addendum-div-1").to_spec(), ctx50)


def test_hyper_sum_jet_value(ctx50):
    upper, lower = orr_parameters(Fraction(1, 4))
    y = Fraction(1, 10)
    jet = hyper_sum_jet(upper, lower, Jet.variable(ctx50, y, 2))
    assert abs(jet.c0 - sum_series(FormulaSpec(upper, lower, y), ctx50)) < ctx50.tolerance()


def test_verify_eq3_at_200_digits(catalog):
    result = verify_formula(catalog.get("eq-3").to_spec(), PrecisionContext(200))
    assert result.match
    assert result.digits_agreed >= 195


@pytest.mark.parametrize("entry_id", ["eq-4", "for1-ex-2", "for2-ex-2", "eq-1", "eq-2", "eq-ten"])
def test_verify_catalog_formulas(ctx100, catalog, entry_id):
    result = verify_formula(catalog.get(entry_id).to_spec(), ctx100)
    assert result.match, f"{entry_id} agreed to {result.digits_agreed} digits"


@pytest.mark.parametrize("entry_id", ["pi2-1920", "pi2-532", "addendum-ud-1", "addendum-ud-2"])
def test_conjectural_formulas_agree_numerically(ctx50, catalog, entry_id):
    f = catalog.get(entry_id).to_spec()
    assert f.conjectural
    assert verify_formula(f, ctx50).digits_agreed >= 45


def test_upside_down_value(ctx50, catalog):
    value = sum_series(catalog.get("addendum-ud-1").to_spec(), ctx50)
    assert abs(value - ctx50.mp.mpf("1.30385094108")) < ctx50.mp.mpf(10) ** -9


@pytest.mark.parametrize("coefficient", [70668, 70689])
def test_perturbed_eq4_mismatches(ctx50, catalog, coefficient):
    f = catalog.get("eq-4").to_spec()
    wrong = f.with_numerator(f.numerator[:3] + (coefficient,))
    result = verify_formula(wrong, ctx50)
    assert not result.match
    assert result.digits_agreed < 10


def test_sum_stats_report_terms(ctx50, catalog):
    stats = sum_series_stats(catalog.get("eq-3").to_spec(), ctx50)
    # the term ratio tends to z = 192/2401
    assert 30 < stats.terms_used < 120


@pytest.mark.parametrize("entry_id", ["eq-3", "eq-4"])
def test_digits_agreed_grows_with_target(catalog, entry_id):
    f = catalog.get(entry_id).to_spec()
    digits = [verify_formula(f, PrecisionContext(target)).digits_agreed for target in (50, 100, 200)]
    assert digits == sorted(digits)
    assert digits[-1] >= 195


@pytest.mark.parametrize("entry_id", ["eq-3", "for2-ex-2", "addendum-ud-1"])
def test_doubled_guard_keeps_reported_digits(catalog, entry_id):
    f = catalog.get(entry_id).to_spec()
    ctx = PrecisionContext(60)
    wider = ctx.with_doubled_guard()
    plain, wide = sum_series(f, ctx), sum_series(f, wider)
    assert ctx.mp.nstr(ctx.mp.mpc(plain).real, 60) == wider.mp.nstr(wider.mp.mpc(wide).real, 60)
    if f.rhs is not None and not f.conjectural:
        assert verify_formula(f, ctx).digits_agreed == verify_formula(f, wider).digits_agreed
