from dataclasses import replace
from fractions import Fraction

import pytest

from src.catalog import load_catalog
from src.core.factorization import eval_rhs, find_complementary_point, get_family
from src.core.hyperseries import exact_terms, sum_series
from src.core.jet import Jet
from src.core.precision import PrecisionContext
from src.core.translator import (
    ThetaOperator,
    Verdict,
    apply_theta_to_rhs,
    apply_theta_to_series,
    prove_formula,
    translation_ratio,
)
from src.errors import NoFamilyError, OrderExhausted, RecognitionFailure


@pytest.fixture
def catalog(catalog_path):
    return load_catalog(catalog_path)


def test_theta_operator_basics():
    op = ThetaOperator.from_coefficients([90, 1428, -9216, 70688])
    assert op.degree == 3
    assert op.polynomial(1) == 90 + 1428 - 9216 + 70688
    assert str(op) == "(90, 1428, -9216, 70688)"
    assert ThetaOperator.from_coefficients([1, 2, 0, 0, 0]).degree == 1
    with pytest.raises(ValueError):
        ThetaOperator.from_coefficients([0, 0, 0, 0, 1])


def test_theta_on_series_multiplies_summands(catalog):
    family = get_family("fam1")
    f = catalog.get("eq-4").to_spec()
    op = ThetaOperator(Fraction(1, 2), Fraction(3))
    transformed = apply_theta_to_series(op, family.core_spec(f.z))
    assert transformed.numerator == (1, 6)
    assert transformed.scale == Fraction(1, 2)
    core_terms = exact_terms(family.core_spec(f.z), 6)
    for n, (t, c) in enumerate(zip(exact_terms(transformed, 6), core_terms)):
        assert t == c * (Fraction(1, 2) + 3 * n)


def test_theta_needs_enough_order(ctx50):
    family = get_family("fam2")
    with pytest.raises(OrderExhausted):
        apply_theta_to_rhs(ThetaOperator(0, 0, 0, 1), family, family.x0_closed_form(ctx50), ctx50, order=2)


def test_theta_matches_central_difference():
    # theta = y d/dy = (y / y'(x)) d/dx; target 120 digits, working 150, h = 10^-30
    ctx = PrecisionContext(120)
    mp = ctx.mp
    family = get_family("fam2")
    x0 = family.x0_closed_form(ctx)
    h = mp.mpf(10) ** -30
    y = family.y_map(Jet.variable(ctx, x0, 1))
    dG = (eval_rhs(family, x0 + h, ctx) - eval_rhs(family, x0 - h, ctx)) / (2 * h)
    expected = y.c0 / y.coeffs[1] * dG
    value = apply_theta_to_rhs(ThetaOperator(0, 1), family, x0, ctx)
    assert abs(value - expected) < mp.mpf(10) ** -50 * abs(expected)


def test_prove_eq4(ctx100, catalog):
    report = prove_formula(catalog.get("eq-4").to_spec(), get_family("fam1"), ctx100)
    assert report.verdict is Verdict.PROVEN
    assert report.surd_ratio == 294
    assert report.surd == 21
    assert report.series_match and report.confirmed
    assert report.predicted_rhs == "294*sqrt(21)/pi"
    assert abs(report.legendre_defect) < ctx100.tolerance(10)
    mp = ctx100.mp
    assert abs(report.operator_value - 294 * mp.sqrt(21) / mp.pi) < ctx100.tolerance(20)


def test_printed_eq4_coefficient_fails_recognition(ctx50, catalog):
    f = catalog.get("eq-4").to_spec()
    printed = f.with_numerator((90, 1428, -9216, 70668))
    with pytest.raises(RecognitionFailure):
        prove_formula(printed, get_family("fam1"), ctx50)


def test_prove_for2(ctx100, catalog):
    report = prove_formula(catalog.get("for2-ex-2").to_spec(), get_family("fam2"), ctx100)
    assert report.verdict is Verdict.PROVEN
    assert report.surd_ratio == 3174
    assert report.predicted_rhs == "sqrt(23)/pi"


def test_prove_divergent_fam3(ctx50, catalog):
    f = catalog.get("addendum-div-1").to_spec()
    assert not f.convergent
    report = prove_formula(f, get_family("fam3"), ctx50)
    assert report.verdict is Verdict.PROVEN
    assert report.surd_ratio == 98
    assert report.surd == 7


def test_wrong_rhs_fails(ctx50, catalog):
    f = catalog.get("eq-4").to_spec()
    wrong = replace(f, rhs=f.rhs.scaled(Fraction(2)))
    report = prove_formula(wrong, get_family("fam1"), ctx50)
    assert report.verdict is Verdict.FAILED
    assert report.surd_ratio == 294
    assert report.predicted_ratio == 588


def test_argument_outside_family(ctx50, catalog):
    f = catalog.get("eq-4").to_spec()
    with pytest.raises(NoFamilyError):
        prove_formula(replace(f, z=Fraction(-2 ** 14, 23 ** 4)), get_family("fam1"), ctx50)


def test_denominators_are_not_translated(ctx50, catalog):
    with pytest.raises(ValueError):
        prove_formula(catalog.get("eq-3").to_spec(), get_family("fam1"), ctx50)


def test_translation_ratio(ctx50, catalog):
    assert translation_ratio(catalog.get("eq-4").to_spec(), get_family("fam1"), ctx50) == 294


def test_swapped_factors_agree_at_complementary_point(ctx50):
    family = get_family("fam1")
    x0 = find_complementary_point(family, ctx=ctx50)
    plain = apply_theta_to_rhs(ThetaOperator(1), family, x0, ctx50)
    swapped = apply_theta_to_rhs(ThetaOperator(1), family, x0, ctx50, swap=True)
    assert abs(plain - swapped) < ctx50.tolerance(5)
    assert abs(plain - eval_rhs(family, x0, ctx50)) < ctx50.tolerance(5)


@pytest.mark.parametrize("entry_id, family_id", [("eq-4", "fam1"), ("for2-ex-2", "fam2")])
def test_operator_side_matches_transformed_series(ctx50, catalog, entry_id, family_id):
    family = get_family(family_id)
    f = catalog.get(entry_id).to_spec()
    op = ThetaOperator.from_coefficients(f.numerator)
    x0 = find_complementary_point(family, ctx=ctx50)
    series = sum_series(apply_theta_to_series(op, family.core_spec(f.z)), ctx50)
    value = apply_theta_to_rhs(op, family, x0, ctx50)
    assert abs(value - series) < ctx50.tolerance(10) * abs(series)
