from fractions import Fraction

import pytest

from src.core.factorization import eval_rhs, get_family
from src.core.jet import Jet, jet_root
from src.core.precision import PrecisionContext
from src.errors import DivisionBySingularJet, JetMismatch, OrderExhausted


def _close(ctx, a, b, slack=5):
    return abs(ctx.mp.mpc(a) - ctx.mp.mpc(b)) < ctx.tolerance(slack)


def test_variable_squared(ctx50):
    x = Jet.variable(ctx50, 2, 4)
    assert [c.real for c in (x * x).coeffs] == [4, 4, 1, 0, 0]


def test_geometric_series(ctx50):
    x = Jet.variable(ctx50, 0, 5)
    inv = 1 / (1 - x)
    assert all(_close(ctx50, c, 1) for c in inv.coeffs)


def test_square_root_binomial(ctx50):
    x = Jet.variable(ctx50, 0, 4)
    root = (1 + x).sqrt()
    expected = [1, Fraction(1, 2), Fraction(-1, 8), Fraction(1, 16), Fraction(-5, 128)]
    for c, e in zip(root.coeffs, expected):
        assert _close(ctx50, c, ctx50.convert(e))


def test_cube_root(ctx50):
    x = Jet.variable(ctx50, 0, 2)
    root = jet_root(1 + x, 3)
    for c, e in zip(root.coeffs, [1, Fraction(1, 3), Fraction(-1, 9)]):
        assert _close(ctx50, c, ctx50.convert(e))


def test_root_power_inverts(ctx50):
    x = Jet.variable(ctx50, ctx50.mp.mpc("0.3", "0.2"), 6)
    f = 2 + x * x
    back = jet_root(f, 4) ** 4
    for c, e in zip(back.coeffs, f.coeffs):
        assert _close(ctx50, c, e, 8)


def test_multiplication_commutes_bitwise(ctx50):
    mp = ctx50.mp
    a = Jet(ctx50, 0, [mp.mpc(1, 2), mp.mpc("0.3"), mp.mpc(0, -1), mp.mpc(5)])
    b = Jet(ctx50, 0, [mp.mpc(2), mp.mpc(-1, 1), mp.mpc("0.7"), mp.mpc(3, 3)])
    assert (a * b).coeffs == (b * a).coeffs


def test_derivative_values(ctx50):
    x = Jet.variable(ctx50, 1, 3)
    cube = x ** 3
    assert [v.real for v in cube.derivative_values()] == [1, 3, 6, 6]
    assert cube.derivative().order == 2


def test_mismatched_jets(ctx50):
    a = Jet.variable(ctx50, 0, 3)
    with pytest.raises(JetMismatch):
        a + Jet.variable(ctx50, 0, 2)
    with pytest.raises(JetMismatch):
        a * Jet.variable(ctx50, 1, 3)


def test_singular_division(ctx50):
    x = Jet.variable(ctx50, 0, 3)
    with pytest.raises(DivisionBySingularJet):
        1 / x
    with pytest.raises(DivisionBySingularJet):
        x.sqrt()


@pytest.mark.parametrize("k", [1, 2, 3])
def test_root_of_zero_scalar(ctx50, k):
    with pytest.raises(DivisionBySingularJet):
        jet_root(Jet.scalar(ctx50, 0), k)


def test_order_exhaustion(ctx50):
    x = Jet.variable(ctx50, 0, 2)
    with pytest.raises(OrderExhausted):
        x.truncate(3)
    with pytest.raises(OrderExhausted):
        Jet.scalar(ctx50, 1).derivative()


def test_derivative_matches_central_difference():
    # working precision 150 digits, h = 10^-30: truncation ~1e-60, rounding ~1e-120
    ctx = PrecisionContext(120)
    mp = ctx.mp
    x0 = mp.mpc("0.3", "0.1")
    h = mp.mpf(10) ** -30

    def f(x):
        return jet_root(1 + x * x, 2) / (2 - x)

    jet = f(Jet.variable(ctx, x0, 1))
    fd = (f(Jet.scalar(ctx, x0 + h)).c0 - f(Jet.scalar(ctx, x0 - h)).c0) / (2 * h)
    assert abs(jet.coeffs[1] - fd) < mp.mpf(10) ** -55


def test_fam1_rhs_derivatives_match_finite_differences():
    ctx = PrecisionContext(120)
    mp = ctx.mp
    family = get_family("fam1")
    x0 = ctx.convert(family.interior_point)
    h = mp.mpf(10) ** -20

    def g(offset):
        return eval_rhs(family, x0 + offset * h, ctx)

    derivatives = family.rhs_jet(Jet.variable(ctx, x0, 3)).derivative_values()
    differences = [
        (g(1) - g(-1)) / (2 * h),
        (g(1) - 2 * g(0) + g(-1)) / h ** 2,
        (g(2) - 2 * g(1) + 2 * g(-1) - g(-2)) / (2 * h ** 3),
    ]
    for order, (exact, approx) in enumerate(zip(derivatives[1:], differences), start=1):
        assert abs(exact - approx) < mp.mpf(10) ** -30 * max(1, abs(exact)), f"order {order}"
