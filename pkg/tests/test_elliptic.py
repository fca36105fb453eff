import cmath

import pytest

from src.core.elliptic import (
    agm,
    ellip_E,
    ellip_E_parameter,
    ellip_K,
    ellip_K_parameter,
    legendre_defect,
)
from src.core.jet import Jet
from src.core.precision import PrecisionContext
from src.errors import AgmNonConvergence, SingularModulus


def test_agm_real(ctx50):
    mp = ctx50.mp
    value = agm(1, mp.sqrt(2), ctx50)
    assert abs(value - mp.agm(1, mp.sqrt(2))) < ctx50.tolerance()


def test_agm_cancelling_arguments(ctx50):
    with pytest.raises(AgmNonConvergence):
        agm(1, -1, ctx50)


@pytest.mark.parametrize("m", ["0.3", "-2", "0.95", ("0.2", "0.3"), ("-1.5", "-0.7")])
def test_K_matches_mpmath(ctx50, m):
    mp = ctx50.mp
    m = mp.mpc(*m) if isinstance(m, tuple) else mp.mpf(m)
    ours = ellip_K_parameter(m, ctx50)
    assert abs(ours - mp.ellipk(m)) < ctx50.tolerance(2) * abs(ours)


@pytest.mark.parametrize("m", ["0.3", "-2", ("0.2", "0.3")])
def test_E_matches_mpmath(ctx50, m):
    mp = ctx50.mp
    m = mp.mpc(*m) if isinstance(m, tuple) else mp.mpf(m)
    ours = ellip_E_parameter(m, ctx50)
    assert abs(ours - mp.ellipe(m)) < ctx50.tolerance(2) * abs(ours)


def test_special_values(ctx50):
    mp = ctx50.mp
    assert abs(ellip_K_parameter(0, ctx50) - mp.pi / 2) < ctx50.tolerance()
    assert abs(ellip_E_parameter(1, ctx50) - 1) < ctx50.tolerance()
    assert abs(ellip_K(mp.mpf("0.5"), ctx50) - mp.ellipk(mp.mpf("0.25"))) < ctx50.tolerance(2)
    assert abs(ellip_E(mp.mpf("0.5"), ctx50) - mp.ellipe(mp.mpf("0.25"))) < ctx50.tolerance(2)


def test_K_singular_at_one(ctx50):
    with pytest.raises(SingularModulus):
        ellip_K_parameter(1, ctx50)


def test_K_jet_derivative(ctx50):
    # dK/dm = (E - (1 - m) K) / (2 m (1 - m))
    mp = ctx50.mp
    m = mp.mpf("0.3")
    jet = ellip_K_parameter(Jet.variable(ctx50, m, 2))
    K, E = mp.ellipk(m), mp.ellipe(m)
    expected = (E - (1 - m) * K) / (2 * m * (1 - m))
    assert abs(jet.coeffs[1] - expected) < ctx50.tolerance(5)


@pytest.mark.parametrize("r0", ["0.3", "0.5", ("0.2", "0.1"), ("0.6", "-0.4")])
def test_legendre_relation(ctx50, r0):
    mp = ctx50.mp
    r0 = mp.mpc(*r0) if isinstance(r0, tuple) else mp.mpf(r0)
    assert abs(legendre_defect(r0, ctx50)) < ctx50.tolerance(5)


def test_legendre_singular(ctx50):
    with pytest.raises(SingularModulus):
        legendre_defect(0, ctx50)
    with pytest.raises(SingularModulus):
        legendre_defect(1, ctx50)


def test_legendre_relation_at_200_digits():
    ctx = PrecisionContext(200)
    mp = ctx.mp
    points = [mp.mpf(1) / 2, mp.mpc(mp.mpf(1) / 2, mp.sqrt(3) / 6), (33 - 5 * mp.sqrt(41)) / 2]
    for r0 in points:
        assert abs(legendre_defect(r0, ctx)) < mp.mpf(10) ** -190


def _random_complex(mp, rng, lo=0.2, hi=2.0):
    return mp.mpc(rng.uniform(lo, hi), rng.uniform(-1, 1))


def test_agm_homogeneity_and_step_invariance(ctx50, rng):
    mp = ctx50.mp
    for _ in range(50):
        a, b = _random_complex(mp, rng), _random_complex(mp, rng)
        scale = mp.mpf(rng.uniform(0.1, 10))
        value = agm(a, b, ctx50)
        assert abs(agm(scale * a, scale * b, ctx50) - scale * value) < ctx50.tolerance(2) * abs(scale * value)
        mean, root = (a + b) / 2, mp.sqrt(a * b)
        if abs(mean - root) > abs(mean + root):
            root = -root
        assert abs(agm(mean, root, ctx50) - value) < ctx50.tolerance(2) * abs(value)


def test_K_matches_its_series(ctx50, rng):
    mp = ctx50.mp
    for _ in range(20):
        w = cmath.rect(0.8 * rng.random() ** 0.5, rng.uniform(-cmath.pi, cmath.pi))
        x = mp.mpc(w.real, w.imag)
        series = mp.hyp2f1(mp.mpf(1) / 2, mp.mpf(1) / 2, 1, x)
        assert abs(2 / mp.pi * ellip_K_parameter(x, ctx50) - series) < ctx50.tolerance(3)


def test_K_at_one_over_sqrt2(ctx50):
    mp = ctx50.mp
    value = ellip_K(1 / mp.sqrt(2), ctx50)
    assert abs(value - mp.pi / 2 * mp.hyp2f1(mp.mpf(1) / 2, mp.mpf(1) / 2, 1, mp.mpf(1) / 2)) < ctx50.tolerance(2)
    assert mp.nstr(value.real, 15) == "1.85407467730137"


def test_landen_transformation(ctx50, rng):
    mp = ctx50.mp
    for _ in range(20):
        x = mp.mpf(rng.uniform(0.01, 0.99))
        ascended = ellip_K(2 * mp.sqrt(x) / (1 + x), ctx50) / (1 + x)
        assert abs(ellip_K(x, ctx50) - ascended) < ctx50.tolerance(3)


def test_legendre_relation_at_random_points(ctx50, rng):
    mp = ctx50.mp
    for _ in range(100):
        r0 = mp.mpc(rng.uniform(0.02, 0.98), rng.uniform(-0.4, 0.4))
        assert abs(legendre_defect(r0, ctx50)) < ctx50.tolerance(5), f"r0 = {r0}"


@pytest.mark.parametrize("m", ["0.3", "-2", ("0.2", "0.3")])
def test_order_zero_jet_is_the_scalar_path(ctx50, m):
    mp = ctx50.mp
    m = mp.mpc(*m) if isinstance(m, tuple) else mp.mpf(m)
    assert ellip_K_parameter(Jet.scalar(ctx50, m)).c0 == ellip_K_parameter(m, ctx50)
