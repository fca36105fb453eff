from itertools import permutations

import pytest

from src.tools.pslq import permuted, pslq, relation_residual, remove_content


def _up_to_sign(found, expected):
    return tuple(found) in (tuple(expected), tuple(-c for c in expected))


def test_sqrt2_relation(ctx50):
    mp = ctx50.mp
    result = pslq([1, mp.sqrt(2), 2], ctx50)
    assert result.found
    assert _up_to_sign(result.coefficients, (-2, 0, 1))


def test_golden_ratio(ctx50):
    mp = ctx50.mp
    phi = (1 + mp.sqrt(5)) / 2
    result = pslq([1, phi, phi ** 2], ctx50)
    assert _up_to_sign(result.coefficients, (1, 1, -1))
    assert result.residual < ctx50.tolerance(10)


def test_logarithms(ctx50):
    mp = ctx50.mp
    result = pslq([mp.log(2), mp.log(3), mp.log(6)], ctx50)
    assert _up_to_sign(result.coefficients, (1, 1, -1))


def test_no_small_relation(ctx50):
    mp = ctx50.mp
    result = pslq([1, mp.pi, mp.e], ctx50, max_coeff=1000)
    assert not result.found
    assert result.norm_bound >= 1000


def test_bad_inputs(ctx50):
    with pytest.raises(ValueError):
        pslq([1], ctx50)
    with pytest.raises(ValueError):
        pslq([1, 0, 2], ctx50)
    with pytest.raises(ValueError):
        pslq([1, ctx50.mp.mpc(1, 1)], ctx50)


def test_remove_content():
    assert remove_content((4, -6, 10)) == (2, -3, 5)
    assert remove_content((1, 2)) == (1, 2)
    assert remove_content((0, 0)) == (0, 0)


def test_permuted_restores_order():
    assert permuted((7, 8, 9), [2, 0, 1]) == (8, 9, 7)


def test_relation_residual(ctx50):
    mp = ctx50.mp
    assert relation_residual([1, mp.sqrt(2), 2], (-2, 0, 1), ctx50) == 0
    assert relation_residual([1, mp.sqrt(2)], (1, 1), ctx50) > 1


@pytest.mark.parametrize("order", list(permutations(range(3))))
def test_relation_survives_permutation(ctx50, order):
    mp = ctx50.mp
    phi = (1 + mp.sqrt(5)) / 2
    values = [1, phi, phi ** 2]
    result = pslq([values[i] for i in order], ctx50)
    assert _up_to_sign(permuted(result.coefficients, order), (1, 1, -1))


@pytest.mark.parametrize("order", [(0, 1, 2, 3), (3, 1, 0, 2), (2, 3, 1, 0)])
def test_logarithm_relation_survives_permutation(ctx50, order):
    mp = ctx50.mp
    values = [mp.log(2), mp.log(3), mp.log(5), mp.log(30)]
    result = pslq([values[i] for i in order], ctx50)
    assert _up_to_sign(permuted(result.coefficients, order), (1, 1, 1, -1))
