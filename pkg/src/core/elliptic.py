# Complete elliptic integrals through the complex arithmetic-geometric mean
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple

from ..errors import AgmNonConvergence, SingularModulus
from ..utils import setup_logging
from .jet import Jet, jet_root
from .precision import PrecisionContext

logger = setup_logging()

# extra AGM steps once c0 has converged, to settle higher jet coefficients
JET_SETTLE_STEPS = 2


@dataclass(frozen=True)
class EllipticValue:
    k: object
    value: object


def _max_agm_iterations(ctx: PrecisionContext) -> int:
    return 4 * math.ceil(math.log2(ctx.working_digits)) + 40


def _right_branch(mean: Jet, root: Jet) -> Jet:
    """Pick the sign of the geometric mean with |a - b| <= |a + b|, ties toward Re(b) >= 0."""
    diff = abs(mean.c0 - root.c0)
    total = abs(mean.c0 + root.c0)
    if diff > total or (diff == total and root.c0.real < 0):
        return -root
    return root


def _agm_jets(a: Jet, b: Jet) -> Jet:
    ctx = a.ctx
    eps = ctx.eps()
    if a.c0 == 0 or b.c0 == 0:
        raise ValueError("agm needs nonzero arguments")
    if abs(a.c0 + b.c0) <= eps:
        raise AgmNonConvergence("agm arguments cancel: a + b vanishes")

    settle = JET_SETTLE_STEPS if a.order > 0 else 0
    limit = _max_agm_iterations(ctx)
    for iteration in range(limit):
        if abs(a.c0 - b.c0) < eps * abs(a.c0):
            if settle == 0:
                logger.debug(f"agm converged after {iteration} iterations")
                return a
            settle -= 1
        mean = (a + b) / 2
        root = jet_root(a * b, 2)
        a, b = mean, _right_branch(mean, root)
    raise AgmNonConvergence(f"agm did not converge in {limit} iterations")


def _as_jet(value, ctx: PrecisionContext) -> Tuple[Jet, bool]:
    if isinstance(value, Jet):
        return value, False
    if ctx is None:
        raise ValueError("Scalar arguments need a PrecisionContext")
    return Jet.constant(ctx, value), True


def agm(a, b, ctx: PrecisionContext = None):
    """Arithmetic-geometric mean of scalars or jets, with the right-branch rule."""
    if isinstance(a, Jet) and not isinstance(b, Jet):
        b = a.lift(b)
    elif isinstance(b, Jet) and not isinstance(a, Jet):
        a = b.lift(a)
    ja, scalar = _as_jet(a, ctx)
    jb, _ = _as_jet(b, ctx if ctx is not None else ja.ctx)
    result = _agm_jets(ja, jb)
    return result.c0 if scalar else result


def ellip_K_parameter(m, ctx: PrecisionContext = None):
    """K as a function of the parameter m = k^2; branch-free in m."""
    jm, scalar = _as_jet(m, ctx)
    ctx = jm.ctx
    complement = 1 - jm
    if abs(complement.c0) < ctx.eps():
        raise SingularModulus("K diverges at parameter 1")
    mean = _agm_jets(jm.lift(1), jet_root(complement, 2))
    result = jm.lift(ctx.mp.pi / 2) / mean
    return result.c0 if scalar else result


def ellip_K(k, ctx: PrecisionContext = None):
    """K(k) = pi / (2 agm(1, sqrt(1 - k^2))) for a modulus k (scalar or jet)."""
    if isinstance(k, Jet):
        return ellip_K_parameter(k * k)
    m = ctx.convert(k) ** 2
    return ellip_K_parameter(m, ctx)


def ellip_E_parameter(m, ctx: PrecisionContext):
    """E from the AGM companion sum E = K (1 - sum 2^(n-1) c_n^2)."""
    mp = ctx.mp
    m = ctx.convert(m)
    eps = ctx.eps()
    if abs(1 - m) < eps:
        return mp.mpc(1)

    a = mp.mpc(1)
    b = mp.sqrt(1 - m)
    weight = mp.mpf(0.5)
    total = weight * m
    limit = _max_agm_iterations(ctx)
    for _ in range(limit):
        c = (a - b) / 2
        if abs(c) < eps * abs(a):
            break
        mean = (a + b) / 2
        root = mp.sqrt(a * b)
        diff, summ = abs(mean - root), abs(mean + root)
        if diff > summ or (diff == summ and root.real < 0):
            root = -root
        weight *= 2
        total += weight * c * c
        a, b = mean, root
    else:
        raise AgmNonConvergence(f"E companion sum did not converge in {limit} iterations")
    k_value = (mp.pi / 2) / a
    return k_value * (1 - total)


def ellip_E(k, ctx: PrecisionContext):
    return ellip_E_parameter(ctx.convert(k) ** 2, ctx)


def elliptic_pair(r, ctx: PrecisionContext) -> Tuple[EllipticValue, EllipticValue]:
    """K and E at modulus sqrt(r), given the parameter r."""
    k = ctx.mp.sqrt(ctx.convert(r))
    return (
        EllipticValue(k=k, value=ellip_K_parameter(r, ctx)),
        EllipticValue(k=k, value=ellip_E_parameter(r, ctx)),
    )


def legendre_defect(r0, ctx: PrecisionContext):
    """-K K' + K E' + E K' - pi/2 at parameters r0 and 1 - r0."""
    r0 = ctx.convert(r0)
    eps = ctx.eps()
    if abs(r0) < eps or abs(1 - r0) < eps:
        raise SingularModulus("Legendre defect is undefined at parameters 0 and 1")
    k1, e1 = elliptic_pair(r0, ctx)
    k2, e2 = elliptic_pair(1 - r0, ctx)
    K, Kp, E, Ep = k1.value, k2.value, e1.value, e2.value
    return -K * Kp + K * Ep + E * Kp - ctx.mp.pi / 2

