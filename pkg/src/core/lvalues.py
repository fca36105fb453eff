# Dirichlet L-values for the conjectural "upside-down" evaluations
from __future__ import annotations

from sympy.ntheory import legendre_symbol

from ..errors import UnsupportedLValue
from .precision import PrecisionContext

SUPPORTED = {(-7, 2)}


def kronecker_chi(discriminant: int, n: int) -> int:
    """The real character of Q(sqrt(-7)): +1 on squares mod 7, -1 on non-squares, 0 on multiples."""
    if discriminant != -7:
        raise UnsupportedLValue(f"Only the discriminant -7 character is implemented, got {discriminant}")
    residue = n % 7
    if residue == 0:
        return 0
    return legendre_symbol(residue, 7)


def dirichlet_L(discriminant: int, s: int, ctx: PrecisionContext):
    if (discriminant, s) not in SUPPORTED:
        raise UnsupportedLValue(f"L-value L_{discriminant}({s}) is not supported")
    mp = ctx.mp
    modulus = abs(discriminant)
    total = mp.mpf(0)
    for a in range(1, modulus):
        chi = kronecker_chi(discriminant, a)
        if chi:
            total += chi * mp.zeta(s, mp.mpf(a) / modulus)
    return mp.mpc(total / mp.mpf(modulus) ** s)
