from typing import Optional

from fastmcp import FastMCP

from ..settings import Settings
from .adapter import Adapter


def create_app(settings: Optional[Settings] = None) -> FastMCP:
    """
    Create the FastMCP application with one tool per adapter method.

    Returns:
        FastMCP: The initialized FastMCP instance.
    """
    mcp = FastMCP("orrpi_service")
    adapter = Adapter(settings)

    @mcp.tool(name="list_catalog", description="List catalog entries with their status and right-hand side.")
    def list_catalog() -> dict:
        return adapter.list_catalog()

    @mcp.tool(name="verify_formula", description="Sum a catalog series and compare it with its right-hand side.")
    def verify_formula(entry_id: str, digits: int = 0) -> dict:
        """
        Parameters:
            entry_id (str): Catalog id such as "eq-3".
            digits (int): Target digits; 0 uses the configured default.
        """
        return adapter.verify(entry_id, digits or None)

    @mcp.tool(name="prove_formula", description="Prove a catalog entry by translation or equivalence.")
    def prove_formula(entry_id: str, digits: int = 0) -> dict:
        return adapter.prove(entry_id, digits or None)

    @mcp.tool(name="discover_formula", description="Search for a 1/pi formula at a rational argument with PSLQ.")
    def discover_formula(y0: str, pattern: str = "2n+1", s: str = "1/4", digits: int = 0, max_coeff: int = 10 ** 12) -> dict:
        """
        Parameters:
            y0 (str): Rational argument "p/q" with |y0| < 1.
            pattern (str): Denominator pattern, "1" or "2n+1".
            s (str): The B(n, s) parameter.
        """
        return adapter.discover(y0, pattern, s, digits or None, max_coeff)

    @mcp.tool(name="factor_check", description="Spot-check a factorization family at random points.")
    def factor_check(family: str, samples: int = 10, digits: int = 100, s: Optional[str] = None) -> dict:
        return adapter.factor_check(family, samples, digits, s)

    @mcp.tool(name="legendre_defect", description="Evaluate -KK' + KE' + EK' - pi/2 at a parameter r0.")
    def legendre_defect(r0: str, r0_imag: str = "0", digits: int = 50) -> dict:
        return adapter.legendre_defect(r0, r0_imag, digits)

    return mcp
