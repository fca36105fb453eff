from typing import Optional

from ..catalog import discovered_entry, load_catalog, next_discovered_id, save_catalog
from ..core.elliptic import legendre_defect as _legendre_defect
from ..core.factorization import check_factorization, get_family, orr_parameters
from ..core.hyperseries import DenomPattern, FormulaSpec
from ..core.precision import PrecisionContext
from ..core.relations import discover_formula
from ..reports import DiscoverReport, FactorCheckReport, format_number
from ..settings import Settings, get_settings
from ..utils import format_rational, parse_rational, setup_logging
from ..workflow import ProofWorkflow

logger = setup_logging()


class Adapter:
    """
    Service-facing wrapper over the catalog, the proof pipeline and the numeric kernels.
    Every method returns {"status": "success", "result": ...} or {"status": "error", "message": ...}.
    """

    def __init__(self, settings: Optional[Settings] = None):
        self.settings = settings or get_settings()

    def _context(self, digits: Optional[int], default: int) -> PrecisionContext:
        return PrecisionContext(digits or default, self.settings.guard_digits)

    def _catalog_path(self, catalog_path: Optional[str]) -> str:
        return catalog_path or self.settings.catalog_path

    # -------------------- catalog --------------------

    def list_catalog(self, catalog_path: Optional[str] = None):
        try:
            catalog = load_catalog(self._catalog_path(catalog_path))
            entries = [
                {
                    "id": e.id,
                    "status": e.status.value,
                    "family": e.family.value if e.family else None,
                    "equivalent_to": e.equivalent_to,
                    "z": e.formula.z,
                    "rhs": str(e.formula.rhs.to_constant()) if e.formula.rhs else None,
                }
                for e in catalog.entries
            ]
            return {"status": "success", "result": entries}
        except Exception as e:
            return {"status": "error", "message": f"Failed to load catalog: {str(e)}"}

    # -------------------- verification and proofs --------------------

    def verify(self, entry_id: str, digits: Optional[int] = None, catalog_path: Optional[str] = None):
        from ..cli import verify_entry

        try:
            catalog = load_catalog(self._catalog_path(catalog_path))
            entry = catalog.get(entry_id)
            result = verify_entry(entry.model_dump(mode="json"), digits or self.settings.verify_digits, self.settings.guard_digits)
            if result["status"] == "error":
                return {"status": "error", "message": result["note"]}
            return {"status": "success", "result": result}
        except Exception as e:
            return {"status": "error", "message": f"Verification of {entry_id} failed: {str(e)}"}

    def prove(self, entry_id: str, digits: Optional[int] = None, catalog_path: Optional[str] = None):
        try:
            catalog = load_catalog(self._catalog_path(catalog_path))
            workflow = ProofWorkflow(catalog, self._context(digits, self.settings.prove_digits))
            report = workflow.run(entry_id)
            if report.errors:
                first = report.errors[0]
                return {"status": "error", "message": f"{first['type']}: {first['message']}"}
            return {"status": "success", "result": report.model_dump(mode="json")}
        except Exception as e:
            return {"status": "error", "message": f"Proof of {entry_id} failed: {str(e)}"}

    def discover(
        self,
        y0: str,
        pattern: str = DenomPattern.TWO_N_PLUS_ONE.value,
        s: str = "1/4",
        digits: Optional[int] = None,
        max_coeff: int = 10 ** 12,
        append: bool = False,
        catalog_path: Optional[str] = None,
    ):
        try:
            y = parse_rational(y0)
            ctx = self._context(digits, self.settings.discover_digits)
            upper, lower = orr_parameters(parse_rational(s))
            result = discover_formula(FormulaSpec(upper, lower, y), y, DenomPattern(pattern), ctx, max_coeff)
            report = DiscoverReport(y0=format_rational(y), pattern=pattern, digits=ctx.target_digits, max_coeff=max_coeff)
            report.fill(result)
            if result.found and append:
                path = self._catalog_path(catalog_path)
                catalog = load_catalog(path)
                entry_id = next_discovered_id(catalog, y)
                save_catalog(catalog.add(discovered_entry(entry_id, result.formula, "PSLQ via the MCP service")), path)
                report.added_id = entry_id
            return {"status": "success", "result": report.model_dump(mode="json")}
        except Exception as e:
            return {"status": "error", "message": f"Discovery at y0 = {y0} failed: {str(e)}"}

    # -------------------- factorizations and elliptic integrals --------------------

    def factor_check(self, family: str, samples: int = 10, digits: int = 100, s: Optional[str] = None):
        try:
            s_value = parse_rational(s) if s is not None else None
            check = check_factorization(get_family(family, s_value), samples, self._context(digits, digits))
            report = FactorCheckReport(family=family, s=s, digits=digits, samples=samples).fill(check)
            return {"status": "success", "result": report.model_dump(mode="json")}
        except Exception as e:
            return {"status": "error", "message": f"Factorization check for {family} failed: {str(e)}"}

    def legendre_defect(self, r0: str, r0_imag: str = "0", digits: int = 50):
        try:
            ctx = self._context(digits, digits)
            mp = ctx.mp
            real, imag = parse_rational(r0), parse_rational(r0_imag)
            point = mp.mpc(mp.mpf(real.numerator) / real.denominator, mp.mpf(imag.numerator) / imag.denominator)
            defect = _legendre_defect(point, ctx)
            return {"status": "success", "result": {"r0": format_number(point), "defect": format_number(abs(defect), 5)}}
        except Exception as e:
            return {"status": "error", "message": f"Legendre defect at {r0} failed: {str(e)}"}
