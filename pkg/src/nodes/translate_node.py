# Translate Node - prove an entry with a factorization family by the theta-operator translation
from __future__ import annotations
from typing import Dict, Any

from ..catalog import CatalogEntry
from ..core.factorization import get_family
from ..core.precision import PrecisionContext
from ..core.translator import ProofReport, prove_formula
from ..errors import OrrPiError
from ..utils import setup_logging, record_error

logger = setup_logging()

DEFAULT_SAMPLE_COUNT = 3


def translate_entry(entry: CatalogEntry, ctx: PrecisionContext, sample_count: int = DEFAULT_SAMPLE_COUNT) -> ProofReport:
    family = get_family(entry.family)
    return prove_formula(entry.to_spec(), family, ctx, sample_count=sample_count)


def translate_node(state: Dict[str, Any]) -> Dict[str, Any]:
    entry = state["entry"]
    try:
        report = translate_entry(entry, state["ctx"], state.get("sample_count", DEFAULT_SAMPLE_COUNT))
    except (OrrPiError, ValueError) as e:
        logger.error(f"Translation of {entry.id} failed: {e}")
        return record_error(state, "TranslateNode", e)

    state["method"] = "translation"
    state["translation"] = report
    state["verdict"] = report.verdict.value
    return state
