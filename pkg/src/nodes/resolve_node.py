# Resolve Node - look up the catalog entry and choose the proof route
from __future__ import annotations
from typing import Dict, Any, List

from ..catalog import Catalog
from ..errors import CatalogError, NoFamilyError
from ..utils import setup_logging, record_error

logger = setup_logging()


def _equivalence_chain(catalog: Catalog, entry_id: str) -> List[str]:
    """Ids from the entry with a family down to entry_id, following equivalent_to links."""
    chain = [entry_id]
    current = catalog.get(entry_id)
    while current.family is None:
        if current.equivalent_to is None:
            raise NoFamilyError(
                f"entry {current.id} has no factorization family and no equivalent entry to transfer from"
            )
        if current.equivalent_to in chain:
            raise CatalogError(f"equivalent_to links of {entry_id} form a cycle")
        chain.append(current.equivalent_to)
        current = catalog.get(current.equivalent_to)
    chain.reverse()
    return chain


def resolve_node(state: Dict[str, Any]) -> Dict[str, Any]:
    entry_id = state.get("entry_id")
    catalog = state.get("catalog")
    if not entry_id or catalog is None:
        state.setdefault("errors", []).append({
            "node": "ResolveNode",
            "type": "InvalidInput",
            "message": "Missing entry_id or catalog",
            "exit_code": 2,
            "action_taken": "abort",
        })
        state["status"] = "failed"
        state["workflow_status"] = "failed"
        return state

    try:
        entry = catalog.get(entry_id)
        chain = _equivalence_chain(catalog, entry_id)
    except (CatalogError, NoFamilyError) as e:
        logger.error(f"Cannot resolve {entry_id}: {e}")
        return record_error(state, "ResolveNode", e)

    state["entry"] = entry
    state["chain"] = chain
    state["route"] = "translate" if len(chain) == 1 else "transfer"
    logger.info(f"{entry_id}: proof route {state['route']} via {' -> '.join(chain)}")
    return state
