# Transfer Node - prove an equivalent-to entry from its proven source by telescoping
from __future__ import annotations
from typing import Dict, Any

from ..core.telescope import equivalence_transfer, verify_formequiv
from ..core.translator import Verdict
from ..errors import OrrPiError
from ..utils import setup_logging, record_error
from .translate_node import DEFAULT_SAMPLE_COUNT, translate_entry

logger = setup_logging()


def transfer_node(state: Dict[str, Any]) -> Dict[str, Any]:
    catalog = state["catalog"]
    chain = state["chain"]
    try:
        source = catalog.get(chain[0])
        proof = translate_entry(source, state["ctx"], state.get("sample_count", DEFAULT_SAMPLE_COUNT))
        proven = proof.verdict is Verdict.PROVEN
        links = []
        for previous_id, target_id in zip(chain, chain[1:]):
            previous, target = catalog.get(previous_id), catalog.get(target_id)
            equivalence = equivalence_transfer(previous.to_spec(), target.to_spec())
            formequiv = verify_formequiv(equivalence.s, equivalence.z)
            proven = proven and equivalence.verdict is Verdict.PROVEN and formequiv.verdict is Verdict.PROVEN
            links.append((equivalence, formequiv))
            logger.info(f"{target_id} = {equivalence.alpha} * {previous_id} + {equivalence.beta} * form-equiv")
    except (OrrPiError, ValueError) as e:
        logger.error(f"Transfer to {chain[-1]} failed: {e}")
        return record_error(state, "TransferNode", e)

    equivalence, formequiv = links[-1]
    state["method"] = "equivalence"
    state["source_id"] = source.id
    state["translation"] = proof
    state["equivalence"] = equivalence.to_dict()
    state["formequiv"] = formequiv.to_dict()
    state["verdict"] = (Verdict.PROVEN if proven else Verdict.FAILED).value
    return state
