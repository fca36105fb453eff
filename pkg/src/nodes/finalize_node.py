# Finalize Node - compile the proof report and the exit code
from __future__ import annotations
import time
from typing import Dict, Any

from ..errors import EXIT_FAILURE, EXIT_OK
from ..reports import ProveReport, TranslationSummary
from ..utils import setup_logging

logger = setup_logging()


def finalize_node(state: Dict[str, Any]) -> Dict[str, Any]:
    errors = state.get("errors", [])
    verdict = state.get("verdict")
    if errors:
        exit_code = errors[0].get("exit_code", EXIT_FAILURE)
        verdict = verdict or "FAILED"
    else:
        exit_code = EXIT_OK if verdict == "PROVEN" else EXIT_FAILURE

    translation = state.get("translation")
    report = ProveReport(
        id=state.get("entry_id") or "",
        digits=state["ctx"].target_digits if state.get("ctx") is not None else 0,
        method=state.get("method"),
        verdict=verdict,
        source_id=state.get("source_id"),
        translation=TranslationSummary.from_proof(translation) if translation is not None else None,
        equivalence=state.get("equivalence"),
        formequiv=state.get("formequiv"),
        seconds=round(time.time() - state.get("workflow_start_time", time.time()), 3),
        exit_code=exit_code,
        errors=errors,
    )

    state["report"] = report
    state["exit_code"] = exit_code
    state["workflow_status"] = "success" if exit_code == EXIT_OK else "failed"
    logger.info(f"{report.id}: verdict {verdict}, exit code {exit_code}")
    return state
