import time
from typing import Dict, Any, Optional
from langgraph.graph import StateGraph, START, END

from .catalog import Catalog
from .core.precision import PrecisionContext
from .nodes.resolve_node import resolve_node
from .nodes.translate_node import DEFAULT_SAMPLE_COUNT, translate_node
from .nodes.transfer_node import transfer_node
from .nodes.finalize_node import finalize_node
from .reports import ProveReport
from .utils import setup_logging

logger = setup_logging()


def _route_or_finalize(state: Dict[str, Any], next_node: str) -> str:
    if state.get("workflow_status") == "failed" or state.get("status") == "failed":
        return "finalize"
    return next_node

def route_after_resolve(state: Dict[str, Any]) -> str:
    return _route_or_finalize(state, state.get("route", "translate"))

def route_after_proof(state: Dict[str, Any]) -> str:
    return "finalize"

def route_after_finalize(state: Dict[str, Any]) -> str:
    return END


class ProofWorkflow:
    """resolve -> (translate | transfer) -> finalize over one catalog entry."""

    def __init__(self, catalog: Catalog, ctx: PrecisionContext, sample_count: int = DEFAULT_SAMPLE_COUNT):
        self.catalog = catalog
        self.ctx = ctx
        self.sample_count = sample_count
        self.workflow = self._create_workflow()
        self.app = self.workflow.compile()

    def _create_workflow(self) -> StateGraph:
        workflow = StateGraph(Dict[str, Any])
        workflow.add_node("resolve", resolve_node)
        workflow.add_node("translate", translate_node)
        workflow.add_node("transfer", transfer_node)
        workflow.add_node("finalize", finalize_node)
        workflow.add_edge(START, "resolve")
        workflow.add_conditional_edges("resolve", route_after_resolve)
        workflow.add_conditional_edges("translate", route_after_proof)
        workflow.add_conditional_edges("transfer", route_after_proof)
        workflow.add_conditional_edges("finalize", route_after_finalize)
        return workflow

    def _initial_state(self, entry_id: str) -> Dict[str, Any]:
        return {
            "entry_id": entry_id,
            "catalog": self.catalog,
            "ctx": self.ctx,
            "sample_count": self.sample_count,
            "status": "running",
            "workflow_status": "running",
            "workflow_start_time": time.time(),
            "errors": [],
        }

    def run(self, entry_id: str) -> ProveReport:
        config = {"configurable": {"thread_id": f"prove-{entry_id}"}}
        result = self.app.invoke(self._initial_state(entry_id), config)
        return result["report"]

    async def run_workflow(self, entry_id: str) -> Dict[str, Any]:
        try:
            config = {"configurable": {"thread_id": f"prove-{entry_id}"}}
            result = await self.app.ainvoke(self._initial_state(entry_id), config)
            report: Optional[ProveReport] = result.get("report")
            if result.get("workflow_status") == "success":
                return {"success": True, "report": report, "message": f"{entry_id} proven"}
            return {"success": False, "report": report, "message": f"{entry_id} not proven"}
        except Exception as e:
            logger.error(f"Proof workflow exception for {entry_id}: {e}")
            return {"success": False, "report": None, "message": f"Workflow exception: {str(e)}"}
