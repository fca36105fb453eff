import pytest

from src.catalog import load_catalog
from src.core.precision import PrecisionContext
from src.nodes.resolve_node import _equivalence_chain, resolve_node
from src.workflow import ProofWorkflow, route_after_resolve


@pytest.fixture
def catalog(catalog_path):
    return load_catalog(catalog_path)


@pytest.fixture
def workflow(catalog):
    return ProofWorkflow(catalog, PrecisionContext(50, 20), sample_count=1)


def test_equivalence_chain(catalog):
    assert _equivalence_chain(catalog, "eq-4") == ["eq-4"]
    assert _equivalence_chain(catalog, "eq-3") == ["eq-4", "eq-3"]
    assert _equivalence_chain(catalog, "addendum-div-2") == ["addendum-div-1", "addendum-div-2"]


def test_resolve_routes(catalog):
    state = resolve_node({"entry_id": "for1-ex-2", "catalog": catalog, "errors": []})
    assert state["route"] == "transfer"
    assert route_after_resolve(state) == "transfer"


def test_resolve_missing_input():
    state = resolve_node({"errors": []})
    assert state["workflow_status"] == "failed"
    assert state["errors"][0]["exit_code"] == 2
    assert route_after_resolve(state) == "finalize"


def test_translation_route(workflow):
    report = workflow.run("eq-4")
    assert report.verdict == "PROVEN"
    assert report.method == "translation"
    assert report.exit_code == 0
    assert report.translation.surd_ratio == "294"
    assert report.translation.factorization.passed


def test_equivalence_route(workflow):
    report = workflow.run("eq-3")
    assert report.verdict == "PROVEN"
    assert report.method == "equivalence"
    assert report.equivalence["alpha"] == "1/27"
    assert report.translation.predicted_rhs == "294*sqrt(21)/pi"


def test_divergent_equivalence_route(workflow):
    report = workflow.run("addendum-div-2")
    assert report.verdict == "PROVEN"
    assert report.equivalence["alpha"] == "1/2"
    assert report.formequiv["convergent"] is False


def test_unprovable_entry(workflow):
    report = workflow.run("eq-ten")
    assert report.verdict == "FAILED"
    assert report.exit_code == 1
    assert report.errors[0]["node"] == "ResolveNode"
    assert report.errors[0]["action_taken"] == "abort"


def test_unknown_entry(workflow):
    report = workflow.run("no-such-entry")
    assert report.exit_code == 2
    assert report.errors[0]["type"] == "CatalogError"


@pytest.mark.asyncio
async def test_run_workflow(workflow):
    result = await workflow.run_workflow("eq-4")
    assert result["success"]
    assert result["report"].verdict == "PROVEN"
    failed = await workflow.run_workflow("eq-ten")
    assert not failed["success"]
    assert failed["report"].exit_code == 1
