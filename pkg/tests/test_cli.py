import json
import shutil

import pytest
from click.testing import CliRunner

from src.catalog import load_catalog
from src.cli import cli, main, verify_entry


def _report(result):
    text = result.stdout
    return json.loads(text[text.index('{\n  "schema_version"'):])


@pytest.fixture
def runner():
    return CliRunner()


def _invoke(runner, *args):
    return runner.invoke(cli, ["--log-level", "WARNING", "--guard", "20", *args])


def test_verify_single_entry(runner, catalog_path):
    result = _invoke(runner, "verify", catalog_path, "--id", "eq-3", "--digits", "60", "--workers", "1")
    assert result.exit_code == 0
    report = _report(result)
    assert report["command"] == "verify"
    assert report["entries"][0]["id"] == "eq-3"
    assert report["entries"][0]["status"] == "match"
    assert report["entries"][0]["digits_agreed"] >= 55


def test_verify_skips_divergent_entries(runner, catalog_path):
    result = _invoke(runner, "verify", catalog_path, "--id", "addendum-div-1", "--digits", "30", "--workers", "1")
    assert result.exit_code == 0
    entry = _report(result)["entries"][0]
    assert entry["status"] == "skipped"
    assert "formal-divergent" in entry["note"]


def test_verify_marks_conjectural(catalog_path):
    entry = load_catalog(catalog_path).get("pi2-1920")
    record = verify_entry(entry.model_dump(mode="json"), 40, 20)
    assert record["status"] == "match"
    assert record["conjectural"]
    assert record["note"] == "numerical evidence only"


def test_verify_needs_a_selection(runner, catalog_path):
    assert _invoke(runner, "verify", catalog_path).exit_code == 2
    assert _invoke(runner, "verify", catalog_path, "--id", "eq-3", "--all").exit_code == 2


def test_verify_unknown_id(runner, catalog_path):
    result = _invoke(runner, "verify", catalog_path, "--id", "eq-99", "--workers", "1")
    assert result.exit_code == 2
    assert _report(result)["errors"][0]["type"] == "CatalogError"


def test_missing_catalog(runner, tmp_path):
    result = _invoke(runner, "verify", str(tmp_path / "absent.json"), "--all")
    assert result.exit_code == 2


def test_prove_by_translation(runner, catalog_path):
    result = _invoke(runner, "prove", catalog_path, "--id", "eq-4", "--digits", "50", "--samples", "1")
    assert result.exit_code == 0
    report = _report(result)
    assert report["verdict"] == "PROVEN"
    assert report["method"] == "translation"
    assert report["translation"]["surd_ratio"] == "294"


def test_prove_by_equivalence(runner, catalog_path):
    result = _invoke(runner, "prove", catalog_path, "--id", "eq-3", "--digits", "50", "--samples", "1")
    assert result.exit_code == 0
    report = _report(result)
    assert report["method"] == "equivalence"
    assert report["source_id"] == "eq-4"
    assert report["equivalence"]["alpha"] == "1/27"
    assert report["formequiv"]["verdict"] == "PROVEN"


def test_prove_without_family(runner, catalog_path):
    result = _invoke(runner, "prove", catalog_path, "--id", "eq-ten", "--digits", "30")
    assert result.exit_code != 0
    report = _report(result)
    assert report["verdict"] == "FAILED"
    assert report["errors"][0]["type"] == "NoFamilyError"


def test_discover_nothing(runner, catalog_path):
    result = _invoke(
        runner, "discover", catalog_path, "--y0", "1/3", "--digits", "100", "--max-coeff", "1000000", "--no-append"
    )
    assert result.exit_code == 1
    report = _report(result)
    assert report["found"] is False
    assert report["added_id"] is None


def test_discover_appends(runner, catalog_path, tmp_path):
    target = tmp_path / "catalog.json"
    shutil.copy(catalog_path, target)
    result = _invoke(runner, "discover", str(target), "--y0", "192/2401", "--digits", "300")
    assert result.exit_code == 0
    report = _report(result)
    assert report["numerator"] == [15, 216, 376]
    assert report["added_id"] == "discovered-192_2401"
    added = load_catalog(str(target)).get("discovered-192_2401")
    assert added.status.value == "discovered"
    assert added.formula.numerator == [15, 216, 376]


def test_discover_rejects_divergent_argument(runner, catalog_path):
    result = _invoke(runner, "discover", catalog_path, "--y0", "-16384/2401", "--no-append")
    assert result.exit_code == 2


def test_discover_rejects_float_argument(runner, catalog_path):
    result = _invoke(runner, "discover", catalog_path, "--y0", "0.25", "--no-append")
    assert result.exit_code == 2


def test_factor_check(runner):
    result = _invoke(runner, "factor-check", "--family", "fam1", "--samples", "0", "--digits", "30")
    assert result.exit_code == 0
    report = _report(result)
    assert report["passed"] is True
    assert report["family"] == "fam1"


def test_factor_check_generic_needs_s(runner):
    assert _invoke(runner, "factor-check", "--family", "generic").exit_code == 2
    result = _invoke(runner, "factor-check", "--family", "generic", "--s", "1/3", "--samples", "2", "--digits", "30")
    assert result.exit_code == 0


def test_main_returns_exit_code(catalog_path):
    assert main(["--log-level", "WARNING", "verify", catalog_path]) == 2


def test_discover_zero_argument(runner, catalog_path):
    result = _invoke(runner, "discover", catalog_path, "--y0", "0", "--digits", "60", "--no-append")
    assert result.exit_code == 1
    report = _report(result)
    assert report["found"] is False
    assert report["norm_bound"] is None
