# Command-line surface: verify, prove, discover, factor-check, serve
from __future__ import annotations

import sys
import time
from dataclasses import replace
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import Any, Dict, List, Optional

import click
from rich.console import Console
from rich.table import Table

from .catalog import (
    CatalogEntry,
    EntryStatus,
    discovered_entry,
    load_catalog,
    next_discovered_id,
    save_catalog,
)
from .core.factorization import FamilyId, check_factorization, get_family, orr_parameters
from .core.hyperseries import DenomPattern, FormulaSpec, verify_formula
from .core.precision import PrecisionContext
from .core.relations import discover_formula
from .errors import EXIT_FAILURE, EXIT_OK, OrrPiError, exit_code_for
from .reports import DiscoverReport, FactorCheckReport, ProveReport, VerifyEntry, VerifyReport
from .settings import Settings, get_settings
from .utils import format_rational, parse_rational, setup_logging
from .workflow import ProofWorkflow

logger = setup_logging()
console = Console(stderr=True)


def _emit(report, ctx: click.Context) -> None:
    click.echo(report.to_json(), nl=False)
    ctx.exit(report.exit_code)


def _error_record(command: str, error: BaseException) -> Dict[str, Any]:
    return {
        "node": command,
        "type": type(error).__name__,
        "message": str(error),
        "exit_code": exit_code_for(error),
    }


def _rational_option(ctx, param, value) -> Optional[Fraction]:
    if value is None:
        return None
    try:
        return parse_rational(value)
    except ValueError as e:
        raise click.BadParameter(str(e))


# -------------------- verify --------------------

def verify_entry(payload: Dict[str, Any], digits: int, guard_digits: int) -> Dict[str, Any]:
    """Verify one serialized catalog entry; top-level so worker processes can run it."""
    entry = CatalogEntry.model_validate(payload)
    conjectural = entry.status is EntryStatus.CONJECTURAL
    if not entry.convergent:
        return VerifyEntry(
            id=entry.id,
            status="skipped",
            conjectural=conjectural,
            note="formal-divergent: |z| >= 1, the identity holds only through its right-hand side; use prove",
        ).model_dump()

    start = time.perf_counter()
    try:
        result = verify_formula(entry.to_spec(), PrecisionContext(digits, guard_digits))
    except (OrrPiError, ValueError) as e:
        return VerifyEntry(
            id=entry.id,
            status="error",
            seconds=round(time.perf_counter() - start, 3),
            conjectural=conjectural,
            note=f"{type(e).__name__}: {e}",
        ).model_dump() | {"exit_code": exit_code_for(e)}
    return VerifyEntry(
        id=entry.id,
        status="match" if result.match else "mismatch",
        digits_agreed=result.digits_agreed,
        terms_used=result.terms_used,
        seconds=round(time.perf_counter() - start, 3),
        conjectural=conjectural,
        note="numerical evidence only" if conjectural else None,
    ).model_dump()


def _run_verification(entries: List[CatalogEntry], digits: int, guard_digits: int, workers: int) -> List[Dict[str, Any]]:
    payloads = [entry.model_dump(mode="json") for entry in entries]
    if workers <= 1 or len(payloads) <= 1:
        return [verify_entry(p, digits, guard_digits) for p in payloads]
    with ProcessPoolExecutor(max_workers=min(workers, len(payloads))) as pool:
        # map keeps catalog order regardless of completion order
        return list(pool.map(verify_entry, payloads, [digits] * len(payloads), [guard_digits] * len(payloads)))


def _verify_exit_code(results: List[Dict[str, Any]]) -> int:
    codes = [r.get("exit_code", EXIT_FAILURE) for r in results if r["status"] == "error"]
    if codes:
        return max(codes)
    if any(r["status"] == "mismatch" for r in results):
        return EXIT_FAILURE
    return EXIT_OK


def _print_verify_table(report: VerifyReport) -> None:
    table = Table(title=f"verify at {report.digits} digits")
    table.add_column("id", style="cyan")
    table.add_column("status")
    table.add_column("digits", justify="right")
    table.add_column("terms", justify="right")
    table.add_column("seconds", justify="right")
    colors = {"match": "green", "mismatch": "red", "error": "red", "skipped": "yellow"}
    for e in report.entries:
        status = e.status + (" (conjectural)" if e.conjectural else "")
        table.add_row(
            e.id,
            f"[{colors.get(e.status, 'white')}]{status}[/]",
            str(e.digits_agreed if e.digits_agreed is not None else "-"),
            str(e.terms_used if e.terms_used is not None else "-"),
            f"{e.seconds:.2f}",
        )
    console.print(table)


# -------------------- group --------------------

@click.group()
@click.option("--log-level", default=None, help="loguru level (default ORRPI_LOG_LEVEL or INFO)")
@click.option("--guard", "guard_digits", type=int, default=None, help="Guard digits above the target precision")
@click.option("--env-file", type=click.Path(dir_okay=False), default=None, help="Alternative .env file")
@click.pass_context
def cli(ctx: click.Context, log_level: Optional[str], guard_digits: Optional[int], env_file: Optional[str]):
    """Ramanujan-Orr 1/pi formulas: verify, prove, discover and check factorizations."""
    settings = get_settings(env_file)
    if guard_digits is not None:
        if guard_digits <= 0:
            raise click.BadParameter("guard digits must be positive", param_hint="--guard")
        settings = replace(settings, guard_digits=guard_digits)
    setup_logging(log_level or settings.log_level, force=True)
    ctx.obj = settings


def _catalog_path(settings: Settings, catalog: Optional[str]) -> str:
    return catalog or settings.catalog_path


@cli.command()
@click.argument("catalog", required=False)
@click.option("--id", "entry_ids", multiple=True, help="Entry id to verify (repeatable)")
@click.option("--all", "verify_all", is_flag=True, help="Verify every catalog entry")
@click.option("--digits", type=click.IntRange(min=1), default=None, help="Target digits (default ORRPI_VERIFY_DIGITS)")
@click.option("--workers", type=click.IntRange(min=1), default=None, help="Worker processes (default ORRPI_WORKERS)")
@click.pass_context
def verify(ctx: click.Context, catalog, entry_ids, verify_all, digits, workers):
    """Sum catalog series numerically and compare with their right-hand sides."""
    settings: Settings = ctx.obj
    digits = digits or settings.verify_digits
    report = VerifyReport(digits=digits)
    if bool(entry_ids) == bool(verify_all):
        raise click.UsageError("give either --id or --all")
    try:
        loaded = load_catalog(_catalog_path(settings, catalog))
        entries = loaded.entries if verify_all else [loaded.get(i) for i in entry_ids]
    except OrrPiError as e:
        report.errors.append(_error_record("verify", e))
        report.exit_code = exit_code_for(e)
        _emit(report, ctx)
        return

    results = _run_verification(entries, digits, settings.guard_digits, workers or settings.workers)
    for r in results:
        if r["status"] == "error":
            report.errors.append({"node": r["id"], "message": r["note"], "exit_code": r["exit_code"]})
        if r["status"] == "skipped":
            logger.warning(f"{r['id']}: {r['note']}")
    report.entries = [VerifyEntry.model_validate({k: v for k, v in r.items() if k != "exit_code"}) for r in results]
    report.exit_code = _verify_exit_code(results)
    _print_verify_table(report)
    _emit(report, ctx)


# -------------------- prove --------------------

@cli.command()
@click.argument("catalog", required=False)
@click.option("--id", "entry_id", required=True, help="Entry id to prove")
@click.option("--digits", type=click.IntRange(min=1), default=None, help="Target digits (default ORRPI_PROVE_DIGITS)")
@click.option("--samples", type=click.IntRange(min=0), default=3, show_default=True, help="Factorization spot-check samples")
@click.pass_context
def prove(ctx: click.Context, catalog, entry_id, digits, samples):
    """Prove an entry by translation, or by equivalence with a proven entry."""

    settings: Settings = ctx.obj
    digits = digits or settings.prove_digits
    try:
        loaded = load_catalog(_catalog_path(settings, catalog))
    except OrrPiError as e:
        report = ProveReport(id=entry_id, digits=digits, errors=[_error_record("prove", e)], exit_code=exit_code_for(e))
        _emit(report, ctx)
        return

    workflow = ProofWorkflow(loaded, PrecisionContext(digits, settings.guard_digits), sample_count=samples)
    report = workflow.run(entry_id)
    style = "green" if report.verdict == "PROVEN" else "red"
    console.print(f"[bold]{entry_id}[/bold]: [{style}]{report.verdict}[/] via {report.method or '-'}")
    for error in report.errors:
        console.print(f"[red]{error['type']}: {error['message']}[/red]")
    _emit(report, ctx)


# -------------------- discover --------------------

@cli.command()
@click.argument("catalog", required=False)
@click.option("--y0", required=True, callback=_rational_option, help="Rational argument p/q with |y0| < 1")
@click.option(
    "--pattern",
    type=click.Choice([p.value for p in DenomPattern]),
    default=DenomPattern.TWO_N_PLUS_ONE.value,
    show_default=True,
)
@click.option("--s", "s_value", default="1/4", show_default=True, callback=_rational_option, help="B(n, s) parameter")
@click.option("--digits", type=click.IntRange(min=1), default=None, help="Working target (default ORRPI_DISCOVER_DIGITS)")
@click.option("--max-coeff", type=click.IntRange(min=1), default=10 ** 12, show_default=True)
@click.option("--no-append", is_flag=True, help="Do not add a discovered entry to the catalog")
@click.pass_context
def discover(ctx: click.Context, catalog, y0, pattern, s_value, digits, max_coeff, no_append):
    """Search for sum B(n, s) y0^n P(n)/D(n) = q sqrt(d)/pi with PSLQ."""
    settings: Settings = ctx.obj
    digits = digits or settings.discover_digits
    report = DiscoverReport(y0=format_rational(y0), pattern=pattern, digits=digits, max_coeff=max_coeff)
    if abs(y0) >= 1:
        raise click.BadParameter(f"|y0| must be below 1, got {format_rational(y0)}", param_hint="--y0")

    path = _catalog_path(settings, catalog)
    upper, lower = orr_parameters(s_value)
    core = FormulaSpec(upper, lower, y0)
    try:
        result = discover_formula(core, y0, DenomPattern(pattern), PrecisionContext(digits, settings.guard_digits), max_coeff)
        report.fill(result)
        if result.found and not no_append:
            loaded = load_catalog(path)
            entry_id = next_discovered_id(loaded, y0)
            entry = discovered_entry(entry_id, result.formula, f"PSLQ at {digits} digits, pattern {pattern}")
            save_catalog(loaded.add(entry), path)
            report.added_id = entry_id
    except OrrPiError as e:
        report.errors.append(_error_record("discover", e))
        report.exit_code = exit_code_for(e)
        _emit(report, ctx)
        return

    report.exit_code = EXIT_OK if result.found else EXIT_FAILURE
    if result.found:
        console.print(f"[green]found[/green] numerator {report.numerator}, right-hand side {report.rhs}")
    else:
        console.print(f"[yellow]no relation[/yellow] with coefficients below {max_coeff}")
    _emit(report, ctx)


# -------------------- factor-check --------------------

@cli.command("factor-check")
@click.option("--family", "family_id", type=click.Choice([f.value for f in FamilyId]), required=True)
@click.option("--s", "s_value", default=None, callback=_rational_option, help="s for the generic family")
@click.option("--samples", type=click.IntRange(min=0), default=10, show_default=True)
@click.option("--digits", type=click.IntRange(min=1), default=100, show_default=True)
@click.pass_context
def factor_check(ctx: click.Context, family_id, s_value, samples, digits):
    """Compare both sides of a factorization at random points and on a jet."""
    settings: Settings = ctx.obj
    report = FactorCheckReport(
        family=family_id,
        s=format_rational(s_value) if s_value is not None else None,
        digits=digits,
        samples=samples,
    )
    try:
        family = get_family(family_id, s_value)
    except ValueError as e:
        raise click.BadParameter(str(e), param_hint="--s")
    try:
        check = check_factorization(family, samples, PrecisionContext(digits, settings.guard_digits))
    except OrrPiError as e:
        report.errors.append(_error_record("factor-check", e))
        report.exit_code = exit_code_for(e)
        _emit(report, ctx)
        return
    report.fill(check)
    report.exit_code = EXIT_OK if check.passed else EXIT_FAILURE
    style = "green" if check.passed else "red"
    console.print(f"{family.label}: [{style}]{'pass' if check.passed else 'fail'}[/], max deviation {report.max_deviation}")
    _emit(report, ctx)


# -------------------- serve --------------------

@cli.command()
@click.option("--transport", type=click.Choice(["stdio", "http"]), default=None)
@click.option("--port", type=int, default=None)
@click.pass_context
def serve(ctx: click.Context, transport, port):
    """Run the MCP service."""
    from .mcp_plugin.mcp_service import create_app

    settings: Settings = ctx.obj
    transport = transport or settings.mcp_transport
    app = create_app(settings)
    if transport == "http":
        app.run(transport="http", port=port or settings.mcp_port)
    else:
        app.run()


def main(argv: Optional[List[str]] = None) -> int:
    try:
        result = cli.main(args=argv, prog_name="orrpi", standalone_mode=False)
    except click.ClickException as e:
        e.show()
        return e.exit_code
    except click.Abort:
        return EXIT_FAILURE
    return result if isinstance(result, int) else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
