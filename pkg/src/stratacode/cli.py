"""CLI-интерфейс stratacode."""

from __future__ import annotations

from collections.abc import Iterator
from contextlib import contextmanager
from pathlib import Path
from typing import Annotated, Any, NoReturn

import typer
from rich.console import Console

from stratacode import __version__
from stratacode.algebra import RingTag
from stratacode.catalog import CatalogEntry, example_names, get_entry
from stratacode.colimit import build, pushout
from stratacode.diagram import StratifiedDiagram
from stratacode.documents import (
    document_payload,
    document_to_diagram,
    dump_json,
    entry_from_document,
    load_document,
    serialize_diagram,
    write_diagram,
)
from stratacode.errors import DocumentError, StrataError
from stratacode.logging import bound_operation, get_logger, setup_logging
from stratacode.report import (
    ErrorDoc,
    ReportDocument,
    add_homology,
    check_diagram,
    claim_rows,
    code_document,
    homology_rows,
    oracle_for,
    render,
    start_report,
)

app = typer.Typer(
    name="stratacode",
    help="Колимит-комплексы стратифицированных диаграмм, гомологии и CSS-коды",
    add_completion=False,
)
console = Console()
logger = get_logger(__name__)

EXIT_DOMAIN = 1
EXIT_INPUT = 2

JsonFlag = Annotated[bool, typer.Option("--json", help="Машиночитаемый JSON на stdout")]
VerboseFlag = Annotated[bool, typer.Option("--verbose", "-v", help="Подробный лог в stderr")]
DiagramPath = Annotated[Path, typer.Argument(help="Путь к документу диаграммы (JSON или YAML)")]


def _fail(exc: StrataError, as_json: bool) -> NoReturn:
    code = EXIT_INPUT if isinstance(exc, DocumentError) else EXIT_DOMAIN
    logger.debug("command_failed", error=type(exc).__name__, exit_code=code)
    if as_json:
        typer.echo(dump_json(ErrorDoc(error=type(exc).__name__, detail=str(exc)).model_dump()))
    else:
        console.print(f"[bold red]✗ Ошибка:[/bold red] {exc}")
    raise typer.Exit(code) from exc


@contextmanager
def _command(name: str, as_json: bool, verbose: bool) -> Iterator[None]:
    setup_logging("DEBUG" if verbose else "WARNING")
    with bound_operation(command=name):
        try:
            yield
        except StrataError as exc:
            _fail(exc, as_json)


def _emit(report: ReportDocument, as_json: bool) -> None:
    if as_json:
        typer.echo(dump_json(document_payload(report)))
    else:
        render(report, console)


def _ring(label: str | None) -> RingTag | None:
    if label is None:
        return None
    try:
        return RingTag.from_label(label)
    except ValueError as exc:
        raise typer.BadParameter(str(exc)) from exc


def _load(path: Path) -> tuple[StratifiedDiagram, CatalogEntry | None]:
    doc = load_document(path)
    d = document_to_diagram(doc)
    return d, entry_from_document(doc, d)


@app.command()
def validate(path: DiagramPath, as_json: JsonFlag = False, verbose: VerboseFlag = False) -> None:
    """Проверить аксиомы диаграммы и согласованность границ с соотношениями."""
    with _command("validate", as_json, verbose):
        d, entry = _load(path)
        report = start_report(
            d, "validate", findings=check_diagram(d).findings, entry=entry, source=str(path)
        )
    _emit(report, as_json)
    if not report.ok:
        raise typer.Exit(EXIT_DOMAIN)


@app.command()
def homology(
    path: DiagramPath,
    ring_override: Annotated[
        str | None, typer.Option("--ring-override", help="Пересчитать над кольцом: F2 или Z")
    ] = None,
    degree: Annotated[
        int | None, typer.Option("--degree", "-k", min=0, help="Только одна степень")
    ] = None,
    force: Annotated[
        bool, typer.Option("--force", help="Пропустить проверку аксиом и разрешение глюингов")
    ] = False,
    as_json: JsonFlag = False,
    verbose: VerboseFlag = False,
) -> None:
    """Посчитать гомологии и когомологии колимит-комплекса."""
    ring = _ring(ring_override)
    with _command("homology", as_json, verbose):
        d, entry = _load(path)
        if ring is not None:
            d = d.with_ring(ring)
        findings = check_diagram(d, force=force).findings
        report = start_report(d, "homology", findings=findings, entry=entry, source=str(path))
        if report.ok:
            c = build(d, force=force)
            add_homology(report, c, degree)
            if entry is not None and ring is None and degree is None:
                report.claims = claim_rows(entry, c)
    _emit(report, as_json)
    if not report.ok:
        raise typer.Exit(EXIT_DOMAIN)


@app.command()
def code(
    path: DiagramPath,
    degree: Annotated[
        int | None, typer.Option("--degree", "-k", min=0, help="Степень кубитов")
    ] = None,
    distance_budget: Annotated[
        int | None,
        typer.Option("--distance-budget", min=1, help="Предел числа кандидатов перебора"),
    ] = None,
    reduce: Annotated[
        bool, typer.Option("--reduce", help="Оставить только независимые стабилизаторы")
    ] = False,
    as_json: JsonFlag = False,
    verbose: VerboseFlag = False,
) -> None:
    """Извлечь CSS-код: стабилизаторы, логические операторы, спаривание, расстояние."""
    with _command("code", as_json, verbose):
        d, entry = _load(path)
        if degree is None:
            degree = entry.default_qubit_degree if entry is not None else 1
        report = start_report(
            d, "code", findings=check_diagram(d).findings, entry=entry, source=str(path)
        )
        if report.ok:
            c = build(d)
            add_homology(report, c, degree)
            report.code = code_document(
                c, degree, budget=distance_budget, reduce_stabilizers=reduce
            )
    _emit(report, as_json)
    if not report.ok:
        raise typer.Exit(EXIT_DOMAIN)


def _example_params(**options: Any) -> dict[str, Any]:
    return {k: v for k, v in options.items() if v is not None and v is not False}


@app.command()
def example(
    name: Annotated[str, typer.Argument(help="Имя примера из каталога")],
    n: Annotated[int | None, typer.Option("--n", help="Размер тора")] = None,
    a: Annotated[int | None, typer.Option("--a", help="Сдвиг скрутки по первой оси")] = None,
    b: Annotated[int | None, typer.Option("--b", help="Сдвиг скрутки по второй оси")] = None,
    size: Annotated[int | None, typer.Option("--L", help="Размер кубической решётки")] = None,
    rows: Annotated[int | None, typer.Option("--rows", help="Строк в заплатке")] = None,
    cols: Annotated[int | None, typer.Option("--cols", help="Столбцов в заплатке")] = None,
    ring: Annotated[str | None, typer.Option("--ring", help="Кольцо: F2 или Z")] = None,
    control: Annotated[
        bool, typer.Option("--control", help="Контрольная решётка без удалённых граней")
    ] = False,
    torsion_free: Annotated[
        bool, typer.Option("--torsion-free", help="Вариант RP² без кручения")
    ] = False,
    repaired: Annotated[
        bool, typer.Option("--repaired", help="Исправленный вариант контрпримера")
    ] = False,
    output: Annotated[
        Path | None, typer.Option("--output", "-o", help="Куда записать документ диаграммы")
    ] = None,
    with_report: Annotated[
        bool, typer.Option("--report", help="Прогнать конвейер и сравнить с заявленным")
    ] = False,
    oracle: Annotated[
        bool, typer.Option("--oracle", help="Добавить независимый оракул в сравнение")
    ] = False,
    with_code: Annotated[
        bool, typer.Option("--code", help="Добавить CSS-код в отчёт")
    ] = False,
    as_json: JsonFlag = False,
    verbose: VerboseFlag = False,
) -> None:
    """Построить пример из каталога, записать документ и при желании отчёт."""
    if ring is not None:
        _ring(ring)
    params = _example_params(
        n=n, a=a, b=b, L=size, rows=rows, cols=cols, ring=ring,
        control=control, torsion_free=torsion_free, repaired=repaired,
    )
    with _command("example", as_json, verbose):
        entry = get_entry(name, **params)
        if output is not None:
            write_diagram(output, entry.diagram, entry)
            if not as_json:
                console.print(f"✓ Документ записан: [green]{output}[/green]")
        if not with_report:
            if output is None:
                typer.echo(serialize_diagram(entry.diagram, entry))
            return
        report = start_report(
            entry.diagram, "example", findings=check_diagram(entry.diagram).findings, entry=entry
        )
        if report.ok:
            c = build(entry.diagram)
            add_homology(report, c)
            report.claims = claim_rows(entry, c, oracle_for(entry, c) if oracle else None)
            if with_code and c.ring is RingTag.GF2:
                report.code = code_document(c, entry.default_qubit_degree)
    _emit(report, as_json)
    if not report.ok and not entry.expect_invalid:
        raise typer.Exit(EXIT_DOMAIN)


def _parse_shares(shares: list[str]) -> dict[str, str]:
    shared: dict[str, str] = {}
    for item in shares:
        left, sep, right = item.partition("=")
        if not sep or not left.strip() or not right.strip():
            raise typer.BadParameter(f"Ожидалось LEFT=RIGHT, получено {item!r}")
        shared[left.strip()] = right.strip()
    return shared


@app.command()
def surgery(
    left: DiagramPath,
    right: DiagramPath,
    share: Annotated[
        list[str] | None,
        typer.Option("--share", "-s", help="Общая страта LEFT=RIGHT (можно повторять)"),
    ] = None,
    output: Annotated[
        Path | None, typer.Option("--output", "-o", help="Куда записать склеенную диаграмму")
    ] = None,
    as_json: JsonFlag = False,
    verbose: VerboseFlag = False,
) -> None:
    """Склеить две диаграммы вдоль общей поддиаграммы (хирургия кодов)."""
    shared = _parse_shares(share or [])
    with _command("surgery", as_json, verbose):
        parts = [_load(path)[0] for path in (left, right)]
        findings = [f for d in parts for f in check_diagram(d).findings]
        if findings:
            report = start_report(parts[0], "surgery", findings=findings, source=str(left))
        else:
            merged = pushout(parts[0], parts[1], shared)
            report = start_report(merged, "surgery", findings=check_diagram(merged).findings)
            report.inputs = [homology_rows(build(d)) for d in parts]
            if report.ok:
                add_homology(report, build(merged))
            if output is not None:
                write_diagram(output, merged)
                report.source = str(output)
    _emit(report, as_json)
    if not report.ok:
        raise typer.Exit(EXIT_DOMAIN)


@app.command(name="list")
def list_examples() -> None:
    """Показать имена примеров каталога."""
    for name in example_names():
        console.print(name)


@app.command()
def version() -> None:
    """Показать версию приложения."""
    console.print(f"stratacode v{__version__}")


if __name__ == "__main__":
    app()
