"""Отчёты конвейера: сборка ReportDocument и вывод через rich."""

from __future__ import annotations

from typing import Any

from pydantic import BaseModel, Field
from rich.console import Console
from rich.table import Table

from stratacode.algebra import RingTag, SparseMatrix, rank
from stratacode.catalog import CatalogEntry, Claim, Quantity
from stratacode.colimit import ColimitComplex, boundary_compatibility_check
from stratacode.constants import HASSE_PREVIEW_LINES, SCHEMA_VERSION
from stratacode.diagram import (
    Finding,
    StratifiedDiagram,
    ValidationReport,
    resolve_gluings,
    validate,
)
from stratacode.errors import DegeneratePairing, DimensionMismatchError, SizeLimitExceeded
from stratacode.homology import BettiRow, betti_row, betti_table, euler_characteristic, uct_check
from stratacode.logging import get_logger
from stratacode.logical import (
    PauliKind,
    commutation_sign,
    css_extract,
    dualize_bases,
    min_distance,
)
from stratacode.oracles import (
    OracleResult,
    fracton_oracle,
    small_complex_oracle,
    twisted_torus_oracle,
)

logger = get_logger(__name__)

ClaimValue = int | list[int]


class ErrorDoc(BaseModel):
    error: str
    detail: str


class FindingDoc(BaseModel):
    kind: str
    message: str
    stratum: str | None = None
    pair: list[str] | None = None
    degree: int | None = None
    via: str | None = None

    @classmethod
    def of(cls, f: Finding) -> FindingDoc:
        return cls(
            kind=f.kind.value,
            message=f.message,
            stratum=f.stratum,
            pair=list(f.pair) if f.pair is not None else None,
            degree=f.degree,
            via=f.via,
        )


class HomologyRowDoc(BaseModel):
    degree: int
    quotient_rank: int
    free_rank: int
    invariant_factors: list[int]
    cohomology_free: int
    cohomology_factors: list[int]

    @classmethod
    def of(cls, row: BettiRow) -> HomologyRowDoc:
        return cls(
            degree=row.degree,
            quotient_rank=row.quotient_rank,
            free_rank=row.free_rank,
            invariant_factors=list(row.invariant_factors),
            cohomology_free=row.cohomology_free,
            cohomology_factors=list(row.cohomology_factors),
        )


class UctRowDoc(BaseModel):
    degree: int
    hom_part: int
    ext_part: list[int]
    observed_free: int
    observed_factors: list[int]
    consistent: bool


class EulerDoc(BaseModel):
    chains: int
    betti: int
    consistent: bool


class DistanceDoc(BaseModel):
    kind: str
    distance: int | None
    upper_bound: int | None
    exact: bool
    explored: int
    reason: str | None = None


class CodeDoc(BaseModel):
    qubit_degree: int
    n: int
    k_logical: int
    distance: int | None
    distance_exact: bool
    raw_stabilizers: list[int]
    independent_stabilizers: list[int]
    logical_z: list[list[int]]
    logical_x: list[list[int]]
    pairing: list[list[int]]
    dual_pairing_identity: bool
    commutation: list[list[int]]
    distances: list[DistanceDoc]

    @property
    def parameters(self) -> str:
        d = "?" if self.distance is None else str(self.distance)
        if self.distance is not None and not self.distance_exact:
            d = f"≤{d}"
        return f"[[{self.n}, {self.k_logical}, {d}]]"


class ClaimRowDoc(BaseModel):
    label: str
    quantity: str
    degree: int
    claimed: ClaimValue
    measured: ClaimValue | None
    oracle: ClaimValue | None = None
    note: str = ""
    matches: bool | None = None


class SummaryDoc(BaseModel):
    ring: str
    strata: int
    gluings: int
    covers: int
    top_degree: int
    hasse: list[str]


class ReportDocument(BaseModel):
    schema_version: str = SCHEMA_VERSION
    command: str
    source: str | None = None
    example: str | None = None
    ok: bool = True
    summary: SummaryDoc
    findings: list[FindingDoc] = Field(default_factory=list)
    homology: list[HomologyRowDoc] = Field(default_factory=list)
    uct: list[UctRowDoc] = Field(default_factory=list)
    uct_consistent: bool | None = None
    euler: EulerDoc | None = None
    code: CodeDoc | None = None
    claims: list[ClaimRowDoc] = Field(default_factory=list)
    notes: list[str] = Field(default_factory=list)
    inputs: list[list[HomologyRowDoc]] = Field(default_factory=list)


def hasse_lines(d: StratifiedDiagram) -> list[str]:
    """Посет как вложенный список: максимальные страты сверху, покрытия ниже с отступом."""
    poset = d.poset
    below: dict[str, list[str]] = {x: [] for x in poset.elements}
    for a, b in poset.covers():
        below[b].append(a)
    lines: list[str] = []
    shown: set[str] = set()

    def visit(x: str, depth: int) -> None:
        dim = d.strata[x].dim
        label = x if dim is None else f"{x} [{dim}]"
        if x in shown:
            lines.append("  " * depth + label + " ↺")
            return
        shown.add(x)
        lines.append("  " * depth + label)
        for child in sorted(below[x]):
            visit(child, depth + 1)

    for top in poset.elements:
        if not poset.above(top):
            visit(top, 0)
    return lines


def summarize(d: StratifiedDiagram) -> SummaryDoc:
    return SummaryDoc(
        ring=d.ring.label,
        strata=len(d.strata),
        gluings=len(d.gluings),
        covers=len(d.poset.covers()),
        top_degree=d.top_degree,
        hasse=hasse_lines(d),
    )


def check_diagram(d: StratifiedDiagram, *, force: bool = False) -> ValidationReport:
    """Аксиомы диаграммы, затем согласованность границ с соотношениями.

    При force аксиомы и разрешение глюингов пропускаются: проверяется только
    согласованность на глюингах в том виде, в каком они заданы.
    """
    if force:
        return boundary_compatibility_check(d)
    report = validate(d)
    if report.ok:
        report.findings.extend(boundary_compatibility_check(resolve_gluings(d)).findings)
    return report


def start_report(
    d: StratifiedDiagram,
    command: str,
    *,
    findings: list[Finding] | None = None,
    entry: CatalogEntry | None = None,
    source: str | None = None,
) -> ReportDocument:
    found = findings or []
    return ReportDocument(
        command=command,
        source=source,
        example=entry.name if entry is not None else None,
        ok=not found,
        summary=summarize(d),
        findings=[FindingDoc.of(f) for f in found],
        notes=list(entry.notes) if entry is not None else [],
    )


def homology_rows(c: ColimitComplex, degree: int | None = None) -> list[HomologyRowDoc]:
    rows = [betti_row(c, degree)] if degree is not None else betti_table(c)
    return [HomologyRowDoc.of(row) for row in rows]


def add_homology(report: ReportDocument, c: ColimitComplex, degree: int | None = None) -> None:
    if degree is not None:
        report.homology = homology_rows(c, degree)
        return
    rows = betti_table(c)
    report.homology = [HomologyRowDoc.of(row) for row in rows]
    uct = uct_check(c)
    report.uct = [
        UctRowDoc(
            degree=row.degree,
            hom_part=row.hom_part,
            ext_part=list(row.ext_part),
            observed_free=row.observed_free,
            observed_factors=list(row.observed_factors),
            consistent=row.consistent,
        )
        for row in uct.degrees
    ]
    report.uct_consistent = uct.consistent
    chains, betti = euler_characteristic(rows)
    report.euler = EulerDoc(chains=chains, betti=betti, consistent=chains == betti)


def _plain(value: Any) -> Any:
    return list(value) if isinstance(value, tuple | list) else value


def measured_value(c: ColimitComplex, claim: Claim) -> ClaimValue:
    k = claim.degree
    if claim.quantity is Quantity.RANK:
        return rank(c.boundary(k))
    if claim.quantity is Quantity.KERNEL:
        return c.quotient_rank(k) - rank(c.boundary(k))
    row = betti_row(c, k)
    if claim.quantity is Quantity.TORSION:
        return list(row.invariant_factors)
    return row.free_rank


def oracle_for(entry: CatalogEntry, c: ColimitComplex) -> OracleResult | None:
    """Независимая проверка: прямые формулы решёток или перебор для малых комплексов."""
    params = entry.params
    if entry.name == "twisted_torus":
        return twisted_torus_oracle(params["n"], params["a"], params["b"])
    if entry.name == "toric" and c.ring is RingTag.GF2:
        return twisted_torus_oracle(params["n"], 0, 1)
    if entry.name == "fracton":
        return fracton_oracle(params["L"], params["control"])
    boundaries = {k: c.boundary(k) for k in range(1, c.top_degree + 1)}
    dims = {k: c.quotient_rank(k) for k in range(0, c.top_degree + 1)}
    try:
        return small_complex_oracle(c.ring, boundaries, dims)
    except SizeLimitExceeded as exc:
        logger.info("oracle_skipped", example=entry.name, reason=str(exc))
        return None


def claim_rows(
    entry: CatalogEntry, c: ColimitComplex, oracle: OracleResult | None = None
) -> list[ClaimRowDoc]:
    rows: list[ClaimRowDoc] = []
    for claim in entry.claims:
        measured = measured_value(c, claim)
        claimed = _plain(claim.value)
        oracle_value = None
        if oracle is not None:
            oracle_value = _plain(oracle.value.get(f"{claim.quantity.value}_{claim.degree}"))
        rows.append(
            ClaimRowDoc(
                label=claim.label,
                quantity=claim.quantity.value,
                degree=claim.degree,
                claimed=claimed,
                measured=measured,
                oracle=oracle_value,
                note=claim.note,
                matches=claimed == measured,
            )
        )
    mismatched = [row.label for row in rows if not row.matches]
    if mismatched:
        logger.info("claims_differ", example=entry.name, claims=mismatched)
    return rows


def _supports(m: SparseMatrix) -> list[list[int]]:
    return [[r for r, value in enumerate(column) if value] for column in m.columns()]


def code_document(
    c: ColimitComplex,
    k: int,
    *,
    budget: int | None = None,
    reduce_stabilizers: bool = False,
    with_distance: bool = True,
) -> CodeDoc:
    code = css_extract(c, k, reduce_stabilizers=reduce_stabilizers)
    pairing = code.pairing()
    try:
        dual = dualize_bases(pairing)
    except (DegeneratePairing, DimensionMismatchError) as exc:
        logger.warning("pairing_not_dualizable", degree=k, error=str(exc))
        dual = pairing
    commutation = [
        [
            commutation_sign(dual.cocycles.column(i), dual.cycles.column(j))
            for j in range(dual.cycles.cols)
        ]
        for i in range(dual.cocycles.cols)
    ]
    distances = (
        [min_distance(code, kind, budget) for kind in PauliKind] if with_distance else []
    )
    values = [r.distance if r.exact else r.upper_bound for r in distances]
    known = [v for v in values if v is not None]
    return CodeDoc(
        qubit_degree=k,
        n=code.n,
        k_logical=code.k_logical,
        distance=min(known) if known else None,
        distance_exact=bool(distances) and all(r.exact for r in distances),
        raw_stabilizers=list(code.raw_stabilizers),
        independent_stabilizers=[rank(code.hz), rank(code.hx)],
        logical_z=_supports(code.logical_z),
        logical_x=_supports(code.logical_x),
        pairing=[[int(x) for x in row] for row in pairing.matrix.to_dense()],
        dual_pairing_identity=dual.is_identity,
        commutation=commutation,
        distances=[
            DistanceDoc(
                kind=r.kind.value,
                distance=r.distance,
                upper_bound=r.upper_bound,
                exact=r.exact,
                explored=r.explored,
                reason=r.reason,
            )
            for r in distances
        ],
    )


def _factors(values: list[int]) -> str:
    return str(values) if values else "—"


def _homology_table(title: str, rows: list[HomologyRowDoc]) -> Table:
    table = Table(title=title, show_header=True, header_style="bold cyan")
    table.add_column("k", justify="right")
    table.add_column("ранг C_k", justify="right")
    table.add_column("H_k своб.", justify="right")
    table.add_column("H_k круч.")
    table.add_column("H^k своб.", justify="right")
    table.add_column("H^k круч.")
    for row in rows:
        table.add_row(
            str(row.degree),
            str(row.quotient_rank),
            str(row.free_rank),
            _factors(row.invariant_factors),
            str(row.cohomology_free),
            _factors(row.cohomology_factors),
        )
    return table


def _render_code(code: CodeDoc, console: Console) -> None:
    table = Table(title=f"CSS-код в степени {code.qubit_degree}", header_style="bold cyan")
    table.add_column("Показатель", style="dim")
    table.add_column("Значение", justify="right")
    table.add_row("Параметры", code.parameters)
    table.add_row("Стабилизаторы Z/X (строк)", "/".join(map(str, code.raw_stabilizers)))
    table.add_row("Независимых Z/X", "/".join(map(str, code.independent_stabilizers)))
    table.add_row("Спаривание = I после дуализации", "да" if code.dual_pairing_identity else "нет")
    for dist in code.distances:
        value = dist.distance if dist.exact else f"≤{dist.upper_bound}"
        table.add_row(f"Расстояние {dist.kind}", str(value))
    console.print(table)
    for i, support in enumerate(code.logical_z):
        console.print(f"  Z̄_{i}: {support}")
    for i, support in enumerate(code.logical_x):
        console.print(f"  X̄_{i}: {support}")
    if code.commutation:
        console.print("  Знаки коммутации X̄_i·Z̄_j:")
        for signs in code.commutation:
            console.print("    " + " ".join(f"{s:+d}" for s in signs))


def _render_claims(rows: list[ClaimRowDoc], console: Console) -> None:
    table = Table(title="Заявлено / измерено / оракул", header_style="bold cyan")
    table.add_column("Величина")
    table.add_column("Заявлено", justify="right")
    table.add_column("Измерено", justify="right")
    table.add_column("Оракул", justify="right")
    table.add_column("")
    table.add_column("Примечание", style="dim")
    for row in rows:
        mark = "[green]✓[/green]" if row.matches else "[red]✗[/red]"
        oracle = "—" if row.oracle is None else str(row.oracle)
        table.add_row(
            row.label, str(row.claimed), str(row.measured), oracle, mark, row.note
        )
    console.print(table)


def render(report: ReportDocument, console: Console) -> None:
    s = report.summary
    title = report.example or report.source or report.command
    console.print(
        f"[bold cyan]{title}[/bold cyan]: кольцо {s.ring}, страт {s.strata}, "
        f"глюингов {s.gluings}, покрытий {s.covers}"
    )
    for line in s.hasse[:HASSE_PREVIEW_LINES]:
        console.print(f"  {line}")
    if len(s.hasse) > HASSE_PREVIEW_LINES:
        console.print(f"  … ещё {len(s.hasse) - HASSE_PREVIEW_LINES} строк")

    if report.findings:
        console.print("[bold red]✗ Найдены нарушения:[/bold red]")
        for f in report.findings:
            console.print(f"  • {f.kind}: {f.message}")
    else:
        console.print("[bold green]✓ Диаграмма корректна[/bold green]")

    for i, rows in enumerate(report.inputs):
        console.print(_homology_table(f"Гомологии до склейки ({i + 1})", rows))
    if report.homology:
        console.print(_homology_table("Гомологии колимита", report.homology))
    if report.euler is not None:
        mark = "✓" if report.euler.consistent else "✗"
        console.print(
            f"{mark} Эйлерова характеристика: по цепям {report.euler.chains}, "
            f"по гомологиям {report.euler.betti}"
        )
    if report.uct_consistent is not None:
        if report.uct_consistent:
            console.print("✓ Формула универсальных коэффициентов согласована")
        else:
            bad = [str(row.degree) for row in report.uct if not row.consistent]
            console.print(f"[yellow]⚠ Расхождение с формулой УК в степенях {', '.join(bad)}[/]")
    if report.code is not None:
        _render_code(report.code, console)
    if report.claims:
        _render_claims(report.claims, console)
    for note in report.notes:
        console.print(f"[yellow]Примечание:[/yellow] {note}")
