from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field

import numpy as np

from stratacode.algebra import RingTag, SparseMatrix, gf2, hstack, smith_normal_form
from stratacode.diagram import (
    Finding,
    FindingKind,
    LocalComplex,
    Pair,
    StratifiedDiagram,
    ValidationReport,
    resolve_gluings,
    validate,
)
from stratacode.errors import (
    ColimitError,
    PreconditionFailed,
    TorsionChainModule,
    UnknownStratum,
)
from stratacode.logging import bound_operation, get_logger, log_duration
from stratacode.settings import get_settings

logger = get_logger(__name__)


@dataclass(frozen=True)
class ScaffoldLayout:
    degree: int
    total_rank: int
    offsets: Mapping[str, int]
    sizes: Mapping[str, int]

    @classmethod
    def of(cls, d: StratifiedDiagram, k: int) -> ScaffoldLayout:
        offsets: dict[str, int] = {}
        sizes: dict[str, int] = {}
        cursor = 0
        for sid in d.ids:
            size = d.strata[sid].rank(k)
            offsets[sid] = cursor
            sizes[sid] = size
            cursor += size
        return cls(k, cursor, offsets, sizes)

    def block(self, sid: str) -> range:
        start = self.offsets[sid]
        return range(start, start + self.sizes[sid])

    def owner(self, index: int) -> tuple[str, int]:
        for sid, start in self.offsets.items():
            if start <= index < start + self.sizes[sid]:
                return sid, index - start
        raise IndexError(index)


@dataclass(frozen=True)
class RelationModule:
    matrix: SparseMatrix
    generators: tuple[tuple[Pair, int], ...]


@dataclass(frozen=True)
class _Presentation:
    """Представление C̃_k / N_k: проекция на свободную часть и строки кручения."""

    layout: ScaffoldLayout
    relations: RelationModule
    reduce: SparseMatrix
    section: SparseMatrix
    section_indices: tuple[int, ...]
    torsion_rows: SparseMatrix
    torsion_factors: tuple[int, ...]


@dataclass(frozen=True)
class DegreeData:
    layout: ScaffoldLayout
    relations: SparseMatrix
    quotient_rank: int
    section_indices: tuple[int, ...]
    reduce: SparseMatrix
    section: SparseMatrix


@dataclass(frozen=True)
class ColimitComplex:
    ring: RingTag
    diagram: StratifiedDiagram
    degrees: Mapping[int, DegreeData]
    boundaries: Mapping[int, SparseMatrix] = field(default_factory=dict)

    @property
    def top_degree(self) -> int:
        return max(self.degrees, default=-1)

    def quotient_rank(self, k: int) -> int:
        data = self.degrees.get(k)
        return data.quotient_rank if data is not None else 0

    def boundary(self, k: int) -> SparseMatrix:
        stored = self.boundaries.get(k)
        if stored is not None:
            return stored
        return SparseMatrix.zeros(self.ring, self.quotient_rank(k - 1), self.quotient_rank(k))

    def as_local_complex(self) -> LocalComplex:
        return LocalComplex(
            module_ranks={k: data.quotient_rank for k, data in self.degrees.items()},
            local_boundaries=dict(self.boundaries),
        )

    def structure_map(self, sid: str, k: int) -> SparseMatrix:
        return structure_map(self, sid, k)


def relation_generators(d: StratifiedDiagram, k: int) -> SparseMatrix:
    return _relation_module(d, k, ScaffoldLayout.of(d, k)).matrix


def _relation_module(d: StratifiedDiagram, k: int, layout: ScaffoldLayout) -> RelationModule:
    entries: list[tuple[int, int, int]] = []
    generators: list[tuple[Pair, int]] = []
    for pair in sorted(d.gluings):
        source, target = pair
        rank_source = layout.sizes[source]
        if not rank_source:
            continue
        phi = d.map_at(source, target, k)
        phi_columns: dict[int, list[tuple[int, int]]] = {}
        for r, c, v in phi.entries:
            phi_columns.setdefault(c, []).append((r, v))
        src_offset, tgt_offset = layout.offsets[source], layout.offsets[target]
        for x in range(rank_source):
            col = len(generators)
            entries.append((src_offset + x, col, 1))
            for r, v in phi_columns.get(x, ()):
                entries.append((tgt_offset + r, col, -v))
            generators.append((pair, x))
    matrix = SparseMatrix.from_entries(d.ring, layout.total_rank, len(generators), entries)
    return RelationModule(matrix, tuple(generators))


def scaffold_boundary(d: StratifiedDiagram, k: int) -> SparseMatrix:
    lower, upper = ScaffoldLayout.of(d, k - 1), ScaffoldLayout.of(d, k)
    entries = []
    for sid in d.ids:
        for r, c, v in d.boundary(sid, k).entries:
            entries.append((lower.offsets[sid] + r, upper.offsets[sid] + c, v))
    return SparseMatrix.from_entries(d.ring, lower.total_rank, upper.total_rank, entries)


def _present_gf2(layout: ScaffoldLayout, module: RelationModule) -> _Presentation:
    n = layout.total_rank
    generators = module.matrix.transpose().to_dense()[:, ::-1]
    reduced, pivots_rev = gf2.rref_dense(generators)
    reduced = reduced[:, ::-1]
    pivots = [n - 1 - p for p in pivots_rev]
    pivot_set = set(pivots)
    free = tuple(j for j in range(n) if j not in pivot_set)
    index = {j: i for i, j in enumerate(free)}
    entries = [(index[j], j, 1) for j in free]
    for row, p in enumerate(pivots):
        for j in np.flatnonzero(reduced[row]):
            j = int(j)
            if j != p:
                entries.append((index[j], p, 1))
    reduce = SparseMatrix.from_entries(RingTag.GF2, len(free), n, entries)
    section = SparseMatrix.from_entries(
        RingTag.GF2, n, len(free), ((j, i, 1) for i, j in enumerate(free))
    )
    return _Presentation(
        layout=layout,
        relations=module,
        reduce=reduce,
        section=section,
        section_indices=free,
        torsion_rows=SparseMatrix.zeros(RingTag.GF2, 0, n),
        torsion_factors=(),
    )


def _present_int(layout: ScaffoldLayout, module: RelationModule) -> _Presentation:
    n = layout.total_rank
    snf = smith_normal_form(module.matrix)
    r = snf.rank
    torsion = [i for i, d in enumerate(snf.invariant_factors) if d > 1]
    return _Presentation(
        layout=layout,
        relations=module,
        reduce=snf.u.select_rows(range(r, n)),
        section=snf.u_inv.select_columns(range(r, n)),
        section_indices=(),
        torsion_rows=snf.u.select_rows(torsion),
        torsion_factors=tuple(snf.invariant_factors[i] for i in torsion),
    )


def _present(d: StratifiedDiagram, k: int) -> _Presentation:
    layout = ScaffoldLayout.of(d, k)
    module = _relation_module(d, k, layout)
    if d.ring is RingTag.GF2:
        return _present_gf2(layout, module)
    return _present_int(layout, module)


def _presentations(d: StratifiedDiagram) -> dict[int, _Presentation]:
    degrees = list(range(0, d.top_degree + 1))
    settings = get_settings()
    if settings.parallel and len(degrees) > 1:
        with settings.executor() as pool:
            return dict(zip(degrees, pool.map(lambda k: _present(d, k), degrees), strict=True))
    return {k: _present(d, k) for k in degrees}


def _torsion_classes(p: _Presentation, images: SparseMatrix) -> list[int]:
    """Столбцы images с ненулевым классом в торсионной части C̃/N."""
    hit: set[int] = set()
    projected = p.torsion_rows @ images
    for r, c, v in projected.entries:
        if v % p.torsion_factors[r] != 0:
            hit.add(c)
    return sorted(hit)


def _compatibility_findings(
    d: StratifiedDiagram, presentations: Mapping[int, _Presentation]
) -> list[Finding]:
    findings: list[Finding] = []
    for k in sorted(presentations):
        if k < 1 or k - 1 not in presentations:
            continue
        lower, upper = presentations[k - 1], presentations[k]
        boundary = scaffold_boundary(d, k)
        if boundary.is_zero():
            continue
        images = boundary @ upper.relations.matrix
        outside = {c for _, c, _ in (lower.reduce @ images).entries}
        outside.update(_torsion_classes(lower, images))
        for col in sorted(outside):
            pair, x = upper.relations.generators[col]
            findings.append(
                Finding(
                    FindingKind.NOT_SUBCOMPLEX,
                    f"Граница образующей ({pair[0]}, {pair[1]})[{x}] степени {k} "
                    f"не лежит в N_{k - 1}",
                    pair=pair,
                    degree=k,
                )
            )
        for col in _torsion_classes(lower, boundary):
            sid, x = upper.layout.owner(col)
            findings.append(
                Finding(
                    FindingKind.TORSION_TARGET,
                    f"Граница базисного элемента {sid}[{x}] степени {k} имеет ненулевой "
                    f"класс кручения в C̃_{k - 1}/N_{k - 1}",
                    stratum=sid,
                    degree=k,
                )
            )
    return findings


def boundary_compatibility_check(d: StratifiedDiagram) -> ValidationReport:
    with log_duration(logger, "boundary_compatibility_checked", strata=len(d.strata)) as bag:
        findings = _compatibility_findings(d, _presentations(d))
        bag["findings"] = len(findings)
    return ValidationReport(findings)


def _verify(c: ColimitComplex) -> None:
    d = c.diagram
    for k, data in c.degrees.items():
        legs = {sid: structure_map(c, sid, k) for sid in d.ids}
        if not (data.reduce @ data.relations).is_zero():
            raise ColimitError(f"Проекция не обнуляет соотношения в степени {k}")
        if k - 1 in c.degrees:
            lower = c.degrees[k - 1]
            lhs = c.boundary(k) @ data.reduce
            rhs = lower.reduce @ scaffold_boundary(d, k)
            if lhs != rhs:
                raise ColimitError(f"Индуцированная граница не согласована в степени {k}")
            if not (c.boundary(k - 1) @ c.boundary(k)).is_zero():
                raise ColimitError(f"∂_{k - 1}∂_{k} ≠ 0 в колимите")
        for source, target in d.gluings:
            if legs[target] @ d.map_at(source, target, k) != legs[source]:
                raise ColimitError(f"Нарушено свойство коконуса для ({source}, {target}), k={k}")


def build(d: StratifiedDiagram, *, force: bool = False) -> ColimitComplex:
    with bound_operation(), log_duration(
        logger, "colimit_build", strata=len(d.strata), ring=d.ring.value, force=force
    ) as bag:
        if not force:
            report = validate(d)
            if not report.ok:
                raise PreconditionFailed(
                    "Диаграмма не прошла проверку: "
                    + "; ".join(f.message for f in report.findings[:5])
                )
            d = resolve_gluings(d)

        presentations = _presentations(d)
        findings = _compatibility_findings(d, presentations)
        if findings:
            raise PreconditionFailed(
                "Граница не согласована с соотношениями: "
                + "; ".join(f.message for f in findings[:5])
            )
        for k, p in presentations.items():
            if p.torsion_factors:
                raise TorsionChainModule(k, list(p.torsion_factors))

        degrees = {
            k: DegreeData(
                layout=p.layout,
                relations=p.relations.matrix,
                quotient_rank=p.reduce.rows,
                section_indices=p.section_indices,
                reduce=p.reduce,
                section=p.section,
            )
            for k, p in presentations.items()
        }
        boundaries: dict[int, SparseMatrix] = {}
        for k in degrees:
            if k - 1 not in degrees:
                continue
            induced = degrees[k - 1].reduce @ scaffold_boundary(d, k) @ degrees[k].section
            boundaries[k] = induced
        complex_ = ColimitComplex(d.ring, d, degrees, boundaries)
        _verify(complex_)
        bag["quotient_ranks"] = [data.quotient_rank for data in degrees.values()]
    return complex_


def structure_map(c: ColimitComplex, sid: str, k: int) -> SparseMatrix:
    if sid not in c.diagram.strata:
        raise UnknownStratum(f"Страта {sid!r} отсутствует в диаграмме")
    data = c.degrees.get(k)
    if data is None:
        return SparseMatrix.zeros(c.ring, 0, c.diagram.strata[sid].rank(k))
    return data.reduce.select_columns(data.layout.block(sid))


def scaffold_map(c: ColimitComplex, blocks: Mapping[str, SparseMatrix], k: int) -> SparseMatrix:
    """Склеить по блокам каркаса отображения страт в общий модуль (ψ̂_k)."""
    data = c.degrees[k]
    rows = {m.rows for m in blocks.values()}
    if len(rows) > 1:
        raise ColimitError(f"Блоки разной высоты в степени {k}: {sorted(rows)}")
    height = rows.pop() if rows else 0
    ordered = [
        blocks.get(sid, SparseMatrix.zeros(c.ring, height, data.layout.sizes[sid]))
        for sid in c.diagram.ids
    ]
    return hstack(c.ring, height, ordered)
