"""Модель стратифицированной диаграммы: посет страт, локальные комплексы, глюинги."""

from __future__ import annotations

from collections import deque
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from enum import StrEnum

from stratacode.algebra import RingTag, SparseMatrix
from stratacode.errors import (
    CycleDetected,
    MalformedDiagram,
    MissingCover,
    RingMismatchError,
    TransitivityViolation,
    UnknownStratum,
)
from stratacode.logging import get_logger, log_duration
from stratacode.settings import get_settings

logger = get_logger(__name__)

Pair = tuple[str, str]


@dataclass(frozen=True)
class Poset:
    elements: tuple[str, ...]
    relation: frozenset[Pair]

    def leq(self, a: str, b: str) -> bool:
        return (a, b) in self.relation

    def strict_pairs(self) -> list[Pair]:
        return sorted((a, b) for a, b in self.relation if a != b)

    def between(self, a: str, b: str) -> list[str]:
        return [
            c for c in self.elements if c not in (a, b) and self.leq(a, c) and self.leq(c, b)
        ]

    def covers(self) -> list[Pair]:
        return [(a, b) for a, b in self.strict_pairs() if not self.between(a, b)]

    def below(self, x: str) -> list[str]:
        return [a for a in self.elements if a != x and self.leq(a, x)]

    def above(self, x: str) -> list[str]:
        return [b for b in self.elements if b != x and self.leq(x, b)]


def close_poset(elements: Iterable[str], pairs: Iterable[Pair]) -> Poset:
    ordered = tuple(sorted(set(elements)))
    known = set(ordered)
    successors: dict[str, set[str]] = {x: set() for x in ordered}
    for a, b in pairs:
        for x in (a, b):
            if x not in known:
                raise UnknownStratum(f"Неизвестная страта в отношении порядка: {x!r}")
        if a != b:
            successors[a].add(b)

    relation: set[Pair] = set()
    for start in ordered:
        seen = {start}
        queue = deque([start])
        while queue:
            current = queue.popleft()
            for nxt in sorted(successors[current]):
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
        relation.update((start, reached) for reached in seen)

    for a, b in relation:
        if a != b and (b, a) in relation:
            first, second = sorted((a, b))
            raise CycleDetected(f"Цикл в отношении порядка между {first!r} и {second!r}")
    return Poset(ordered, frozenset(relation))


@dataclass(frozen=True)
class LocalComplex:
    """Цепной комплекс конечной длины: ранги модулей и граничные матрицы по степеням."""

    module_ranks: Mapping[int, int]
    local_boundaries: Mapping[int, SparseMatrix] = field(default_factory=dict)

    def __post_init__(self) -> None:
        ranks = {int(k): int(r) for k, r in self.module_ranks.items() if r}
        for k, r in ranks.items():
            if k < 0 or r < 0:
                raise MalformedDiagram(f"Недопустимая степень или ранг: C_{k} ранга {r}")
        boundaries = {
            int(k): m for k, m in sorted(self.local_boundaries.items()) if not m.is_zero()
        }
        for k, m in boundaries.items():
            if k < 1:
                raise MalformedDiagram(f"Граница ∂_{k} должна иметь степень ≥ 1")
            expected = (ranks.get(k - 1, 0), ranks.get(k, 0))
            if m.shape != expected:
                raise MalformedDiagram(
                    f"Граница ∂_{k} имеет форму {m.shape}, ожидалась {expected}"
                )
        object.__setattr__(self, "module_ranks", dict(sorted(ranks.items())))
        object.__setattr__(self, "local_boundaries", boundaries)

    def rank(self, k: int) -> int:
        return self.module_ranks.get(k, 0)

    @property
    def degrees(self) -> list[int]:
        return list(self.module_ranks)

    def boundary(self, k: int, ring: RingTag) -> SparseMatrix:
        stored = self.local_boundaries.get(k)
        if stored is not None:
            return stored
        return SparseMatrix.zeros(ring, self.rank(k - 1), self.rank(k))


@dataclass(frozen=True)
class Stratum(LocalComplex):
    id: str = ""
    dim: int | None = None

    def __post_init__(self) -> None:
        if not self.id:
            raise MalformedDiagram("Идентификатор страты не может быть пустым")
        super().__post_init__()


@dataclass(frozen=True)
class GluingMap:
    source: str
    target: str
    maps: Mapping[int, SparseMatrix] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.source == self.target:
            raise MalformedDiagram(f"Глюинг {self.source!r} в себя задаётся тождественно")
        cleaned = {int(k): m for k, m in sorted(self.maps.items()) if not m.is_zero()}
        object.__setattr__(self, "maps", cleaned)

    @property
    def pair(self) -> Pair:
        return self.source, self.target


@dataclass(frozen=True)
class StratifiedDiagram:
    ring: RingTag
    poset: Poset
    strata: Mapping[str, Stratum]
    gluings: Mapping[Pair, GluingMap]
    resolved: bool = False

    def __post_init__(self) -> None:
        for stratum in self.strata.values():
            for m in stratum.local_boundaries.values():
                if m.ring is not self.ring:
                    raise RingMismatchError(
                        f"Граница страты {stratum.id!r} над {m.ring.label}, "
                        f"диаграмма над {self.ring.label}"
                    )
        for gluing in self.gluings.values():
            for m in gluing.maps.values():
                if m.ring is not self.ring:
                    raise RingMismatchError(
                        f"Глюинг {gluing.pair} над {m.ring.label}, диаграмма над {self.ring.label}"
                    )
        object.__setattr__(self, "strata", dict(sorted(self.strata.items())))
        object.__setattr__(self, "gluings", dict(sorted(self.gluings.items())))

    @classmethod
    def from_parts(
        cls,
        ring: RingTag,
        strata: Iterable[Stratum],
        gluings: Iterable[GluingMap],
        *,
        relations: Iterable[Pair] = (),
    ) -> StratifiedDiagram:
        by_id: dict[str, Stratum] = {}
        for stratum in strata:
            if stratum.id in by_id:
                raise MalformedDiagram(f"Повторяющаяся страта {stratum.id!r}")
            by_id[stratum.id] = stratum
        by_pair: dict[Pair, GluingMap] = {}
        for gluing in gluings:
            if gluing.pair in by_pair:
                raise MalformedDiagram(f"Глюинг {gluing.pair} задан дважды")
            by_pair[gluing.pair] = gluing
        poset = close_poset(by_id, [*by_pair, *relations])
        return cls(ring, poset, by_id, by_pair)

    @property
    def ids(self) -> list[str]:
        return list(self.strata)

    @property
    def degrees(self) -> list[int]:
        return sorted({k for s in self.strata.values() for k in s.degrees})

    @property
    def top_degree(self) -> int:
        degrees = self.degrees
        return degrees[-1] if degrees else -1

    def stratum(self, sid: str) -> Stratum:
        try:
            return self.strata[sid]
        except KeyError:
            raise UnknownStratum(f"Страта {sid!r} отсутствует в диаграмме") from None

    def boundary(self, sid: str, k: int) -> SparseMatrix:
        return self.stratum(sid).boundary(k, self.ring)

    def map_at(self, source: str, target: str, k: int) -> SparseMatrix:
        src = self.stratum(source)
        if source == target:
            return SparseMatrix.identity(self.ring, src.rank(k))
        tgt = self.stratum(target)
        gluing = self.gluings.get((source, target))
        if gluing is None:
            raise MissingCover((source, target))
        stored = gluing.maps.get(k)
        if stored is not None:
            return stored
        return SparseMatrix.zeros(self.ring, tgt.rank(k), src.rank(k))

    def with_ring(self, ring: RingTag) -> StratifiedDiagram:
        if ring is self.ring:
            return self
        strata = [
            Stratum(
                module_ranks=s.module_ranks,
                local_boundaries={k: m.to_ring(ring) for k, m in s.local_boundaries.items()},
                id=s.id,
                dim=s.dim,
            )
            for s in self.strata.values()
        ]
        gluings = {
            pair: GluingMap(g.source, g.target, {k: m.to_ring(ring) for k, m in g.maps.items()})
            for pair, g in self.gluings.items()
        }
        return StratifiedDiagram(
            ring, self.poset, {s.id: s for s in strata}, gluings, self.resolved
        )


class FindingKind(StrEnum):
    POSET = "poset"
    LOCAL_COMPLEX = "local_complex"
    SHAPE = "shape"
    CHAIN_MAP = "chain_map"
    MISSING_COVER = "missing_cover"
    TRANSITIVITY = "transitivity"
    NOT_SUBCOMPLEX = "not_subcomplex"
    TORSION_TARGET = "torsion_target"


@dataclass(frozen=True)
class Finding:
    kind: FindingKind
    message: str
    stratum: str | None = None
    pair: Pair | None = None
    degree: int | None = None
    via: str | None = None


@dataclass
class ValidationReport:
    findings: list[Finding] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.findings

    def kinds(self) -> set[FindingKind]:
        return {f.kind for f in self.findings}


def _composite(
    d: StratifiedDiagram, first: Mapping[int, SparseMatrix], second: Mapping[int, SparseMatrix],
    source: str, via: str, target: str,
) -> dict[int, SparseMatrix]:
    out: dict[int, SparseMatrix] = {}
    src, mid, tgt = d.stratum(source), d.stratum(via), d.stratum(target)
    for k in src.degrees:
        lower = first.get(k, SparseMatrix.zeros(d.ring, mid.rank(k), src.rank(k)))
        upper = second.get(k, SparseMatrix.zeros(d.ring, tgt.rank(k), mid.rank(k)))
        product = upper @ lower
        if not product.is_zero():
            out[k] = product
    return out


def _disagreement(
    d: StratifiedDiagram, source: str, left: Mapping[int, SparseMatrix],
    right: Mapping[int, SparseMatrix],
) -> int | None:
    for k in d.stratum(source).degrees:
        if left.get(k) != right.get(k):
            return k
    return None


def _resolve(d: StratifiedDiagram, findings: list[Finding] | None) -> dict[Pair, GluingMap]:
    poset = d.poset
    for pair in poset.covers():
        if pair not in d.gluings:
            if findings is None:
                raise MissingCover(pair)
            findings.append(
                Finding(
                    FindingKind.MISSING_COVER,
                    f"Покрывающая пара ({pair[0]}, {pair[1]}) без глюинга",
                    pair=pair,
                )
            )

    resolved: dict[Pair, dict[int, SparseMatrix]] = {}
    order = sorted(poset.strict_pairs(), key=lambda p: (len(poset.between(*p)), p))
    for source, target in order:
        pair = (source, target)
        candidates: list[tuple[str, dict[int, SparseMatrix]]] = []
        for via in poset.between(source, target):
            first, second = resolved.get((source, via)), resolved.get((via, target))
            if first is None or second is None:
                continue
            candidates.append((via, _composite(d, first, second, source, via, target)))
        explicit = d.gluings.get(pair)
        if explicit is not None:
            reference: dict[int, SparseMatrix] = dict(explicit.maps)
        elif candidates:
            reference = candidates[0][1]
        else:
            continue
        for via, maps in candidates:
            k = _disagreement(d, source, reference, maps)
            if k is None:
                continue
            if findings is None:
                raise TransitivityViolation(pair, k, via)
            findings.append(
                Finding(
                    FindingKind.TRANSITIVITY,
                    str(TransitivityViolation(pair, k, via)),
                    pair=pair,
                    degree=k,
                    via=via,
                )
            )
        resolved[pair] = reference
    return {pair: GluingMap(pair[0], pair[1], maps) for pair, maps in resolved.items()}


def resolve_gluings(d: StratifiedDiagram) -> StratifiedDiagram:
    if d.resolved:
        return d
    with log_duration(logger, "gluings_resolved", strata=len(d.strata)) as bag:
        gluings = _resolve(d, None)
        bag["pairs"] = len(gluings)
    return StratifiedDiagram(d.ring, d.poset, d.strata, gluings, resolved=True)


def _poset_findings(poset: Poset) -> list[Finding]:
    findings: list[Finding] = []
    rel = poset.relation
    for x in poset.elements:
        if (x, x) not in rel:
            findings.append(Finding(FindingKind.POSET, f"Нет рефлексивности для {x}", stratum=x))
    for a, b in sorted(rel):
        if a != b and (b, a) in rel:
            findings.append(
                Finding(FindingKind.POSET, f"Нарушена антисимметрия ({a}, {b})", pair=(a, b))
            )
        for c in poset.elements:
            if (b, c) in rel and (a, c) not in rel:
                findings.append(
                    Finding(
                        FindingKind.POSET, f"Отношение не замкнуто: ({a}, {b}), ({b}, {c})",
                        pair=(a, c),
                    )
                )
    return findings


def _local_findings(d: StratifiedDiagram) -> list[Finding]:
    findings: list[Finding] = []
    for sid, stratum in d.strata.items():
        for k in sorted(stratum.local_boundaries):
            lower = stratum.boundary(k - 1, d.ring)
            if not (lower @ stratum.boundary(k, d.ring)).is_zero():
                findings.append(
                    Finding(
                        FindingKind.LOCAL_COMPLEX,
                        f"В страте {sid} нарушено ∂_{k - 1}∂_{k} = 0",
                        stratum=sid,
                        degree=k,
                    )
                )
    return findings


def _gluing_findings(d: StratifiedDiagram, gluing: GluingMap) -> list[Finding]:
    findings: list[Finding] = []
    pair = gluing.pair
    if gluing.source not in d.strata or gluing.target not in d.strata:
        return [Finding(FindingKind.SHAPE, f"Глюинг {pair} ссылается на неизвестную страту")]
    src, tgt = d.strata[gluing.source], d.strata[gluing.target]
    shapes_ok = True
    for k, m in gluing.maps.items():
        expected = (tgt.rank(k), src.rank(k))
        if m.shape != expected:
            shapes_ok = False
            findings.append(
                Finding(
                    FindingKind.SHAPE,
                    f"Глюинг {pair} в степени {k} имеет форму {m.shape}, ожидалась {expected}",
                    pair=pair,
                    degree=k,
                )
            )
    if not shapes_ok:
        return findings
    degrees = sorted(set(src.degrees) | set(tgt.degrees))
    for k in degrees:
        if k < 1:
            continue
        phi_k = d.map_at(gluing.source, gluing.target, k)
        phi_prev = d.map_at(gluing.source, gluing.target, k - 1)
        if tgt.boundary(k, d.ring) @ phi_k != phi_prev @ src.boundary(k, d.ring):
            findings.append(
                Finding(
                    FindingKind.CHAIN_MAP,
                    f"Глюинг {pair} не коммутирует с границей в степени {k}",
                    pair=pair,
                    degree=k,
                )
            )
    return findings


def validate(d: StratifiedDiagram) -> ValidationReport:
    settings = get_settings()
    report = ValidationReport()
    with log_duration(logger, "diagram_validated", strata=len(d.strata)) as bag:
        report.findings.extend(_poset_findings(d.poset))
        report.findings.extend(_local_findings(d))
        gluings = list(d.gluings.values())
        if settings.parallel and len(gluings) > 1:
            with settings.executor() as pool:
                per_pair = list(pool.map(lambda g: _gluing_findings(d, g), gluings))
        else:
            per_pair = [_gluing_findings(d, g) for g in gluings]
        for chunk in per_pair:
            report.findings.extend(chunk)
        if not report.kinds() & {FindingKind.POSET, FindingKind.SHAPE}:
            _resolve(d, report.findings)
        bag["findings"] = len(report.findings)
    if not report.ok:
        logger.info("diagram_invalid", kinds=sorted(report.kinds()))
    return report
