"""Универсальное свойство колимита: коконусы и опосредующее цепное отображение."""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field

from stratacode.algebra import SparseMatrix
from stratacode.colimit.core import ColimitComplex, scaffold_map, structure_map
from stratacode.diagram import LocalComplex
from stratacode.errors import ColimitError, IncompatibleCocone, NotAChainMap
from stratacode.logging import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class Cocone:
    target: LocalComplex
    legs: Mapping[str, Mapping[int, SparseMatrix]] = field(default_factory=dict)

    def leg(self, c: ColimitComplex, sid: str, k: int) -> SparseMatrix:
        stored = self.legs.get(sid, {}).get(k)
        if stored is not None:
            return stored
        return SparseMatrix.zeros(c.ring, self.target.rank(k), c.diagram.strata[sid].rank(k))


@dataclass(frozen=True)
class ChainMap:
    maps: Mapping[int, SparseMatrix]

    def at(self, k: int) -> SparseMatrix:
        return self.maps[k]


def structure_cocone(c: ColimitComplex) -> Cocone:
    legs = {
        sid: {k: structure_map(c, sid, k) for k in c.degrees} for sid in c.diagram.ids
    }
    return Cocone(c.as_local_complex(), legs)


def _check_legs(c: ColimitComplex, cocone: Cocone) -> None:
    d, target = c.diagram, cocone.target
    for sid in d.ids:
        stratum = d.strata[sid]
        for k in sorted(set(stratum.degrees) | set(target.degrees)):
            leg = cocone.leg(c, sid, k)
            expected = (target.rank(k), stratum.rank(k))
            if leg.shape != expected:
                raise NotAChainMap(
                    f"ψ_{sid} в степени {k} имеет форму {leg.shape}, ожидалась {expected}"
                )
            if k < 1:
                continue
            lhs = target.boundary(k, c.ring) @ leg
            rhs = cocone.leg(c, sid, k - 1) @ stratum.boundary(k, c.ring)
            if lhs != rhs:
                raise NotAChainMap(f"ψ_{sid} не коммутирует с границей в степени {k}")


def _check_compatibility(c: ColimitComplex, cocone: Cocone) -> None:
    d = c.diagram
    for source, target in d.gluings:
        for k in d.strata[source].degrees:
            composite = cocone.leg(c, target, k) @ d.map_at(source, target, k)
            if composite != cocone.leg(c, source, k):
                raise IncompatibleCocone(
                    f"ψ_{target}·φ ≠ ψ_{source} для пары ({source}, {target}) в степени {k}"
                )


def mediating_map(c: ColimitComplex, cocone: Cocone) -> ChainMap:
    _check_legs(c, cocone)
    _check_compatibility(c, cocone)
    d, target = c.diagram, cocone.target
    maps: dict[int, SparseMatrix] = {}
    for k, data in c.degrees.items():
        blocks = {sid: cocone.leg(c, sid, k) for sid in d.ids}
        maps[k] = scaffold_map(c, blocks, k) @ data.section

    for k, psi in maps.items():
        for sid in d.ids:
            if psi @ structure_map(c, sid, k) != cocone.leg(c, sid, k):
                raise ColimitError(f"Ψ_{k}·q_{sid} ≠ ψ_{sid}")
        if k - 1 in maps:
            lhs = target.boundary(k, c.ring) @ psi
            rhs = maps[k - 1] @ c.boundary(k)
            if lhs != rhs:
                raise ColimitError(f"Ψ не коммутирует с границей в степени {k}")
    logger.debug("mediating_map_built", degrees=sorted(maps))
    return ChainMap(maps)
