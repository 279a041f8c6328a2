from __future__ import annotations

import dataclasses
from collections.abc import Mapping

from stratacode.constants import STRATUM_PREFIXES
from stratacode.diagram import GluingMap, StratifiedDiagram, resolve_gluings
from stratacode.errors import EmbeddingNotFull, RingMismatchError, UnknownStratum
from stratacode.logging import get_logger, log_duration

logger = get_logger(__name__)


def _check_shared(
    d1: StratifiedDiagram, d2: StratifiedDiagram, shared: Mapping[str, str]
) -> None:
    if len(set(shared.values())) != len(shared):
        raise EmbeddingNotFull("Отображение общих страт не инъективно")
    for left, right in shared.items():
        if left not in d1.strata:
            raise UnknownStratum(f"Страта {left!r} отсутствует в левой диаграмме")
        if right not in d2.strata:
            raise UnknownStratum(f"Страта {right!r} отсутствует в правой диаграмме")
        a, b = d1.strata[left], d2.strata[right]
        if a.module_ranks != b.module_ranks or a.local_boundaries != b.local_boundaries:
            raise EmbeddingNotFull(f"Локальные комплексы {left!r} и {right!r} различаются")
    for x, y in ((x, y) for x in shared for y in shared if x != y):
        related = d1.poset.leq(x, y)
        if related != d2.poset.leq(shared[x], shared[y]):
            raise EmbeddingNotFull(f"Отношение ({x}, {y}) различается в диаграммах")
        if not related:
            continue
        for k in d1.strata[x].degrees:
            if d1.map_at(x, y, k) != d2.map_at(shared[x], shared[y], k):
                raise EmbeddingNotFull(f"Глюинг ({x}, {y}) различается в степени {k}")


def pushout(
    d1: StratifiedDiagram,
    d2: StratifiedDiagram,
    shared: Mapping[str, str],
    prefixes: tuple[str, str] = STRATUM_PREFIXES,
) -> StratifiedDiagram:
    """Склейка двух диаграмм вдоль общей полной поддиаграммы (хирургия кодов)."""
    if d1.ring is not d2.ring:
        raise RingMismatchError(f"Кольца диаграмм различаются: {d1.ring.label} и {d2.ring.label}")
    d1, d2 = resolve_gluings(d1), resolve_gluings(d2)
    _check_shared(d1, d2, shared)

    left_prefix, right_prefix = prefixes
    inverse = {right: left for left, right in shared.items()}
    left_names = {sid: sid if sid in shared else left_prefix + sid for sid in d1.ids}
    right_names = {sid: inverse.get(sid, right_prefix + sid) for sid in d2.ids}
    clash = set(left_names.values()) & {
        name for sid, name in right_names.items() if sid not in inverse
    }
    if clash:
        raise EmbeddingNotFull(f"Конфликт идентификаторов после переименования: {sorted(clash)}")

    with log_duration(
        logger, "pushout_built", left=len(d1.strata), right=len(d2.strata), shared=len(shared)
    ):
        strata = [dataclasses.replace(s, id=left_names[s.id]) for s in d1.strata.values()]
        strata += [
            dataclasses.replace(s, id=right_names[s.id])
            for s in d2.strata.values()
            if s.id not in inverse
        ]
        gluings: dict[tuple[str, str], GluingMap] = {}
        for names, d in ((left_names, d1), (right_names, d2)):
            for g in d.gluings.values():
                pair = (names[g.source], names[g.target])
                gluings.setdefault(pair, GluingMap(pair[0], pair[1], g.maps))
        merged = StratifiedDiagram.from_parts(d1.ring, strata, gluings.values())
        return resolve_gluings(merged)
