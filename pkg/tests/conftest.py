"""Общие фикстуры для тестов."""

from __future__ import annotations

from collections.abc import Iterator

import pytest

from stratacode.algebra import RingTag, SparseMatrix
from stratacode.catalog import CatalogEntry, dangling_square, rp2, segment, toric
from stratacode.colimit import ColimitComplex, build
from stratacode.diagram import GluingMap, StratifiedDiagram, Stratum
from stratacode.logging import setup_logging
from stratacode.settings import get_settings


@pytest.fixture(autouse=True)
def _fresh_settings() -> Iterator[None]:
    get_settings.cache_clear()
    setup_logging("WARNING", force=True)
    yield
    get_settings.cache_clear()


@pytest.fixture
def rp2_entry() -> CatalogEntry:
    return rp2()


@pytest.fixture
def rp2_complex(rp2_entry: CatalogEntry) -> ColimitComplex:
    """Колимит RP² над Z: ∂_2 = [2]."""
    return build(rp2_entry.diagram)


@pytest.fixture
def segment_complex() -> ColimitComplex:
    return build(segment().diagram)


@pytest.fixture
def dangling_complex() -> ColimitComplex:
    """Квадрат с висячим ребром над F2: C = (1, 3, 1)."""
    return build(dangling_square().diagram)


@pytest.fixture
def toric_complex() -> ColimitComplex:
    """Торический код 3×3 над F2."""
    return build(toric(3).diagram)


@pytest.fixture
def crown_diagram() -> StratifiedDiagram:
    """Две точки под двумя точками, одно отображение −1: фактор C_0 равен Z/2."""
    ring = RingTag.INT
    one = SparseMatrix.from_dense(ring, [[1]])
    strata = [Stratum(module_ranks={0: 1}, id=sid, dim=0) for sid in ("a1", "a2", "b1", "b2")]
    gluings = [
        GluingMap("a1", "b1", {0: one}),
        GluingMap("a1", "b2", {0: one}),
        GluingMap("a2", "b1", {0: one}),
        GluingMap("a2", "b2", {0: -one}),
    ]
    return StratifiedDiagram.from_parts(ring, strata, gluings)
