"""Тесты модели диаграммы: посет, локальные комплексы, разрешение глюингов, проверка."""

from __future__ import annotations

import pytest

from stratacode.algebra import RingTag, SparseMatrix
from stratacode.catalog import nontransitive_counterexample, segment
from stratacode.diagram import (
    FindingKind,
    GluingMap,
    LocalComplex,
    StratifiedDiagram,
    Stratum,
    close_poset,
    resolve_gluings,
    validate,
)
from stratacode.errors import (
    CycleDetected,
    MalformedDiagram,
    MissingCover,
    RingMismatchError,
    TransitivityViolation,
    UnknownStratum,
)

Z = RingTag.INT
F2 = RingTag.GF2


def _point(sid: str) -> Stratum:
    return Stratum(module_ranks={0: 1}, id=sid, dim=0)


def _one(ring: RingTag = Z) -> SparseMatrix:
    return SparseMatrix.identity(ring, 1)


class TestPoset:
    def test_transitive_closure(self):
        poset = close_poset(["a", "b", "c"], [("a", "b"), ("b", "c")])
        assert poset.leq("a", "c")
        assert poset.leq("b", "b")
        assert not poset.leq("c", "a")

    def test_covers_skip_composites(self):
        poset = close_poset(["a", "b", "c"], [("a", "b"), ("b", "c"), ("a", "c")])
        assert poset.covers() == [("a", "b"), ("b", "c")]
        assert poset.between("a", "c") == ["b"]

    def test_below_and_above(self):
        poset = close_poset(["a", "b", "c"], [("a", "b"), ("a", "c")])
        assert poset.below("b") == ["a"]
        assert poset.above("a") == ["b", "c"]

    def test_cycle_detected(self):
        with pytest.raises(CycleDetected):
            close_poset(["a", "b"], [("a", "b"), ("b", "a")])

    def test_unknown_element(self):
        with pytest.raises(UnknownStratum):
            close_poset(["a"], [("a", "x")])


class TestLocalComplex:
    def test_zero_ranks_dropped(self):
        lc = LocalComplex(module_ranks={0: 1, 1: 0})
        assert lc.degrees == [0]
        assert lc.rank(1) == 0

    def test_boundary_shape_checked(self):
        with pytest.raises(MalformedDiagram, match="форму"):
            LocalComplex(
                module_ranks={0: 1, 1: 1},
                local_boundaries={1: SparseMatrix.from_dense(Z, [[1], [0]])},
            )

    def test_default_boundary_is_zero(self):
        lc = LocalComplex(module_ranks={0: 2, 1: 1})
        assert lc.boundary(1, Z).shape == (2, 1)
        assert lc.boundary(1, Z).is_zero()

    def test_stratum_requires_id(self):
        with pytest.raises(MalformedDiagram):
            Stratum(module_ranks={0: 1})


class TestStratifiedDiagram:
    def test_from_parts_sorts_strata(self):
        d = segment().diagram
        assert d.ids == ["e", "v"]
        assert d.degrees == [0, 1]
        assert d.top_degree == 1

    def test_duplicate_stratum(self):
        with pytest.raises(MalformedDiagram):
            StratifiedDiagram.from_parts(Z, [_point("a"), _point("a")], [])

    def test_self_gluing_rejected(self):
        with pytest.raises(MalformedDiagram):
            GluingMap("a", "a", {0: _one()})

    def test_ring_mismatch(self):
        with pytest.raises(RingMismatchError):
            StratifiedDiagram.from_parts(
                Z, [_point("a"), _point("b")], [GluingMap("a", "b", {0: _one(F2)})]
            )

    def test_map_at_identity_and_zero(self):
        d = segment().diagram
        assert d.map_at("v", "v", 0) == SparseMatrix.identity(Z, 1)
        assert d.map_at("v", "e", 1).shape == (1, 0)

    def test_map_at_missing_pair(self):
        with pytest.raises(MissingCover):
            segment().diagram.map_at("e", "v", 0)

    def test_unknown_stratum(self):
        with pytest.raises(UnknownStratum):
            segment().diagram.stratum("x")

    def test_with_ring(self):
        d = segment().diagram.with_ring(F2)
        assert d.ring is F2
        assert d.boundary("e", 1) == SparseMatrix.from_dense(F2, [[1], [1]])


class TestResolveGluings:
    def test_composites_added(self):
        strata = [_point("a"), _point("b"), _point("c")]
        gluings = [GluingMap("a", "b", {0: _one()}), GluingMap("b", "c", {0: _one()})]
        d = resolve_gluings(StratifiedDiagram.from_parts(Z, strata, gluings))
        assert d.resolved
        assert ("a", "c") in d.gluings
        assert d.map_at("a", "c", 0) == _one()

    def test_resolution_is_idempotent(self):
        d = resolve_gluings(segment().diagram)
        assert resolve_gluings(d) is d

    def test_transitivity_violation_raised(self):
        with pytest.raises(TransitivityViolation) as info:
            resolve_gluings(nontransitive_counterexample().diagram)
        assert info.value.pair == ("sigma0", "tau1")
        assert info.value.degree == 0
        assert info.value.via == "rho0"

    def test_repaired_counterexample_resolves(self):
        d = resolve_gluings(nontransitive_counterexample(repaired=True).diagram)
        assert d.map_at("sigma0", "tau1", 0) == _one()


class TestValidate:
    def test_valid_segment(self):
        assert validate(segment().diagram).ok

    def test_transitivity_finding(self):
        report = validate(nontransitive_counterexample().diagram)
        assert report.kinds() == {FindingKind.TRANSITIVITY}
        finding = report.findings[0]
        assert finding.pair == ("sigma0", "tau1")
        assert finding.degree == 0

    def test_local_complex_finding(self):
        bad = Stratum(
            module_ranks={0: 1, 1: 1, 2: 1},
            local_boundaries={
                1: SparseMatrix.from_dense(Z, [[1]]),
                2: SparseMatrix.from_dense(Z, [[1]]),
            },
            id="s",
        )
        report = validate(StratifiedDiagram.from_parts(Z, [bad], []))
        assert FindingKind.LOCAL_COMPLEX in report.kinds()

    def test_shape_finding(self):
        gluing = GluingMap("a", "b", {0: SparseMatrix.from_dense(Z, [[1, 1]])})
        report = validate(StratifiedDiagram.from_parts(Z, [_point("a"), _point("b")], [gluing]))
        assert report.kinds() == {FindingKind.SHAPE}

    def test_chain_map_finding(self):
        edge = Stratum(
            module_ranks={0: 2, 1: 1},
            local_boundaries={1: SparseMatrix.from_dense(Z, [[-1], [1]])},
            id="e",
        )
        other = Stratum(
            module_ranks={0: 2, 1: 1},
            local_boundaries={1: SparseMatrix.from_dense(Z, [[-1], [1]])},
            id="f",
        )
        gluing = GluingMap(
            "e",
            "f",
            {0: SparseMatrix.identity(Z, 2), 1: SparseMatrix.from_dense(Z, [[-1]])},
        )
        report = validate(StratifiedDiagram.from_parts(Z, [edge, other], [gluing]))
        assert report.kinds() == {FindingKind.CHAIN_MAP}

    def test_missing_cover_finding(self):
        strata = [_point("a"), _point("b"), _point("c")]
        gluings = [GluingMap("a", "c", {0: _one()})]
        d = StratifiedDiagram.from_parts(Z, strata, gluings, relations=[("a", "b"), ("b", "c")])
        report = validate(d)
        assert FindingKind.MISSING_COVER in report.kinds()

    def test_parallel_validation_matches(self, monkeypatch):
        monkeypatch.setenv("STRATACODE_THREADS", "4")
        report = validate(nontransitive_counterexample().diagram)
        assert report.kinds() == {FindingKind.TRANSITIVITY}
