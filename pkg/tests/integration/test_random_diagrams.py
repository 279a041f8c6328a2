"""Случайные диаграммы на посетах граней: построение, мутации, универсальное свойство."""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from typer.testing import CliRunner

from stratacode.algebra import RingTag, SparseMatrix
from stratacode.cli import app
from stratacode.colimit import Cocone, build, mediating_map, structure_cocone, structure_map
from stratacode.diagram import (
    FindingKind,
    GluingMap,
    LocalComplex,
    StratifiedDiagram,
    Stratum,
    resolve_gluings,
    validate,
)
from stratacode.documents import write_diagram
from stratacode.errors import PreconditionFailed, TransitivityViolation
from stratacode.homology import homology_at
from stratacode.oracles import homology_dims_gf2

runner = CliRunner()

Simplex = tuple[int, ...]


@dataclass(frozen=True)
class SimplicialDiagram:
    simplices: list[Simplex]
    diagram: StratifiedDiagram

    @property
    def triangles(self) -> list[Simplex]:
        return [s for s in self.simplices if len(s) == 3]


def _sid(simplex: Simplex) -> str:
    return "s" + "_".join(map(str, simplex))


def _oriented_boundary(simplex: Simplex, k: int, ring: RingTag) -> SparseMatrix:
    lower = {face: i for i, face in enumerate(combinations(simplex, k))}
    upper = list(combinations(simplex, k + 1))
    entries = [
        (lower[face[:i] + face[i + 1 :]], j, (-1) ** i)
        for j, face in enumerate(upper)
        for i in range(k + 1)
    ]
    return SparseMatrix.from_entries(ring, len(lower), len(upper), entries)


def _closed_simplex(simplex: Simplex, ring: RingTag) -> LocalComplex:
    top = len(simplex) - 1
    return LocalComplex(
        module_ranks={k: comb(len(simplex), k + 1) for k in range(top + 1)},
        local_boundaries={k: _oriented_boundary(simplex, k, ring) for k in range(1, top + 1)},
    )


def _stratum(simplex: Simplex, ring: RingTag) -> Stratum:
    local = _closed_simplex(simplex, ring)
    return Stratum(
        module_ranks=local.module_ranks,
        local_boundaries=local.local_boundaries,
        id=_sid(simplex),
        dim=len(simplex) - 1,
    )


def _inclusion(small: Simplex, big: Simplex, ring: RingTag) -> GluingMap:
    maps = {}
    for k in range(len(small)):
        position = {face: i for i, face in enumerate(combinations(big, k + 1))}
        faces = list(combinations(small, k + 1))
        maps[k] = SparseMatrix.from_entries(
            ring, len(position), len(faces), [(position[f], j, 1) for j, f in enumerate(faces)]
        )
    return GluingMap(_sid(small), _sid(big), maps)


@st.composite
def simplicial_diagram_strategy(
    draw: st.DrawFn,
    ring: RingTag,
    *,
    max_vertices: int = 5,
    with_triangle: bool = False,
    all_pairs: bool | None = None,
) -> SimplicialDiagram:
    vertices = draw(st.integers(min_value=3 if with_triangle else 1, max_value=max_vertices))
    simplex = st.lists(
        st.integers(min_value=0, max_value=vertices - 1), min_size=1, max_size=3, unique=True
    ).map(lambda s: tuple(sorted(s)))
    tops = draw(st.lists(simplex, min_size=1, max_size=6))
    if with_triangle:
        tops.append((0, 1, 2))
    faces = {(v,) for v in range(vertices)}
    for top in tops:
        faces.update(face for r in range(1, len(top) + 1) for face in combinations(top, r))
    simplices = sorted(faces, key=lambda s: (len(s), s))

    explicit = draw(st.booleans()) if all_pairs is None else all_pairs
    gluings = [
        _inclusion(small, big, ring)
        for big in simplices
        for small in simplices
        if len(small) < len(big)
        and set(small) <= set(big)
        and (explicit or len(small) == len(big) - 1)
    ]
    strata = [_stratum(s, ring) for s in simplices]
    return SimplicialDiagram(simplices, StratifiedDiagram.from_parts(ring, strata, gluings))


def _direct_homology_gf2(simplices: list[Simplex]) -> dict[int, int]:
    by_degree: dict[int, list[Simplex]] = {}
    for s in simplices:
        by_degree.setdefault(len(s) - 1, []).append(s)
    boundaries = {}
    for k in by_degree:
        if k < 1:
            continue
        lower = {face: i for i, face in enumerate(by_degree[k - 1])}
        entries = [
            (lower[face[:i] + face[i + 1 :]], j, 1)
            for j, face in enumerate(by_degree[k])
            for i in range(k + 1)
        ]
        boundaries[k] = SparseMatrix.from_entries(
            RingTag.GF2, len(lower), len(by_degree[k]), entries
        )
    return homology_dims_gf2(boundaries, {k: len(v) for k, v in by_degree.items()})


def _replace(d: StratifiedDiagram, *, stratum=None, gluing=None) -> StratifiedDiagram:
    strata = [
        stratum if stratum is not None and s.id == stratum.id else s for s in d.strata.values()
    ]
    gluings = [
        gluing if gluing is not None and g.pair == gluing.pair else g for g in d.gluings.values()
    ]
    return StratifiedDiagram.from_parts(d.ring, strata, gluings)


def _validate_via_cli(tmp_path_factory: pytest.TempPathFactory, d: StratifiedDiagram) -> dict:
    path = write_diagram(tmp_path_factory.mktemp("mutated") / "diagram.json", d)
    result = runner.invoke(app, ["validate", str(path), "--json"])
    assert result.exit_code == 1
    return json.loads(result.stdout)


class TestValidDiagrams:
    @given(sample=simplicial_diagram_strategy(RingTag.GF2))
    @settings(max_examples=200, deadline=None)
    def test_gf2_colimit_is_simplicial_chain_complex(self, sample: SimplicialDiagram) -> None:
        d = sample.diagram
        assert validate(d).ok
        c = build(d)
        expected = _direct_homology_gf2(sample.simplices)
        for k in range(c.top_degree + 1):
            assert c.quotient_rank(k) == sum(1 for s in sample.simplices if len(s) == k + 1)
            if k >= 1:
                assert (c.boundary(k - 1) @ c.boundary(k)).is_zero()
            assert homology_at(c, k).free_rank == expected.get(k, 0)

    @given(sample=simplicial_diagram_strategy(RingTag.INT, max_vertices=4))
    @settings(max_examples=60, deadline=None)
    def test_integer_colimit_is_torsion_free(self, sample: SimplicialDiagram) -> None:
        c = build(sample.diagram)
        expected = _direct_homology_gf2(sample.simplices)
        for k in range(c.top_degree + 1):
            if k >= 1:
                assert (c.boundary(k - 1) @ c.boundary(k)).is_zero()
            row = homology_at(c, k)
            assert row.free_rank == expected.get(k, 0)
            assert row.invariant_factors == ()


class TestMutations:
    @given(
        sample=simplicial_diagram_strategy(RingTag.GF2, with_triangle=True),
        data=st.data(),
    )
    @settings(max_examples=40, deadline=None)
    def test_broken_local_boundary_rejected(
        self, sample: SimplicialDiagram, data: st.DataObject, tmp_path_factory
    ) -> None:
        triangle = data.draw(st.sampled_from(sample.triangles))
        dropped = data.draw(st.integers(min_value=0, max_value=2))
        local = _closed_simplex(triangle, RingTag.GF2)
        kept = [e for e in local.local_boundaries[2].entries if e[0] != dropped]
        broken = Stratum(
            module_ranks=local.module_ranks,
            local_boundaries={
                1: local.local_boundaries[1],
                2: SparseMatrix.from_entries(RingTag.GF2, 3, 1, kept),
            },
            id=_sid(triangle),
            dim=2,
        )
        mutated = _replace(sample.diagram, stratum=broken)

        report = validate(mutated)
        assert report.kinds() == {FindingKind.LOCAL_COMPLEX}
        assert [(f.stratum, f.degree) for f in report.findings] == [(_sid(triangle), 2)]
        with pytest.raises(PreconditionFailed):
            build(mutated)
        payload = _validate_via_cli(tmp_path_factory, mutated)
        assert [f["kind"] for f in payload["findings"]] == ["local_complex"]

    @given(
        sample=simplicial_diagram_strategy(RingTag.INT, with_triangle=True, all_pairs=True),
        data=st.data(),
    )
    @settings(max_examples=40, deadline=None)
    def test_broken_composite_rejected(
        self, sample: SimplicialDiagram, data: st.DataObject, tmp_path_factory
    ) -> None:
        triangle = data.draw(st.sampled_from(sample.triangles))
        vertex = data.draw(st.sampled_from(triangle))
        other = data.draw(st.sampled_from([v for v in triangle if v != vertex]))
        wrong = GluingMap(
            _sid((vertex,)),
            _sid(triangle),
            {0: SparseMatrix.from_entries(RingTag.INT, 3, 1, [(triangle.index(other), 0, 1)])},
        )
        mutated = _replace(sample.diagram, gluing=wrong)
        pair = (_sid((vertex,)), _sid(triangle))
        edges = {_sid(e) for e in combinations(triangle, 2) if vertex in e}

        report = validate(mutated)
        assert report.kinds() == {FindingKind.TRANSITIVITY}
        assert {f.pair for f in report.findings} == {pair}
        assert {f.degree for f in report.findings} == {0}
        assert {f.via for f in report.findings} == edges
        with pytest.raises(TransitivityViolation) as excinfo:
            resolve_gluings(mutated)
        assert excinfo.value.pair == pair
        assert excinfo.value.degree == 0
        assert excinfo.value.via in edges
        payload = _validate_via_cli(tmp_path_factory, mutated)
        assert {f["kind"] for f in payload["findings"]} == {"transitivity"}
        assert {tuple(f["pair"]) for f in payload["findings"]} == {pair}


def _permutation_sign(values: list[int]) -> int:
    inversions = sum(1 for i, j in combinations(range(len(values)), 2) if values[i] > values[j])
    return -1 if inversions % 2 else 1


def _vertex_map_leg(
    simplex: Simplex, image: list[int], size: int, k: int, ring: RingTag
) -> SparseMatrix:
    position = {face: i for i, face in enumerate(combinations(range(size), k + 1))}
    faces = list(combinations(simplex, k + 1))
    entries = []
    for j, face in enumerate(faces):
        mapped = [image[v] for v in face]
        if len(set(mapped)) == len(mapped):
            entries.append((position[tuple(sorted(mapped))], j, _permutation_sign(mapped)))
    return SparseMatrix.from_entries(ring, len(position), len(faces), entries)


@st.composite
def cocone_strategy(draw: st.DrawFn) -> tuple[SimplicialDiagram, Cocone]:
    ring = draw(st.sampled_from([RingTag.GF2, RingTag.INT]))
    sample = draw(simplicial_diagram_strategy(ring, max_vertices=4))
    vertices = 1 + max(v for s in sample.simplices for v in s)
    size = draw(st.integers(min_value=1, max_value=4))
    image = draw(
        st.lists(
            st.integers(min_value=0, max_value=size - 1), min_size=vertices, max_size=vertices
        )
    )
    target = _closed_simplex(tuple(range(size)), ring)
    legs = {
        _sid(s): {k: _vertex_map_leg(s, image, size, k, ring) for k in range(len(s))}
        for s in sample.simplices
    }
    return sample, Cocone(target, legs)


class TestUniversalProperty:
    @given(pair=cocone_strategy())
    @settings(max_examples=60, deadline=None)
    def test_mediating_map_factors_cocone(self, pair: tuple[SimplicialDiagram, Cocone]) -> None:
        sample, cocone = pair
        c = build(sample.diagram)
        psi = mediating_map(c, cocone)
        for k in range(c.top_degree + 1):
            for sid in c.diagram.ids:
                assert psi.at(k) @ structure_map(c, sid, k) == cocone.leg(c, sid, k)
            if k >= 1:
                lhs = cocone.target.boundary(k, c.ring) @ psi.at(k)
                assert lhs == psi.at(k - 1) @ c.boundary(k)

    @given(sample=simplicial_diagram_strategy(RingTag.GF2))
    @settings(max_examples=50, deadline=None)
    def test_structure_cocone_mediates_identity(self, sample: SimplicialDiagram) -> None:
        c = build(sample.diagram)
        psi = mediating_map(c, structure_cocone(c))
        for k in range(c.top_degree + 1):
            assert psi.at(k) == SparseMatrix.identity(c.ring, c.quotient_rank(k))
