"""Каталог эталонных стратифицированных диаграмм."""

from __future__ import annotations

import math
from collections import Counter
from collections.abc import Callable, Iterator, Mapping
from dataclasses import dataclass, field
from enum import StrEnum
from functools import lru_cache
from itertools import combinations, product
from typing import Any

from stratacode.algebra import RingTag, SparseMatrix
from stratacode.diagram import GluingMap, StratifiedDiagram, Stratum
from stratacode.errors import ParameterOutOfRange, UnknownExample
from stratacode.logging import get_logger

logger = get_logger(__name__)

Cell = tuple[tuple[int, ...], tuple[int, ...]]
LocalKey = tuple[tuple[int, ...], tuple[int, ...]]

PLANAR_NAMES = {(): "v", (0,): "eh", (1,): "ev", (0, 1): "f"}
SOLID_NAMES = {
    (): "v",
    (0,): "ex",
    (1,): "ey",
    (2,): "ez",
    (0, 1): "fxy",
    (0, 2): "fxz",
    (1, 2): "fyz",
    (0, 1, 2): "c",
}


class Quantity(StrEnum):
    HOMOLOGY = "homology"
    TORSION = "torsion"
    KERNEL = "kernel"
    RANK = "rank"


@dataclass(frozen=True)
class Claim:
    quantity: Quantity
    degree: int
    value: int | tuple[int, ...]
    note: str = ""

    @property
    def label(self) -> str:
        symbol = {
            Quantity.HOMOLOGY: f"dim H_{self.degree}",
            Quantity.TORSION: f"tors H_{self.degree}",
            Quantity.KERNEL: f"dim ker ∂_{self.degree}",
            Quantity.RANK: f"rank ∂_{self.degree}",
        }
        return symbol[self.quantity]


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    params: Mapping[str, Any]
    diagram: StratifiedDiagram
    default_qubit_degree: int
    claims: tuple[Claim, ...] = ()
    notes: tuple[str, ...] = ()
    expect_invalid: bool = False

    @property
    def expected(self) -> dict[int, tuple[int, tuple[int, ...]]]:
        """Заявленные (свободный ранг, факторы) гомологий по степеням."""
        out: dict[int, tuple[int, tuple[int, ...]]] = {}
        for claim in self.claims:
            free, factors = out.get(claim.degree, (0, ()))
            if claim.quantity is Quantity.HOMOLOGY and isinstance(claim.value, int):
                out[claim.degree] = (claim.value, factors)
            elif claim.quantity is Quantity.TORSION and isinstance(claim.value, tuple):
                out[claim.degree] = (free, claim.value)
        return out


def _matrix(
    ring: RingTag, rows: int, cols: int, entries: list[tuple[int, int, int]]
) -> SparseMatrix:
    return SparseMatrix.from_entries(ring, rows, cols, entries)


def _column(ring: RingTag, size: int, *hits: int) -> SparseMatrix:
    return _matrix(ring, size, 1, [(h, 0, 1) for h in hits])


@lru_cache(maxsize=None)
def _local_keys(dirs: tuple[int, ...], dim: int) -> dict[int, tuple[LocalKey, ...]]:
    by_degree: dict[int, tuple[LocalKey, ...]] = {}
    for m in range(len(dirs) + 1):
        keys: list[LocalKey] = []
        for sub in combinations(dirs, m):
            rest = [d for d in dirs if d not in sub]
            for bits in product((0, 1), repeat=len(rest)):
                offset = [0] * dim
                for d, bit in zip(rest, bits, strict=True):
                    offset[d] = bit
                keys.append((sub, tuple(offset)))
        by_degree[m] = tuple(keys)
    return by_degree


def _key_index(dirs: tuple[int, ...], dim: int) -> dict[int, dict[LocalKey, int]]:
    return {m: {key: i for i, key in enumerate(keys)} for m, keys in _local_keys(dirs, dim).items()}


@lru_cache(maxsize=None)
def _closed_cube(
    dirs: tuple[int, ...], dim: int, ring: RingTag
) -> tuple[dict[int, int], dict[int, SparseMatrix]]:
    """Клеточный комплекс замкнутого куба с кубическими знаками граней."""
    keys, index = _local_keys(dirs, dim), _key_index(dirs, dim)
    boundaries: dict[int, SparseMatrix] = {}
    for m in range(1, len(dirs) + 1):
        entries = []
        for col, (sub, offset) in enumerate(keys[m]):
            for pos, d in enumerate(sub):
                facet = tuple(x for x in sub if x != d)
                sign = -1 if pos % 2 else 1
                raised = list(offset)
                raised[d] = 1
                entries.append((index[m - 1][(facet, tuple(raised))], col, sign))
                entries.append((index[m - 1][(facet, offset)], col, -sign))
        boundaries[m] = _matrix(ring, len(keys[m - 1]), len(keys[m]), entries)
    return {m: len(k) for m, k in keys.items()}, boundaries


@lru_cache(maxsize=None)
def _cube_inclusion(
    inner: tuple[int, ...], outer: tuple[int, ...], shift: tuple[int, ...], ring: RingTag
) -> dict[int, SparseMatrix]:
    dim = len(shift)
    inner_keys, outer_index = _local_keys(inner, dim), _key_index(outer, dim)
    maps: dict[int, SparseMatrix] = {}
    for m, keys in inner_keys.items():
        entries = []
        for col, (sub, offset) in enumerate(keys):
            moved = tuple(o + s for o, s in zip(offset, shift, strict=True))
            entries.append((outer_index[m][(sub, moved)], col, 1))
        maps[m] = _matrix(ring, len(outer_index[m]), len(keys), entries)
    return maps


def _cell_id(cell: Cell, names: Mapping[tuple[int, ...], str]) -> str:
    base, dirs = cell
    return f"{names[dirs]}({','.join(map(str, base))})"


def _cells(sizes: tuple[int, ...], periodic: bool) -> Iterator[Cell]:
    dim = len(sizes)
    for m in range(dim + 1):
        for dirs in combinations(range(dim), m):
            ranges = [
                range(sizes[d]) if periodic or d in dirs else range(sizes[d] + 1)
                for d in range(dim)
            ]
            for base in product(*ranges):
                yield base, dirs


def cubical_lattice(
    sizes: tuple[int, ...],
    *,
    periodic: bool,
    ring: RingTag,
    names: Mapping[tuple[int, ...], str],
    detach: Callable[[Cell, Cell], bool] | None = None,
) -> StratifiedDiagram:
    """Кубическая решётка: каждая клетка становится стратой, покрытия задают вложения граней."""
    dim = len(sizes)
    cells = list(_cells(sizes, periodic))
    strata = []
    for cell in cells:
        ranks, boundaries = _closed_cube(cell[1], dim, ring)
        strata.append(
            Stratum(
                module_ranks=ranks,
                local_boundaries=boundaries,
                id=_cell_id(cell, names),
                dim=len(cell[1]),
            )
        )
    gluings = []
    for base, dirs in cells:
        for d, bit in product(dirs, (0, 1)):
            facet_base = list(base)
            facet_base[d] += bit
            if periodic:
                facet_base[d] %= sizes[d]
            facet: Cell = (tuple(facet_base), tuple(x for x in dirs if x != d))
            if detach is not None and detach(facet, (base, dirs)):
                continue
            shift = tuple(bit if x == d else 0 for x in range(dim))
            gluings.append(
                GluingMap(
                    _cell_id(facet, names),
                    _cell_id((base, dirs), names),
                    _cube_inclusion(facet[1], dirs, shift, ring),
                )
            )
    return StratifiedDiagram.from_parts(ring, strata, gluings)


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise ParameterOutOfRange(message)


def rp2(ring: RingTag = RingTag.INT, *, torsion_free: bool = False) -> CatalogEntry:
    """Одноклеточное представление RP² (или вариант без кручения с двумя 2-клетками)."""
    vertex = Stratum(module_ranks={0: 1}, id="sigma0", dim=0)
    loop = Stratum(module_ranks={0: 1, 1: 1}, id="sigma1", dim=1)
    strata = [vertex, loop]
    gluings = [GluingMap("sigma0", "sigma1", {0: _column(RingTag.INT, 1, 0)})]
    tops = ("sigma2_a", "sigma2_b") if torsion_free else ("sigma2",)
    attaching = 1 if torsion_free else 2
    for sid in tops:
        strata.append(
            Stratum(
                module_ranks={0: 1, 1: 1, 2: 1},
                local_boundaries={2: _matrix(RingTag.INT, 1, 1, [(0, 0, attaching)])},
                id=sid,
                dim=2,
            )
        )
        identity = _column(RingTag.INT, 1, 0)
        gluings.append(GluingMap("sigma1", sid, {0: identity, 1: identity}))
    diagram = StratifiedDiagram.from_parts(RingTag.INT, strata, gluings).with_ring(ring)

    if torsion_free:
        claims = (Claim(Quantity.HOMOLOGY, 1, 0), Claim(Quantity.TORSION, 1, ()))
    elif ring is RingTag.INT:
        claims = (
            Claim(Quantity.HOMOLOGY, 0, 1),
            Claim(Quantity.HOMOLOGY, 1, 0),
            Claim(Quantity.TORSION, 1, (2,)),
            Claim(Quantity.HOMOLOGY, 2, 0),
        )
    else:
        claims = (Claim(Quantity.HOMOLOGY, 1, 1, "над F2 отображение [2] обнуляется"),)
    return CatalogEntry(
        name="rp2",
        params={"ring": ring.label, "torsion_free": torsion_free},
        diagram=diagram,
        default_qubit_degree=1,
        claims=claims,
    )


def toric(n: int, ring: RingTag = RingTag.GF2) -> CatalogEntry:
    _require(n >= 2, f"Размер тора должен быть ≥ 2, получено n={n}")
    diagram = cubical_lattice((n, n), periodic=True, ring=ring, names=PLANAR_NAMES)
    return CatalogEntry(
        name="toric",
        params={"n": n, "ring": ring.label},
        diagram=diagram,
        default_qubit_degree=1,
        claims=(Claim(Quantity.HOMOLOGY, 1, 2),),
    )


def grid_patch(rows: int, cols: int, ring: RingTag = RingTag.GF2) -> CatalogEntry:
    _require(rows >= 1 and cols >= 1, f"Размер заплатки должен быть ≥ 1, получено {rows}×{cols}")
    diagram = cubical_lattice((cols, rows), periodic=False, ring=ring, names=PLANAR_NAMES)
    return CatalogEntry(
        name="grid",
        params={"rows": rows, "cols": cols, "ring": ring.label},
        diagram=diagram,
        default_qubit_degree=1,
        claims=(Claim(Quantity.HOMOLOGY, 0, 1), Claim(Quantity.HOMOLOGY, 1, 0)),
    )


def patch_seam(rows: int, cols: int) -> dict[str, str]:
    """Общая граница: правый край левой заплатки ↦ левый край правой."""
    shared = {f"v({cols},{j})": f"v(0,{j})" for j in range(rows + 1)}
    shared.update({f"ev({cols},{j})": f"ev(0,{j})" for j in range(rows)})
    return shared


def _twisted_faces(n: int, a: int, b: int) -> dict[tuple[int, int], Counter[tuple[str, int, int]]]:
    faces = {}
    for i, j in product(range(n), repeat=2):
        faces[(i, j)] = Counter(
            [
                ("eh", i, j),
                ("eh", (i + a) % n, (j + b) % n),
                ("ev", i, j),
                ("ev", (i + b) % n, (j - a) % n),
            ]
        )
    return faces


def _endpoints(edge: tuple[str, int, int], n: int) -> tuple[tuple[int, int], tuple[int, int]]:
    kind, i, j = edge
    if kind == "eh":
        return (i, j), ((i + 1) % n, j)
    return (i, j), (i, (j + 1) % n)


def twisted_torus(n: int, a: int, b: int) -> CatalogEntry:
    _require(n >= 2, f"Размер тора должен быть ≥ 2, получено n={n}")
    _require(0 <= a < n and 0 <= b < n, f"Сдвиги должны лежать в [0, {n}), получено a={a}, b={b}")
    ring = RingTag.GF2
    faces = _twisted_faces(n, a, b)

    def vertex_parity(edges: Counter[tuple[str, int, int]]) -> bool:
        hits: Counter[tuple[int, int]] = Counter()
        for edge, mult in edges.items():
            if mult % 2:
                hits.update(_endpoints(edge, n))
        return all(count % 2 == 0 for count in hits.values())

    demoted = not all(vertex_parity(edges) for edges in faces.values())
    edge_id = {
        edge: f"{edge[0]}({edge[1]},{edge[2]})"
        for edge in product(("eh", "ev"), range(n), range(n))
    }

    strata: list[Stratum] = []
    gluings: list[GluingMap] = []
    for edge, sid in edge_id.items():
        if demoted:
            strata.append(Stratum(module_ranks={1: 1}, id=sid, dim=1))
            continue
        strata.append(
            Stratum(
                module_ranks={0: 2, 1: 1},
                local_boundaries={1: _column(ring, 2, 0, 1)},
                id=sid,
                dim=1,
            )
        )
        for pos, point in enumerate(_endpoints(edge, n)):
            gluings.append(GluingMap(f"v({point[0]},{point[1]})", sid, {0: _column(ring, 2, pos)}))
    if not demoted:
        strata.extend(
            Stratum(module_ranks={0: 1}, id=f"v({i},{j})", dim=0)
            for i, j in product(range(n), repeat=2)
        )

    for (i, j), edges in faces.items():
        sid = f"f({i},{j})"
        local_edges = sorted(edges)
        ranks = {2: 1, 1: len(local_edges)}
        boundaries = {
            2: _matrix(
                ring,
                len(local_edges),
                1,
                [(pos, 0, edges[edge]) for pos, edge in enumerate(local_edges)],
            )
        }
        points: list[tuple[int, int]] = []
        if not demoted:
            points = sorted({p for edge in local_edges for p in _endpoints(edge, n)})
            ranks[0] = len(points)
            boundaries[1] = _matrix(
                ring,
                len(points),
                len(local_edges),
                [
                    (points.index(p), pos, 1)
                    for pos, edge in enumerate(local_edges)
                    for p in _endpoints(edge, n)
                ],
            )
        strata.append(Stratum(module_ranks=ranks, local_boundaries=boundaries, id=sid, dim=2))
        for pos, edge in enumerate(local_edges):
            maps = {1: _column(ring, len(local_edges), pos)}
            if not demoted:
                tail, head = _endpoints(edge, n)
                maps[0] = _matrix(
                    ring, len(points), 2, [(points.index(tail), 0, 1), (points.index(head), 1, 1)]
                )
            gluings.append(GluingMap(edge_id[edge], sid, maps))

    d = math.gcd(a, b, n)
    claims = [
        Claim(Quantity.HOMOLOGY, 1, 2 * d, f"2·gcd(a, b, n) при d={d}"),
        Claim(Quantity.KERNEL, 2, 2 * d, "H_1 отождествлён с ker ∂_2"),
        Claim(Quantity.RANK, 2, 2 * (n - d), "ранг 2(n − d)"),
    ]
    if (n, a, b) == (6, 2, 1):
        claims.append(Claim(Quantity.KERNEL, 2, 8, "расчёт через блочную диагонализацию, d=4"))
    notes = []
    if demoted:
        notes.append("demoted: ∂_1∂_2 ≠ 0 при стандартной инцидентности вершин, комплекс 2→1")
    logger.debug("twisted_torus_built", n=n, a=a, b=b, demoted=demoted)
    return CatalogEntry(
        name="twisted_torus",
        params={"n": n, "a": a, "b": b},
        diagram=StratifiedDiagram.from_parts(ring, strata, gluings),
        default_qubit_degree=1,
        claims=tuple(claims),
        notes=tuple(notes),
    )


def fracton_cube(L: int, *, control: bool = False) -> CatalogEntry:  # noqa: N803
    """Периодическая решётка L×L×L (3-тор) из замкнутых кубов над F2.

    У каждого куба снята нижняя грань xy (остаётся 5 глюингов граней из 6); эта грань
    остаётся склеенной только с кубом под ней. control сохраняет все 6 глюингов.
    """
    _require(L >= 2, f"Размер решётки должен быть ≥ 2, получено L={L}")

    def bottom_face(facet: Cell, cube: Cell) -> bool:
        return len(cube[1]) == 3 and facet[1] == (0, 1) and facet[0] == cube[0]

    diagram = cubical_lattice(
        (L, L, L),
        periodic=True,
        ring=RingTag.GF2,
        names=SOLID_NAMES,
        detach=None if control else bottom_face,
    )
    claims: tuple[Claim, ...] = ()
    notes: tuple[str, ...] = ("control: все глюинги сохранены",) if control else ()
    if not control:
        claims = (
            Claim(Quantity.HOMOLOGY, 1, 0),
            Claim(Quantity.HOMOLOGY, 2, L * L, "L²"),
            Claim(Quantity.HOMOLOGY, 3, 0),
            Claim(Quantity.RANK, 3, L**3 - L * L, "L³ − L²"),
        )
    return CatalogEntry(
        name="fracton",
        params={"L": L, "control": control},
        diagram=diagram,
        default_qubit_degree=2,
        claims=claims,
        notes=notes,
    )


def dangling_square() -> CatalogEntry:
    ring = RingTag.GF2
    one = _column(ring, 1, 0)
    strata = [
        Stratum(
            module_ranks={0: 1, 1: 2, 2: 1},
            local_boundaries={
                2: _column(ring, 2, 0, 1),
                1: _matrix(ring, 1, 2, [(0, 0, 1), (0, 1, 1)]),
            },
            id="f",
            dim=2,
        ),
        Stratum(module_ranks={0: 1, 1: 1}, local_boundaries={1: one}, id="e1", dim=1),
        Stratum(module_ranks={0: 1, 1: 1}, local_boundaries={1: one}, id="e2", dim=1),
        Stratum(module_ranks={1: 1}, id="e3", dim=1),
        Stratum(module_ranks={0: 1}, id="v", dim=0),
    ]
    gluings = [
        GluingMap("e1", "f", {1: _column(ring, 2, 0), 0: one}),
        GluingMap("e2", "f", {1: _column(ring, 2, 1), 0: one}),
        GluingMap("v", "e1", {0: one}),
        GluingMap("v", "e2", {0: one}),
    ]
    return CatalogEntry(
        name="dangling",
        params={},
        diagram=StratifiedDiagram.from_parts(ring, strata, gluings),
        default_qubit_degree=1,
        claims=(
            Claim(Quantity.HOMOLOGY, 2, 0),
            Claim(Quantity.HOMOLOGY, 1, 1),
            Claim(Quantity.HOMOLOGY, 0, 1, "матрицы дают H_0 = 0; возможно, приведённые гомологии"),
        ),
    )


def nontransitive_counterexample(*, repaired: bool = False) -> CatalogEntry:
    ring = RingTag.INT
    one = _column(ring, 1, 0)
    strata = [
        Stratum(module_ranks={0: 1}, id="sigma0", dim=0),
        Stratum(module_ranks={0: 1}, id="rho0", dim=0),
        Stratum(module_ranks={0: 1, 1: 1}, local_boundaries={1: one}, id="tau1", dim=1),
    ]
    gluings = [
        GluingMap("sigma0", "rho0", {0: one}),
        GluingMap("rho0", "tau1", {0: one}),
        GluingMap("sigma0", "tau1", {0: one if repaired else -one}),
    ]
    return CatalogEntry(
        name="nontransitive",
        params={"repaired": repaired},
        diagram=StratifiedDiagram.from_parts(ring, strata, gluings),
        default_qubit_degree=0,
        notes=() if repaired else ("явное φ⁰(sigma0 ≤ tau1) = −id противоречит композиции",),
        expect_invalid=not repaired,
    )


def segment(ring: RingTag = RingTag.INT) -> CatalogEntry:
    edge = Stratum(
        module_ranks={0: 2, 1: 1},
        local_boundaries={1: _matrix(ring, 2, 1, [(0, 0, -1), (1, 0, 1)])},
        id="e",
        dim=1,
    )
    vertex = Stratum(module_ranks={0: 1}, id="v", dim=0)
    tail = GluingMap("v", "e", {0: _column(ring, 2, 0)})
    return CatalogEntry(
        name="segment",
        params={"ring": ring.label},
        diagram=StratifiedDiagram.from_parts(ring, [edge, vertex], [tail]),
        default_qubit_degree=0,
        claims=(Claim(Quantity.HOMOLOGY, 0, 1), Claim(Quantity.HOMOLOGY, 1, 0)),
    )


@dataclass(frozen=True)
class _Builder:
    factory: Callable[..., CatalogEntry]
    params: tuple[str, ...] = ()
    defaults: Mapping[str, Any] = field(default_factory=dict)


def _ring_param(value: Any) -> RingTag:
    return value if isinstance(value, RingTag) else RingTag.from_label(str(value))


_REGISTRY: dict[str, _Builder] = {
    "rp2": _Builder(
        lambda ring, torsion_free: rp2(_ring_param(ring), torsion_free=torsion_free),
        ("ring", "torsion_free"),
        {"ring": "Z", "torsion_free": False},
    ),
    "torus": _Builder(twisted_torus, ("n", "a", "b"), {"n": 4, "a": 1, "b": 1}),
    "toric": _Builder(
        lambda n, ring: toric(n, _ring_param(ring)), ("n", "ring"), {"n": 3, "ring": "F2"}
    ),
    "fracton": _Builder(
        lambda L, control: fracton_cube(L, control=control),  # noqa: N803
        ("L", "control"),
        {"L": 2, "control": False},
    ),
    "dangling": _Builder(dangling_square),
    "nontransitive": _Builder(
        lambda repaired: nontransitive_counterexample(repaired=repaired),
        ("repaired",),
        {"repaired": False},
    ),
    "segment": _Builder(lambda ring: segment(_ring_param(ring)), ("ring",), {"ring": "Z"}),
    "grid": _Builder(
        lambda rows, cols, ring: grid_patch(rows, cols, _ring_param(ring)),
        ("rows", "cols", "ring"),
        {"rows": 2, "cols": 2, "ring": "F2"},
    ),
}
_REGISTRY["twisted_torus"] = _REGISTRY["torus"]


def example_names() -> list[str]:
    return sorted(_REGISTRY)


def get_entry(name: str, **params: Any) -> CatalogEntry:
    builder = _REGISTRY.get(name)
    if builder is None:
        raise UnknownExample(f"Неизвестный пример {name!r}; доступны: {', '.join(example_names())}")
    unknown = sorted(set(params) - set(builder.params))
    if unknown:
        raise ParameterOutOfRange(f"Пример {name!r} не принимает параметры {unknown}")
    merged = {**builder.defaults, **{k: v for k, v in params.items() if v is not None}}
    return builder.factory(**merged)
