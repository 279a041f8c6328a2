"""Независимые переборные оракулы для проверки конвейера колимит → гомологии.

Оракулы не используют ничего из конвейера, кроме типа SparseMatrix: глобальные
граничные матрицы строятся прямо по формулам решёток, ранги считаются отдельным
исключением на битовых строках Python-int.
"""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from itertools import product
from typing import Any

from stratacode.algebra.matrix import RingTag, SparseMatrix
from stratacode.constants import (
    EXHAUSTIVE_HOMOLOGY_MAX_DIM,
    NAIVE_SNF_MAX_SIZE,
    PAULI_ORACLE_MAX_QUBITS,
)
from stratacode.errors import DimensionMismatchError, SizeLimitExceeded


@dataclass(frozen=True)
class OracleResult:
    name: str
    inputs: Mapping[str, Any]
    value: Mapping[str, Any] = field(default_factory=dict)


def _row_masks(m: SparseMatrix) -> list[int]:
    rows = [0] * m.rows
    for r, c, v in m.entries:
        if v % 2:
            rows[r] ^= 1 << c
    return rows


def _column_masks(m: SparseMatrix) -> list[int]:
    cols = [0] * m.cols
    for r, c, v in m.entries:
        if v % 2:
            cols[c] ^= 1 << r
    return cols


def gf2_rank_bitset(m: SparseMatrix) -> int:
    basis: dict[int, int] = {}
    for row in _row_masks(m):
        while row:
            lead = row.bit_length() - 1
            if lead not in basis:
                basis[lead] = row
                break
            row ^= basis[lead]
    return len(basis)


def direct_twisted_boundary(n: int, a: int, b: int) -> SparseMatrix:
    """Глобальная ∂_2 скрученного тора: строки eh (i·n+j), затем ev (n²+i·n+j)."""
    entries = []
    for i, j in product(range(n), repeat=2):
        col = i * n + j
        entries += [
            (i * n + j, col, 1),
            (((i + a) % n) * n + (j + b) % n, col, 1),
            (n * n + i * n + j, col, 1),
            (n * n + ((i + b) % n) * n + (j - a) % n, col, 1),
        ]
    return SparseMatrix.from_entries(RingTag.GF2, 2 * n * n, n * n, entries)


def direct_torus_incidence(n: int) -> SparseMatrix:
    """Стандартная инцидентность рёбер и вершин n×n тора (n² × 2n²)."""
    entries = []
    for i, j in product(range(n), repeat=2):
        entries += [
            (i * n + j, i * n + j, 1),
            (((i + 1) % n) * n + j, i * n + j, 1),
            (i * n + j, n * n + i * n + j, 1),
            (i * n + (j + 1) % n, n * n + i * n + j, 1),
        ]
    return SparseMatrix.from_entries(RingTag.GF2, n * n, 2 * n * n, entries)


def direct_fracton_boundaries(
    L: int, control: bool = False  # noqa: N803
) -> dict[int, SparseMatrix]:
    """Граничные матрицы периодической кубической решётки L³.

    Без control каждый куб получает собственную копию нижней грани с той же границей,
    что и у глобальной грани fxy, а сама глобальная грань в ∂_3 куба не входит.
    """
    volume = L**3

    def at(i: int, j: int, k: int) -> int:
        return ((i % L) * L + j % L) * L + k % L

    def edge(axis: int, i: int, j: int, k: int) -> int:
        return axis * volume + at(i, j, k)

    d1, d2, d3 = [], [], []
    for i, j, k in product(range(L), repeat=3):
        x = at(i, j, k)
        for axis, (di, dj, dk) in enumerate(((1, 0, 0), (0, 1, 0), (0, 0, 1))):
            column = edge(axis, i, j, k)
            d1 += [(x, column, 1), (at(i + di, j + dj, k + dk), column, 1)]
        fxy, fxz, fyz = x, volume + x, 2 * volume + x
        bottom = (edge(0, i, j, k), edge(0, i, j + 1, k), edge(1, i, j, k), edge(1, i + 1, j, k))
        d2 += [(e, fxy, 1) for e in bottom]
        d2 += [
            (e, fxz, 1)
            for e in (
                edge(0, i, j, k), edge(0, i, j, k + 1), edge(2, i, j, k), edge(2, i + 1, j, k)
            )
        ]
        d2 += [
            (e, fyz, 1)
            for e in (
                edge(1, i, j, k), edge(1, i, j, k + 1), edge(2, i, j, k), edge(2, i, j + 1, k)
            )
        ]
        cube_faces = [
            at(i, j, k + 1),
            volume + at(i, j, k),
            volume + at(i, j + 1, k),
            2 * volume + at(i, j, k),
            2 * volume + at(i + 1, j, k),
        ]
        if control:
            cube_faces.append(fxy)
        else:
            copy = 3 * volume + x
            cube_faces.append(copy)
            d2 += [(e, copy, 1) for e in bottom]
        d3 += [(f, x, 1) for f in cube_faces]

    faces = 3 * volume if control else 4 * volume
    return {
        1: SparseMatrix.from_entries(RingTag.GF2, volume, 3 * volume, d1),
        2: SparseMatrix.from_entries(RingTag.GF2, 3 * volume, faces, d2),
        3: SparseMatrix.from_entries(RingTag.GF2, faces, volume, d3),
    }


def homology_dims_gf2(
    boundaries: Mapping[int, SparseMatrix], dims: Mapping[int, int]
) -> dict[int, int]:
    ranks = {k: gf2_rank_bitset(m) for k, m in boundaries.items()}
    return {k: n - ranks.get(k, 0) - ranks.get(k + 1, 0) for k, n in sorted(dims.items())}


def _dims_of(boundaries: Mapping[int, SparseMatrix]) -> dict[int, int]:
    dims: dict[int, int] = {}
    for k, m in boundaries.items():
        dims[k] = m.cols
        dims[k - 1] = m.rows
    return dims


def exhaustive_homology_gf2(
    boundaries: Mapping[int, SparseMatrix], dims: Mapping[int, int] | None = None
) -> dict[int, int]:
    """Размерности H_k перебором всех векторов; суммарная размерность не больше 20."""
    dims = dict(dims) if dims is not None else _dims_of(boundaries)
    total = sum(dims.values())
    if total > EXHAUSTIVE_HOMOLOGY_MAX_DIM:
        raise SizeLimitExceeded(
            f"Перебор ограничен размерностью {EXHAUSTIVE_HOMOLOGY_MAX_DIM}, получено {total}"
        )

    masks = {k: _column_masks(m) for k, m in boundaries.items()}

    def image(k: int, vector: int) -> int:
        out = 0
        for c, col in enumerate(masks[k]):
            if vector >> c & 1:
                out ^= col
        return out

    result: dict[int, int] = {}
    for k, n in sorted(dims.items()):
        cycles = sum(1 for v in range(1 << n) if k not in boundaries or image(k, v) == 0)
        above = dims.get(k + 1, 0)
        if k + 1 in boundaries:
            hit = {image(k + 1, v) for v in range(1 << above)}
        else:
            hit = {0}
        result[k] = (cycles // len(hit)).bit_length() - 1
    return result


def pauli_commutation_oracle(alpha: Sequence[int], beta: Sequence[int]) -> int:
    """Знак коммутации X(α) и Z(β) по явным строкам Паули."""
    if len(alpha) != len(beta):
        raise DimensionMismatchError(f"Длины векторов различаются: {len(alpha)} и {len(beta)}")
    if len(alpha) > PAULI_ORACLE_MAX_QUBITS:
        raise SizeLimitExceeded(f"Не более {PAULI_ORACLE_MAX_QUBITS} кубитов")
    x_string = "".join("X" if a % 2 else "I" for a in alpha)
    z_string = "".join("Z" if b % 2 else "I" for b in beta)
    anticommuting = sum(
        1 for p, q in zip(x_string, z_string, strict=True) if p != "I" and q != "I" and p != q
    )
    return -1 if anticommuting % 2 else 1


def naive_snf(m: SparseMatrix) -> list[int]:
    """Инвариантные множители учебным алгоритмом без выбора минимального ведущего."""
    rows, cols = m.shape
    if rows > NAIVE_SNF_MAX_SIZE or cols > NAIVE_SNF_MAX_SIZE:
        raise SizeLimitExceeded(
            f"Наивная SNF ограничена размером {NAIVE_SNF_MAX_SIZE}, получено {rows}×{cols}"
        )
    a = [[0] * cols for _ in range(rows)]
    for r, c, v in m.entries:
        a[r][c] = v

    factors: list[int] = []
    for t in range(min(rows, cols)):
        pos = next(
            ((i, j) for i in range(t, rows) for j in range(t, cols) if a[i][j]), None
        )
        if pos is None:
            break
        a[t], a[pos[0]] = a[pos[0]], a[t]
        for row in a:
            row[t], row[pos[1]] = row[pos[1]], row[t]
        while True:
            for i in range(t + 1, rows):
                while a[i][t]:
                    q = a[i][t] // a[t][t]
                    a[i] = [x - q * y for x, y in zip(a[i], a[t], strict=True)]
                    if a[i][t]:
                        a[t], a[i] = a[i], a[t]
            for j in range(t + 1, cols):
                while a[t][j]:
                    q = a[t][j] // a[t][t]
                    for row in a:
                        row[j] -= q * row[t]
                    if a[t][j]:
                        for row in a:
                            row[t], row[j] = row[j], row[t]
            if any(a[i][t] for i in range(t + 1, rows)):
                continue
            bad = next(
                (i for i in range(t + 1, rows) for j in range(t + 1, cols) if a[i][j] % a[t][t]),
                None,
            )
            if bad is None:
                break
            a[t] = [x + y for x, y in zip(a[t], a[bad], strict=True)]
        factors.append(abs(a[t][t]))
    return factors


def _chain_dims(boundaries: Mapping[int, SparseMatrix], top: int) -> dict[int, int]:
    dims = {k: 0 for k in range(top + 1)}
    dims.update(_dims_of(boundaries))
    return {k: v for k, v in dims.items() if k >= 0}


def twisted_torus_oracle(n: int, a: int, b: int) -> OracleResult:
    d2 = direct_twisted_boundary(n, a, b)
    d1 = direct_torus_incidence(n)
    two_term = any(_row_masks(_gf2_product(d1, d2)))
    boundaries = {2: d2} if two_term else {1: d1, 2: d2}
    dims = {1: 2 * n * n, 2: n * n} if two_term else {0: n * n, 1: 2 * n * n, 2: n * n}
    homology = homology_dims_gf2(boundaries, dims)
    rank_2 = gf2_rank_bitset(d2)
    value: dict[str, Any] = {f"homology_{k}": v for k, v in homology.items()}
    value.update({"kernel_2": n * n - rank_2, "rank_2": rank_2, "two_term": two_term})
    return OracleResult("twisted_torus", {"n": n, "a": a, "b": b}, value)


def _gf2_product(left: SparseMatrix, right: SparseMatrix) -> SparseMatrix:
    left_rows = _row_masks(left)
    right_cols = _column_masks(right)
    entries = [
        (r, c, 1)
        for r, row in enumerate(left_rows)
        for c, col in enumerate(right_cols)
        if (row & col).bit_count() % 2
    ]
    return SparseMatrix.from_entries(RingTag.GF2, left.rows, right.cols, entries)


def fracton_oracle(L: int, control: bool = False) -> OracleResult:  # noqa: N803
    boundaries = direct_fracton_boundaries(L, control)
    homology = homology_dims_gf2(boundaries, _chain_dims(boundaries, 3))
    value: dict[str, Any] = {f"homology_{k}": v for k, v in homology.items()}
    value["rank_3"] = gf2_rank_bitset(boundaries[3])
    value["kernel_3"] = boundaries[3].cols - value["rank_3"]
    return OracleResult("fracton", {"L": L, "control": control}, value)


def small_complex_oracle(
    ring: RingTag, boundaries: Mapping[int, SparseMatrix], dims: Mapping[int, int]
) -> OracleResult:
    """Гомологии малого комплекса: перебором над F2 или наивной SNF над Z."""
    value: dict[str, Any] = {}
    if ring is RingTag.GF2:
        for k, dim in exhaustive_homology_gf2(boundaries, dims).items():
            value[f"homology_{k}"] = dim
    else:
        factors = {k: naive_snf(m) for k, m in boundaries.items()}
        ranks = {k: len(f) for k, f in factors.items()}
        for k, n in sorted(dims.items()):
            value[f"homology_{k}"] = n - ranks.get(k, 0) - ranks.get(k + 1, 0)
            value[f"torsion_{k}"] = tuple(f for f in factors.get(k + 1, []) if f > 1)
    for k, m in boundaries.items():
        rank = gf2_rank_bitset(m) if ring is RingTag.GF2 else len(naive_snf(m))
        value[f"rank_{k}"] = rank
        value[f"kernel_{k}"] = m.cols - rank
    return OracleResult("small_complex", {"ring": ring.label, "dims": dict(dims)}, value)
