"""Исключение Гаусса над GF(2) на плотных строках uint8."""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np

from stratacode.algebra.matrix import RingTag, SparseMatrix, hstack
from stratacode.errors import DimensionMismatchError, RingMismatchError


def _require_gf2(m: SparseMatrix) -> None:
    if m.ring is not RingTag.GF2:
        raise RingMismatchError(f"Ожидалась матрица над GF(2), получена {m.ring.label}")


def rref_dense(a: np.ndarray) -> tuple[np.ndarray, list[int]]:
    a = np.array(a, dtype=np.uint8, copy=True) & 1
    n_rows, n_cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(n_cols):
        if r == n_rows:
            break
        hits = np.flatnonzero(a[r:, c])
        if hits.size == 0:
            continue
        p = r + int(hits[0])
        if p != r:
            a[[r, p]] = a[[p, r]]
        others = np.flatnonzero(a[:, c])
        others = others[others != r]
        if others.size:
            a[others] ^= a[r]
        pivots.append(c)
        r += 1
    return a[:r], pivots


def rref(m: SparseMatrix) -> tuple[SparseMatrix, list[int]]:
    _require_gf2(m)
    reduced, pivots = rref_dense(m.to_dense())
    return SparseMatrix.from_dense(RingTag.GF2, reduced.reshape(len(pivots), m.cols)), pivots


def rank(m: SparseMatrix) -> int:
    _require_gf2(m)
    if m.is_zero():
        return 0
    dense = m.to_dense()
    if m.rows > m.cols:
        dense = dense.T
    return len(rref_dense(dense)[1])


def kernel_basis(m: SparseMatrix) -> SparseMatrix:
    _require_gf2(m)
    reduced, pivots = rref_dense(m.to_dense())
    pivot_set = set(pivots)
    free = [j for j in range(m.cols) if j not in pivot_set]
    basis = np.zeros((m.cols, len(free)), dtype=np.uint8)
    for out, j in enumerate(free):
        basis[j, out] = 1
        for row, p in enumerate(pivots):
            basis[p, out] = reduced[row, j]
    return SparseMatrix.from_dense(RingTag.GF2, basis.reshape(m.cols, len(free)))


def image_basis(m: SparseMatrix) -> SparseMatrix:
    _require_gf2(m)
    _, pivots = rref_dense(m.to_dense())
    return m.select_columns(pivots)


def in_span(m: SparseMatrix, v: Sequence[int]) -> list[int] | None:
    _require_gf2(m)
    if len(v) != m.rows:
        raise DimensionMismatchError(f"Длина вектора {len(v)} не равна числу строк {m.rows}")
    augmented = np.zeros((m.rows, m.cols + 1), dtype=np.uint8)
    augmented[:, : m.cols] = m.to_dense()
    augmented[:, m.cols] = np.asarray([x & 1 for x in v], dtype=np.uint8)
    reduced, pivots = rref_dense(augmented)
    if pivots and pivots[-1] == m.cols:
        return None
    x = [0] * m.cols
    for row, p in enumerate(pivots):
        x[p] = int(reduced[row, m.cols])
    return x


def independent_columns(base: SparseMatrix, candidates: SparseMatrix) -> list[int]:
    """Индексы столбцов candidates, независимых по модулю span(base) и предыдущих выбранных."""
    _require_gf2(base)
    _require_gf2(candidates)
    combined = hstack(RingTag.GF2, base.rows, [base, candidates])
    _, pivots = rref_dense(combined.to_dense())
    return [p - base.cols for p in pivots if p >= base.cols]


def inverse(m: SparseMatrix) -> SparseMatrix | None:
    _require_gf2(m)
    if m.rows != m.cols:
        raise DimensionMismatchError(f"Обращается только квадратная матрица, получена {m.shape}")
    n = m.rows
    augmented = np.zeros((n, 2 * n), dtype=np.uint8)
    augmented[:, :n] = m.to_dense()
    augmented[:, n:] = np.eye(n, dtype=np.uint8)
    reduced, pivots = rref_dense(augmented)
    if pivots[:n] != list(range(n)):
        return None
    return SparseMatrix.from_dense(RingTag.GF2, reduced[:, n:].reshape(n, n))


def row_basis(m: SparseMatrix) -> SparseMatrix:
    """Независимые строки в приведённой форме (для удаления избыточных стабилизаторов)."""
    reduced, _ = rref(m)
    return reduced
