"""Нормальная форма Смита и решётки над Z на массивах numpy с dtype=object."""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np

from stratacode.algebra.matrix import RingTag, SmithDecomposition, SparseMatrix
from stratacode.errors import DimensionMismatchError, RingMismatchError


def _require_int(m: SparseMatrix) -> None:
    if m.ring is not RingTag.INT:
        raise RingMismatchError(f"Ожидалась целочисленная матрица, получена {m.ring.label}")


def _eye(n: int) -> np.ndarray:
    out = np.zeros((n, n), dtype=object)
    for i in range(n):
        out[i, i] = 1
    return out


def _min_abs_position(block: np.ndarray) -> tuple[int, int] | None:
    positions = np.argwhere(np.not_equal(block, 0).astype(bool))
    if positions.size == 0:
        return None
    _, i, j = min((abs(int(block[i, j])), int(i), int(j)) for i, j in positions)
    return i, j


class _SmithState:
    def __init__(self, a: np.ndarray) -> None:
        self.a = a
        n_rows, n_cols = a.shape
        self.u = _eye(n_rows)
        self.u_inv = _eye(n_rows)
        self.v = _eye(n_cols)
        self.v_inv = _eye(n_cols)

    def swap_rows(self, i: int, j: int) -> None:
        if i == j:
            return
        for arr in (self.a, self.u):
            arr[[i, j]] = arr[[j, i]]
        self.u_inv[:, [i, j]] = self.u_inv[:, [j, i]]

    def swap_cols(self, i: int, j: int) -> None:
        if i == j:
            return
        for arr in (self.a, self.v):
            arr[:, [i, j]] = arr[:, [j, i]]
        self.v_inv[[i, j]] = self.v_inv[[j, i]]

    def add_row(self, target: int, source: int, q: int) -> None:
        self.a[target] = self.a[target] + q * self.a[source]
        self.u[target] = self.u[target] + q * self.u[source]
        self.u_inv[:, source] = self.u_inv[:, source] - q * self.u_inv[:, target]

    def add_col(self, target: int, source: int, q: int) -> None:
        self.a[:, target] = self.a[:, target] + q * self.a[:, source]
        self.v[:, target] = self.v[:, target] + q * self.v[:, source]
        self.v_inv[source] = self.v_inv[source] - q * self.v_inv[target]

    def negate_row(self, i: int) -> None:
        self.a[i] = -self.a[i]
        self.u[i] = -self.u[i]
        self.u_inv[:, i] = -self.u_inv[:, i]


def _clear_pivot(state: _SmithState, t: int) -> None:
    a = state.a
    n_rows, n_cols = a.shape
    while True:
        pivot = int(a[t, t])
        dirty = False
        for i in range(t + 1, n_rows):
            if a[i, t] != 0:
                q = int(a[i, t]) // pivot
                if q:
                    state.add_row(i, t, -q)
                if a[i, t] != 0:
                    dirty = True
        for j in range(t + 1, n_cols):
            if a[t, j] != 0:
                q = int(a[t, j]) // pivot
                if q:
                    state.add_col(j, t, -q)
                if a[t, j] != 0:
                    dirty = True
        if dirty:
            line = np.concatenate([a[t:, t], a[t, t + 1 :]])
            best = min(
                (abs(int(x)), idx) for idx, x in enumerate(line) if x != 0
            )[1]
            if best < n_rows - t:
                state.swap_rows(t, t + best)
            else:
                state.swap_cols(t, t + 1 + best - (n_rows - t))
            continue
        rest = a[t + 1 :, t + 1 :]
        offenders = np.argwhere(np.not_equal(rest % pivot, 0).astype(bool))
        if offenders.size == 0:
            return
        state.add_row(t, t + 1 + int(offenders[0][0]), 1)


def smith_normal_form(m: SparseMatrix) -> SmithDecomposition:
    _require_int(m)
    state = _SmithState(m.to_dense())
    n_rows, n_cols = m.shape
    factors: list[int] = []
    for t in range(min(n_rows, n_cols)):
        position = _min_abs_position(state.a[t:, t:])
        if position is None:
            break
        state.swap_rows(t, t + position[0])
        state.swap_cols(t, t + position[1])
        _clear_pivot(state, t)
        if state.a[t, t] < 0:
            state.negate_row(t)
        factors.append(int(state.a[t, t]))
    return SmithDecomposition(
        u=SparseMatrix.from_dense(RingTag.INT, state.u.reshape(n_rows, n_rows)),
        s=SparseMatrix.from_dense(RingTag.INT, state.a.reshape(n_rows, n_cols)),
        v=SparseMatrix.from_dense(RingTag.INT, state.v.reshape(n_cols, n_cols)),
        u_inv=SparseMatrix.from_dense(RingTag.INT, state.u_inv.reshape(n_rows, n_rows)),
        v_inv=SparseMatrix.from_dense(RingTag.INT, state.v_inv.reshape(n_cols, n_cols)),
        invariant_factors=tuple(factors),
    )


def rank(m: SparseMatrix) -> int:
    _require_int(m)
    if m.is_zero():
        return 0
    return smith_normal_form(m).rank


def kernel_basis(m: SparseMatrix) -> SparseMatrix:
    _require_int(m)
    snf = smith_normal_form(m)
    return snf.v.select_columns(range(snf.rank, m.cols))


def image_basis(m: SparseMatrix) -> SparseMatrix:
    _require_int(m)
    snf = smith_normal_form(m)
    columns = snf.u_inv.select_columns(range(snf.rank))
    scale = SparseMatrix.from_entries(
        RingTag.INT, snf.rank, snf.rank, ((i, i, d) for i, d in enumerate(snf.invariant_factors))
    )
    return columns @ scale


def in_span(m: SparseMatrix, v: Sequence[int]) -> list[int] | None:
    _require_int(m)
    if len(v) != m.rows:
        raise DimensionMismatchError(f"Длина вектора {len(v)} не равна числу строк {m.rows}")
    snf = smith_normal_form(m)
    w = snf.u.apply(list(v))
    y = [0] * m.cols
    for i, d in enumerate(snf.invariant_factors):
        if w[i] % d != 0:
            return None
        y[i] = w[i] // d
    if any(w[i] != 0 for i in range(snf.rank, m.rows)):
        return None
    return snf.v.apply(y)


def cokernel_invariants(m: SparseMatrix) -> tuple[int, list[int]]:
    _require_int(m)
    snf = smith_normal_form(m)
    return m.rows - snf.rank, [d for d in snf.invariant_factors if d > 1]
