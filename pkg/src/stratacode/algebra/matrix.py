from __future__ import annotations

from collections import defaultdict
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass, field
from enum import StrEnum
from typing import Any

import numpy as np

from stratacode.errors import DimensionMismatchError, MalformedMatrix, RingMismatchError

Entry = tuple[int, int, int]


class RingTag(StrEnum):
    GF2 = "GF2"
    INT = "INT"

    @property
    def label(self) -> str:
        return "F2" if self is RingTag.GF2 else "Z"

    @classmethod
    def from_label(cls, label: str) -> RingTag:
        normalized = label.strip().upper()
        if normalized in ("F2", "GF2", "GF(2)"):
            return cls.GF2
        if normalized in ("Z", "INT"):
            return cls.INT
        raise ValueError(f"Неизвестное кольцо коэффициентов: {label!r}")

    @property
    def dtype(self) -> Any:
        return np.uint8 if self is RingTag.GF2 else object

    def normalize(self, value: int) -> int:
        return value & 1 if self is RingTag.GF2 else value


@dataclass(frozen=True)
class SparseMatrix:
    """Разреженная матрица в координатном формате с каноническим порядком записей."""

    ring: RingTag
    rows: int
    cols: int
    entries: tuple[Entry, ...] = field(default=())

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 0:
            raise MalformedMatrix(f"Отрицательный размер матрицы {self.rows}×{self.cols}")
        previous: tuple[int, int] | None = None
        for r, c, value in self.entries:
            if not (0 <= r < self.rows and 0 <= c < self.cols):
                raise MalformedMatrix(
                    f"Индекс ({r}, {c}) вне матрицы {self.rows}×{self.cols}"
                )
            if value == 0:
                raise MalformedMatrix(f"Хранимый ноль в позиции ({r}, {c})")
            if self.ring is RingTag.GF2 and value != 1:
                raise MalformedMatrix(f"Коэффициент {value} в позиции ({r}, {c}) не из GF(2)")
            if previous is not None and (r, c) <= previous:
                raise MalformedMatrix(f"Записи не упорядочены или повторяются: ({r}, {c})")
            previous = (r, c)

    @classmethod
    def from_entries(
        cls, ring: RingTag, rows: int, cols: int, entries: Iterable[tuple[int, int, int]]
    ) -> SparseMatrix:
        acc: dict[tuple[int, int], int] = defaultdict(int)
        for r, c, value in entries:
            acc[(int(r), int(c))] += int(value)
        cleaned = []
        for (r, c), value in sorted(acc.items()):
            value = ring.normalize(value)
            if value:
                cleaned.append((r, c, value))
        return cls(ring, rows, cols, tuple(cleaned))

    @classmethod
    def zeros(cls, ring: RingTag, rows: int, cols: int) -> SparseMatrix:
        return cls(ring, rows, cols)

    @classmethod
    def identity(cls, ring: RingTag, n: int) -> SparseMatrix:
        return cls(ring, n, n, tuple((i, i, 1) for i in range(n)))

    @classmethod
    def from_dense(cls, ring: RingTag, data: Any) -> SparseMatrix:
        arr = np.asarray(data, dtype=object)
        if arr.ndim == 1:
            arr = arr.reshape(-1, 1)
        rows, cols = arr.shape
        entries = (
            (r, c, int(value))
            for (r, c), value in np.ndenumerate(arr)
            if int(value) != 0
        )
        return cls.from_entries(ring, rows, cols, entries)

    @classmethod
    def from_columns(
        cls, ring: RingTag, rows: int, columns: Sequence[Sequence[int]]
    ) -> SparseMatrix:
        entries = (
            (r, c, value)
            for c, column in enumerate(columns)
            for r, value in enumerate(column)
            if value
        )
        return cls.from_entries(ring, rows, len(columns), entries)

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def nnz(self) -> int:
        return len(self.entries)

    def is_zero(self) -> bool:
        return not self.entries

    def to_dense(self) -> np.ndarray:
        arr = np.zeros((self.rows, self.cols), dtype=self.ring.dtype)
        for r, c, value in self.entries:
            arr[r, c] = value
        return arr

    def column(self, j: int) -> list[int]:
        out = [0] * self.rows
        for r, c, value in self.entries:
            if c == j:
                out[r] = value
        return out

    def columns(self) -> Iterator[list[int]]:
        dense = self.to_dense()
        for j in range(self.cols):
            yield [int(x) for x in dense[:, j]]

    def column_supports(self) -> list[int]:
        counts = [0] * self.cols
        for _, c, _ in self.entries:
            counts[c] += 1
        return counts

    def transpose(self) -> SparseMatrix:
        return SparseMatrix.from_entries(
            self.ring, self.cols, self.rows, ((c, r, v) for r, c, v in self.entries)
        )

    @property
    def T(self) -> SparseMatrix:  # noqa: N802
        return self.transpose()

    def _check_ring(self, other: SparseMatrix) -> None:
        if self.ring is not other.ring:
            raise RingMismatchError(f"Кольца не совпадают: {self.ring} и {other.ring}")

    def __matmul__(self, other: SparseMatrix) -> SparseMatrix:
        self._check_ring(other)
        if self.cols != other.rows:
            raise DimensionMismatchError(
                f"Нельзя умножить {self.rows}×{self.cols} на {other.rows}×{other.cols}"
            )
        if self.is_zero() or other.is_zero():
            return SparseMatrix.zeros(self.ring, self.rows, other.cols)
        by_row: dict[int, list[tuple[int, int]]] = defaultdict(list)
        for r, c, v in other.entries:
            by_row[r].append((c, v))
        acc: dict[tuple[int, int], int] = defaultdict(int)
        for r, k, v in self.entries:
            for c, w in by_row.get(k, ()):
                acc[(r, c)] += v * w
        return SparseMatrix.from_entries(
            self.ring, self.rows, other.cols, ((r, c, v) for (r, c), v in acc.items())
        )

    def __add__(self, other: SparseMatrix) -> SparseMatrix:
        self._check_ring(other)
        if self.shape != other.shape:
            raise DimensionMismatchError(f"Размеры {self.shape} и {other.shape} не совпадают")
        return SparseMatrix.from_entries(
            self.ring, self.rows, self.cols, (*self.entries, *other.entries)
        )

    def __neg__(self) -> SparseMatrix:
        if self.ring is RingTag.GF2:
            return self
        negated = tuple((r, c, -v) for r, c, v in self.entries)
        return SparseMatrix(self.ring, self.rows, self.cols, negated)

    def __sub__(self, other: SparseMatrix) -> SparseMatrix:
        return self + (-other)

    def scaled(self, factor: int) -> SparseMatrix:
        return SparseMatrix.from_entries(
            self.ring, self.rows, self.cols, ((r, c, v * factor) for r, c, v in self.entries)
        )

    def select_columns(self, indices: Sequence[int]) -> SparseMatrix:
        position = {old: new for new, old in enumerate(indices)}
        return SparseMatrix.from_entries(
            self.ring,
            self.rows,
            len(indices),
            ((r, position[c], v) for r, c, v in self.entries if c in position),
        )

    def select_rows(self, indices: Sequence[int]) -> SparseMatrix:
        position = {old: new for new, old in enumerate(indices)}
        return SparseMatrix.from_entries(
            self.ring,
            len(indices),
            self.cols,
            ((position[r], c, v) for r, c, v in self.entries if r in position),
        )

    def to_ring(self, ring: RingTag) -> SparseMatrix:
        if ring is self.ring:
            return self
        return SparseMatrix.from_entries(ring, self.rows, self.cols, self.entries)

    def apply(self, vector: Sequence[int]) -> list[int]:
        if len(vector) != self.cols:
            raise DimensionMismatchError(
                f"Длина вектора {len(vector)} не совпадает с числом столбцов {self.cols}"
            )
        out = [0] * self.rows
        for r, c, v in self.entries:
            out[r] += v * vector[c]
        return [self.ring.normalize(x) for x in out]

    def __repr__(self) -> str:
        return f"SparseMatrix({self.ring.label}, {self.rows}×{self.cols}, nnz={self.nnz})"


def hstack(ring: RingTag, rows: int, blocks: Sequence[SparseMatrix]) -> SparseMatrix:
    entries: list[Entry] = []
    offset = 0
    for block in blocks:
        if block.rows != rows:
            raise DimensionMismatchError(f"Блок {block.shape} не имеет {rows} строк")
        entries.extend((r, c + offset, v) for r, c, v in block.entries)
        offset += block.cols
    return SparseMatrix.from_entries(ring, rows, offset, entries)


def vstack(ring: RingTag, cols: int, blocks: Sequence[SparseMatrix]) -> SparseMatrix:
    entries: list[Entry] = []
    offset = 0
    for block in blocks:
        if block.cols != cols:
            raise DimensionMismatchError(f"Блок {block.shape} не имеет {cols} столбцов")
        entries.extend((r + offset, c, v) for r, c, v in block.entries)
        offset += block.rows
    return SparseMatrix.from_entries(ring, offset, cols, entries)


@dataclass(frozen=True)
class SmithDecomposition:
    """u·a·v = s; u_inv и v_inv хранятся для построения базисов факторов."""

    u: SparseMatrix
    s: SparseMatrix
    v: SparseMatrix
    u_inv: SparseMatrix
    v_inv: SparseMatrix
    invariant_factors: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)
