"""Точная разреженная линейная алгебра над GF(2) и Z."""

from __future__ import annotations

from collections.abc import Sequence

from stratacode.algebra import gf2, integer
from stratacode.algebra.matrix import RingTag, SmithDecomposition, SparseMatrix, hstack, vstack
from stratacode.errors import RingMismatchError


def rank(m: SparseMatrix) -> int:
    return gf2.rank(m) if m.ring is RingTag.GF2 else integer.rank(m)


def rref_gf2(m: SparseMatrix) -> tuple[SparseMatrix, list[int]]:
    return gf2.rref(m)


def kernel_basis(m: SparseMatrix) -> SparseMatrix:
    return gf2.kernel_basis(m) if m.ring is RingTag.GF2 else integer.kernel_basis(m)


def image_basis(m: SparseMatrix) -> SparseMatrix:
    return gf2.image_basis(m) if m.ring is RingTag.GF2 else integer.image_basis(m)


def smith_normal_form(m: SparseMatrix) -> SmithDecomposition:
    return integer.smith_normal_form(m)


def in_span(m: SparseMatrix, v: Sequence[int]) -> list[int] | None:
    return gf2.in_span(m, v) if m.ring is RingTag.GF2 else integer.in_span(m, v)


def cokernel_invariants(m: SparseMatrix) -> tuple[int, list[int]]:
    return integer.cokernel_invariants(m)


def require_ring(m: SparseMatrix, ring: RingTag) -> None:
    if m.ring is not ring:
        raise RingMismatchError(f"Ожидалось кольцо {ring.label}, получено {m.ring.label}")


__all__ = [
    "RingTag",
    "SmithDecomposition",
    "SparseMatrix",
    "cokernel_invariants",
    "hstack",
    "image_basis",
    "in_span",
    "kernel_basis",
    "rank",
    "require_ring",
    "rref_gf2",
    "smith_normal_form",
    "vstack",
]
