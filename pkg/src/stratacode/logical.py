"""CSS-словарь: проверочные матрицы, логические операторы, спаривание и расстояние."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from enum import StrEnum

from stratacode.algebra import RingTag, SparseMatrix, gf2, require_ring
from stratacode.colimit import ColimitComplex
from stratacode.errors import DegeneratePairing, DimensionMismatchError
from stratacode.homology import cohomology_at, homology_at
from stratacode.logging import get_logger, log_duration
from stratacode.settings import get_settings

logger = get_logger(__name__)


class PauliKind(StrEnum):
    Z = "Z"
    X = "X"


@dataclass(frozen=True)
class CSSCode:
    qubit_degree: int
    n: int
    hz: SparseMatrix
    hx: SparseMatrix
    k_logical: int
    logical_z: SparseMatrix
    logical_x: SparseMatrix
    raw_stabilizers: tuple[int, int]

    @property
    def parameters(self) -> tuple[int, int]:
        return self.n, self.k_logical

    def pairing(self) -> PairingMatrix:
        return _pair(self.qubit_degree, self.logical_x, self.logical_z)


@dataclass(frozen=True)
class PairingMatrix:
    degree: int
    matrix: SparseMatrix
    cocycles: SparseMatrix
    cycles: SparseMatrix

    @property
    def is_identity(self) -> bool:
        return (
            self.matrix.rows == self.matrix.cols
            and self.matrix == SparseMatrix.identity(self.matrix.ring, self.matrix.rows)
        )


@dataclass(frozen=True)
class DistanceResult:
    kind: PauliKind
    distance: int | None
    upper_bound: int | None
    exact: bool
    explored: int = 0
    reason: str | None = None


def css_extract(c: ColimitComplex, k: int, *, reduce_stabilizers: bool = False) -> CSSCode:
    require_ring(c.boundary(k), RingTag.GF2)
    hz = c.boundary(k + 1).T
    hx = c.boundary(k)
    raw = (hz.rows, hx.rows)
    if reduce_stabilizers:
        hz, hx = gf2.row_basis(hz), gf2.row_basis(hx)
    cycles, cocycles = homology_at(c, k), cohomology_at(c, k)
    code = CSSCode(
        qubit_degree=k,
        n=c.quotient_rank(k),
        hz=hz,
        hx=hx,
        k_logical=cycles.free_rank,
        logical_z=cycles.cycle_reps,
        logical_x=cocycles.cocycle_reps,
        raw_stabilizers=raw,
    )
    logger.debug("css_code_extracted", degree=k, n=code.n, k_logical=code.k_logical)
    return code


def _pair(degree: int, cocycles: SparseMatrix, cycles: SparseMatrix) -> PairingMatrix:
    return PairingMatrix(degree, cocycles.T @ cycles, cocycles, cycles)


def pairing_matrix(c: ColimitComplex, k: int) -> PairingMatrix:
    return _pair(k, cohomology_at(c, k).cocycle_reps, homology_at(c, k).cycle_reps)


def dualize_bases(p: PairingMatrix) -> PairingMatrix:
    require_ring(p.matrix, RingTag.GF2)
    if p.matrix.rows != p.matrix.cols:
        raise DimensionMismatchError(
            f"Спаривание {p.matrix.rows}×{p.matrix.cols} не квадратное: базисы неполны"
        )
    inverse = gf2.inverse(p.matrix)
    if inverse is None:
        raise DegeneratePairing(f"Матрица спаривания в степени {p.degree} вырождена над F2")
    return _pair(p.degree, p.cocycles @ inverse.T, p.cycles)


def commutation_sign(alpha: Sequence[int], beta: Sequence[int]) -> int:
    if len(alpha) != len(beta):
        raise DimensionMismatchError(f"Длины векторов различаются: {len(alpha)} и {len(beta)}")
    overlap = sum((a & 1) * (b & 1) for a, b in zip(alpha, beta, strict=True))
    return -1 if overlap % 2 else 1


def _bits(m: SparseMatrix) -> list[int]:
    """Столбцы матрицы как битовые маски Python-int."""
    out = [0] * m.cols
    for r, c, _ in m.entries:
        out[c] |= 1 << r
    return out


def min_distance(
    code: CSSCode, kind: PauliKind = PauliKind.Z, budget: int | None = None
) -> DistanceResult:
    if budget is None:
        budget = get_settings().distance_budget
    if code.k_logical == 0:
        return DistanceResult(kind, None, None, exact=True, reason="no logical operators")

    if kind is PauliKind.Z:
        classes, stabilizers = code.logical_z, code.hz
    else:
        classes, stabilizers = code.logical_x, code.hx
    class_bits = _bits(classes)
    stab_bits = _bits(gf2.row_basis(stabilizers).T)
    k, r = len(class_bits), len(stab_bits)
    candidates = ((1 << k) - 1) << r

    if candidates > budget:
        bound = min(v.bit_count() for v in class_bits)
        logger.info(
            "distance_budget_exceeded", kind=kind.value, candidates=candidates, budget=budget
        )
        return DistanceResult(
            kind, None, bound, exact=False, reason=f"{candidates} > budget {budget}"
        )

    generators = class_bits + stab_bits
    class_mask = (1 << k) - 1
    best: int | None = None
    with log_duration(logger, "distance_search", kind=kind.value, candidates=candidates):
        vector, selection = 0, 0
        for step in range(1, 1 << (k + r)):
            bit = (step & -step).bit_length() - 1
            vector ^= generators[bit]
            selection ^= 1 << bit
            if selection & class_mask:
                weight = vector.bit_count()
                if best is None or weight < best:
                    best = weight
    return DistanceResult(kind, best, best, exact=True, explored=candidates)
