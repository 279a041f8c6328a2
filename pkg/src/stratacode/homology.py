"""Гомологии и когомологии колимит-комплекса с представителями классов."""

from __future__ import annotations

from dataclasses import dataclass

from stratacode.algebra import RingTag, SparseMatrix, gf2, integer
from stratacode.colimit import ColimitComplex
from stratacode.errors import ColimitError
from stratacode.logging import get_logger, log_duration
from stratacode.settings import get_settings

logger = get_logger(__name__)


@dataclass(frozen=True)
class HomologyResult:
    degree: int
    ring: RingTag
    free_rank: int
    invariant_factors: tuple[int, ...]
    cycle_reps: SparseMatrix

    @property
    def is_zero(self) -> bool:
        return self.free_rank == 0 and not self.invariant_factors


@dataclass(frozen=True)
class CohomologyResult:
    degree: int
    ring: RingTag
    free_rank: int
    invariant_factors: tuple[int, ...]
    cocycle_reps: SparseMatrix

    @property
    def is_zero(self) -> bool:
        return self.free_rank == 0 and not self.invariant_factors


@dataclass(frozen=True)
class UctDegree:
    degree: int
    hom_part: int
    ext_part: tuple[int, ...]
    observed_free: int
    observed_factors: tuple[int, ...]

    @property
    def consistent(self) -> bool:
        return self.observed_free == self.hom_part and sorted(self.observed_factors) == sorted(
            self.ext_part
        )


@dataclass(frozen=True)
class UctReport:
    ring: RingTag
    degrees: tuple[UctDegree, ...]

    @property
    def consistent(self) -> bool:
        return all(row.consistent for row in self.degrees)


@dataclass(frozen=True)
class BettiRow:
    degree: int
    quotient_rank: int
    free_rank: int
    invariant_factors: tuple[int, ...]
    cohomology_free: int
    cohomology_factors: tuple[int, ...]


def _classes_gf2(
    outgoing: SparseMatrix, incoming: SparseMatrix
) -> tuple[int, tuple[int, ...], SparseMatrix]:
    cycles = gf2.kernel_basis(outgoing)
    if cycles.cols + gf2.rank(outgoing) != outgoing.cols:
        raise ColimitError(
            f"Нарушен баланс ранга и дефекта: {cycles.cols} + rank ≠ {outgoing.cols}"
        )
    boundaries = gf2.image_basis(incoming)
    chosen = gf2.independent_columns(boundaries, cycles)
    return len(chosen), (), cycles.select_columns(chosen)


def _classes_int(
    outgoing: SparseMatrix, incoming: SparseMatrix
) -> tuple[int, tuple[int, ...], SparseMatrix]:
    cycles = integer.kernel_basis(outgoing)
    z = cycles.cols
    if z == 0:
        return 0, (), cycles
    lattice = integer.smith_normal_form(cycles)
    if any(f != 1 for f in lattice.invariant_factors):
        raise ColimitError("Базис ядра не насыщен")
    lifted = lattice.u @ incoming
    if not lifted.select_rows(range(z, lifted.rows)).is_zero():
        raise ColimitError("Образ границы не лежит в ядре")
    coords = lattice.v @ lifted.select_rows(range(z))

    presentation = integer.smith_normal_form(coords)
    factors = presentation.invariant_factors
    generators = cycles @ presentation.u_inv
    free = list(range(len(factors), z))
    torsion = [i for i, f in enumerate(factors) if f > 1]
    reps = generators.select_columns(free + torsion)
    return len(free), tuple(factors[i] for i in torsion), reps


def _classes(
    ring: RingTag, outgoing: SparseMatrix, incoming: SparseMatrix
) -> tuple[int, tuple[int, ...], SparseMatrix]:
    if ring is RingTag.GF2:
        return _classes_gf2(outgoing, incoming)
    return _classes_int(outgoing, incoming)


def homology_at(c: ColimitComplex, k: int) -> HomologyResult:
    free, factors, reps = _classes(c.ring, c.boundary(k), c.boundary(k + 1))
    return HomologyResult(k, c.ring, free, factors, reps)


def cohomology_at(c: ColimitComplex, k: int) -> CohomologyResult:
    free, factors, reps = _classes(c.ring, c.boundary(k + 1).T, c.boundary(k).T)
    return CohomologyResult(k, c.ring, free, factors, reps)


def uct_check(c: ColimitComplex) -> UctReport:
    rows: list[UctDegree] = []
    previous: HomologyResult | None = None
    for k in range(0, c.top_degree + 1):
        current = homology_at(c, k)
        observed = cohomology_at(c, k)
        ext = previous.invariant_factors if previous is not None else ()
        rows.append(
            UctDegree(
                degree=k,
                hom_part=current.free_rank,
                ext_part=ext,
                observed_free=observed.free_rank,
                observed_factors=observed.invariant_factors,
            )
        )
        previous = current
    report = UctReport(c.ring, tuple(rows))
    if not report.consistent:
        logger.warning(
            "uct_inconsistent",
            degrees=[row.degree for row in report.degrees if not row.consistent],
        )
    return report


def betti_row(c: ColimitComplex, k: int) -> BettiRow:
    h, co = homology_at(c, k), cohomology_at(c, k)
    return BettiRow(
        degree=k,
        quotient_rank=c.quotient_rank(k),
        free_rank=h.free_rank,
        invariant_factors=h.invariant_factors,
        cohomology_free=co.free_rank,
        cohomology_factors=co.invariant_factors,
    )


def betti_table(c: ColimitComplex) -> list[BettiRow]:
    degrees = list(range(0, c.top_degree + 1))
    settings = get_settings()
    with log_duration(logger, "homology_table", ring=c.ring.value, degrees=len(degrees)):
        if settings.parallel and len(degrees) > 1:
            with settings.executor() as pool:
                return list(pool.map(lambda k: betti_row(c, k), degrees))
        return [betti_row(c, k) for k in degrees]


def euler_characteristic(rows: list[BettiRow]) -> tuple[int, int]:
    """Эйлерова характеристика по рангам цепей и по свободным рангам гомологий."""
    chains = sum((-1) ** row.degree * row.quotient_rank for row in rows)
    betti = sum((-1) ** row.degree * row.free_rank for row in rows)
    return chains, betti
