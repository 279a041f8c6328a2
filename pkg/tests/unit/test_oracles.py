"""Тесты независимых оракулов."""

from __future__ import annotations

import pytest

from stratacode.algebra import RingTag, SparseMatrix
from stratacode.errors import DimensionMismatchError, SizeLimitExceeded
from stratacode.oracles import (
    direct_torus_incidence,
    direct_twisted_boundary,
    exhaustive_homology_gf2,
    fracton_oracle,
    gf2_rank_bitset,
    homology_dims_gf2,
    naive_snf,
    pauli_commutation_oracle,
    small_complex_oracle,
    twisted_torus_oracle,
)

F2 = RingTag.GF2
Z = RingTag.INT


def _triangle() -> SparseMatrix:
    return SparseMatrix.from_dense(F2, [[1, 0, 1], [1, 1, 0], [0, 1, 1]])


class TestBitset:
    def test_rank(self):
        assert gf2_rank_bitset(_triangle()) == 2

    def test_rank_ignores_even_integers(self):
        assert gf2_rank_bitset(SparseMatrix.from_dense(Z, [[2, 1], [4, 1]])) == 1

    def test_homology_dims(self):
        assert homology_dims_gf2({1: _triangle()}, {0: 3, 1: 3}) == {0: 1, 1: 1}


class TestExhaustive:
    def test_triangle(self):
        assert exhaustive_homology_gf2({1: _triangle()}) == {0: 1, 1: 1}

    def test_size_limit(self):
        with pytest.raises(SizeLimitExceeded):
            exhaustive_homology_gf2({1: SparseMatrix.identity(F2, 11)})


class TestNaiveSnf:
    def test_factors(self):
        assert naive_snf(SparseMatrix.from_dense(Z, [[2, 4], [6, 8]])) == [2, 4]

    def test_divisibility_fixup(self):
        assert naive_snf(SparseMatrix.from_dense(Z, [[2, 0], [0, 3]])) == [1, 6]

    def test_zero(self):
        assert naive_snf(SparseMatrix.zeros(Z, 2, 2)) == []

    def test_size_limit(self):
        with pytest.raises(SizeLimitExceeded):
            naive_snf(SparseMatrix.identity(Z, 7))


class TestPauliOracle:
    def test_signs(self):
        assert pauli_commutation_oracle([1, 1, 0], [0, 1, 0]) == -1
        assert pauli_commutation_oracle([1, 1, 0], [1, 1, 0]) == 1

    def test_length_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            pauli_commutation_oracle([1], [])

    def test_size_limit(self):
        with pytest.raises(SizeLimitExceeded):
            pauli_commutation_oracle([0] * 65, [0] * 65)


class TestLatticeOracles:
    def test_direct_matrices_shapes(self):
        assert direct_twisted_boundary(3, 1, 1).shape == (18, 9)
        assert direct_torus_incidence(3).shape == (9, 18)

    def test_untwisted_torus(self):
        value = twisted_torus_oracle(3, 0, 1).value
        assert value["two_term"] is False
        assert (value["homology_0"], value["homology_1"], value["homology_2"]) == (1, 2, 1)

    def test_twisted_torus_two_term(self):
        value = twisted_torus_oracle(4, 1, 1).value
        assert value["two_term"] is True
        assert value["kernel_2"] == 16 - value["rank_2"]

    def test_fracton_control(self):
        value = fracton_oracle(2, control=True).value
        homology = [value[f"homology_{k}"] for k in range(4)]
        assert homology == [1, 3, 3, 1]


class TestSmallComplex:
    def test_rp2_over_z(self):
        boundaries = {2: SparseMatrix.from_dense(Z, [[2]]), 1: SparseMatrix.zeros(Z, 1, 1)}
        value = small_complex_oracle(Z, boundaries, {0: 1, 1: 1, 2: 1}).value
        assert value["homology_0"] == 1
        assert value["homology_1"] == 0
        assert value["torsion_1"] == (2,)
        assert value["rank_2"] == 1

    def test_triangle_over_f2(self):
        value = small_complex_oracle(F2, {1: _triangle()}, {0: 3, 1: 3}).value
        assert (value["homology_0"], value["homology_1"]) == (1, 1)
        assert value["kernel_1"] == 1
