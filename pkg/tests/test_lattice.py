import random
from fractions import Fraction

import pytest

from complexity_one.lattice import (
    NONNEG_NONZERO,
    STRICT_POSITIVE,
    IntMatrix,
    cone_member,
    determinant,
    exists_sign_relation,
    in_row_lattice,
    invariant_factors,
    lattice_kernel,
    same_row_lattice,
    smith_normal_form,
    solve_integer,
)

from _oracles import fm_sign_relation


def random_matrix(rng, rows, cols, bound=5):
    return IntMatrix.from_rows(
        [[rng.randint(-bound, bound) for _ in range(cols)] for _ in range(rows)], cols
    )


class TestSmithNormalForm:
    def test_identity(self):
        _, d, _ = smith_normal_form(IntMatrix.identity(2))
        assert d.entries == ((1, 0), (0, 1))

    def test_reference_2x2(self):
        # oracle: brute row/column reduction gives diag(2, 4)
        u, d, v = smith_normal_form([[2, 4], [6, 8]])
        assert d.diagonal() == (2, 4)
        m = IntMatrix.from_rows([[2, 4], [6, 8]])
        assert u.matmul(m).matmul(v).entries == d.entries

    def test_zero_matrix(self):
        _, d, _ = smith_normal_form(IntMatrix.zero(2, 3))
        assert d.is_zero()

    def test_random_structure(self):
        rng = random.Random(7)
        for _ in range(120):
            m = random_matrix(rng, rng.randint(1, 5), rng.randint(1, 5))
            u, d, v = smith_normal_form(m)
            assert u.matmul(m).matmul(v).entries == d.entries
            assert determinant(u) in (1, -1)
            assert determinant(v) in (1, -1)
            diag = d.diagonal()
            for i in range(m.rows):
                for j in range(m.cols):
                    if i != j:
                        assert d.entries[i][j] == 0
            nz = [x for x in diag if x]
            assert all(x > 0 for x in nz)
            for a, b in zip(nz, nz[1:]):
                assert b % a == 0
            # zeros only after the nonzero prefix
            assert list(diag) == nz + [0] * (len(diag) - len(nz))


class TestLatticeKernel:
    def test_sign_symmetric(self):
        k = lattice_kernel([[1, -1]])
        assert k.cols == 1
        col = k.column(0)
        assert col in ((1, 1), (-1, -1))

    def test_rank_two_contains_reference_vectors(self):
        # oracle: small-vector enumeration finds (2,-1,0) and (1,0,-1)
        k = lattice_kernel([[1, 2, 1]])
        assert k.cols == 2
        basis_rows = k.transpose()
        assert in_row_lattice(basis_rows, (2, -1, 0))
        assert in_row_lattice(basis_rows, (1, 0, -1))

    def test_invertible_square(self):
        assert lattice_kernel([[2, 1], [1, 1]]).cols == 0

    def test_kernel_exactness_and_rank_sum(self):
        rng = random.Random(11)
        for _ in range(80):
            m = random_matrix(rng, rng.randint(1, 4), rng.randint(1, 5))
            k = lattice_kernel(m)
            for j in range(k.cols):
                assert m.matvec(k.column(j)) == (0,) * m.rows
            r = len(invariant_factors(m))
            assert r + k.cols == m.cols
            if k.cols:
                stacked = m.stack(k.transpose())
                assert len(invariant_factors(stacked)) == m.cols

    def test_saturation(self):
        # the kernel of [2, 2] is generated by (1, -1), not (2, -2)
        k = lattice_kernel([[2, 2]])
        assert k.cols == 1
        assert sorted(abs(x) for x in k.column(0)) == [1, 1]


class TestSolveInteger:
    def test_solvable(self):
        m = IntMatrix.from_rows([[2, 0], [0, 3]])
        assert solve_integer(m, (4, 9)) == (2, 3)

    def test_unsolvable_divisibility(self):
        m = IntMatrix.from_rows([[2, 0], [0, 3]])
        assert solve_integer(m, (1, 3)) is None

    def test_random_roundtrip(self):
        rng = random.Random(3)
        for _ in range(60):
            m = random_matrix(rng, rng.randint(1, 4), rng.randint(1, 4))
            x = tuple(rng.randint(-4, 4) for _ in range(m.cols))
            b = m.matvec(x)
            sol = solve_integer(m, b)
            assert sol is not None
            assert m.matvec(sol) == b

    def test_row_lattice_comparison(self):
        a = IntMatrix.from_rows([[1, 1], [0, 2]])
        b = IntMatrix.from_rows([[1, -1], [0, 2]])
        assert same_row_lattice(a, b)
        assert not same_row_lattice(a, IntMatrix.from_rows([[1, 1]], 2))


class TestSignRelations:
    def test_strict_opposite_pair(self):
        out = exists_sign_relation([[1, -1]], STRICT_POSITIVE)
        assert out.feasible and out.witness == (1, 1)

    def test_nonneg_positive_weights_infeasible(self):
        out = exists_sign_relation([[1, 1]], NONNEG_NONZERO)
        assert not out.feasible
        assert out.verify(IntMatrix.from_rows([[1, 1]]))

    def test_strict_triangle(self):
        # oracle: grid search over small xi finds (1, 1, 1)
        out = exists_sign_relation([[1, 0, -1], [0, 1, -1]], STRICT_POSITIVE)
        assert out.feasible and out.witness == (1, 1, 1)

    def test_witnesses_verify_and_match_fm_oracle(self):
        rng = random.Random(23)
        for _ in range(150):
            h, n = rng.randint(1, 3), rng.randint(1, 4)
            m = random_matrix(rng, h, n, bound=3)
            for regime in (STRICT_POSITIVE, NONNEG_NONZERO):
                out = exists_sign_relation(m, regime)
                assert out.verify(m)
                assert out.feasible == fm_sign_relation(
                    [list(r) for r in m.entries], regime
                )

    def test_strict_implies_nonneg(self):
        rng = random.Random(29)
        for _ in range(120):
            m = random_matrix(rng, rng.randint(1, 3), rng.randint(1, 4), bound=3)
            if exists_sign_relation(m, STRICT_POSITIVE).feasible:
                assert exists_sign_relation(m, NONNEG_NONZERO).feasible


class TestConeMember:
    def test_origin(self):
        out = cone_member([Fraction(0), Fraction(0)], [[1, 2], [0, 1]])
        assert out.member and all(c == 0 for c in out.coefficients)

    def test_quadrant_inside(self):
        out = cone_member([Fraction(1), Fraction(1)], [[1, 0], [0, 1]])
        assert out.member and out.coefficients == (1, 1)

    def test_quadrant_outside_with_separator(self):
        # oracle: exact LP on the quadrant
        out = cone_member([Fraction(-1), Fraction(0)], [[1, 0], [0, 1]])
        assert not out.member
        assert out.separator == (1, 0)

    def test_random_witnesses_verify(self):
        rng = random.Random(31)
        for _ in range(120):
            d, g = rng.randint(1, 3), rng.randint(1, 4)
            gens = random_matrix(rng, d, g, bound=3)
            point = [Fraction(rng.randint(-6, 6), rng.randint(1, 3)) for _ in range(d)]
            out = cone_member(point, gens)
            assert out.verify(point, gens)

    def test_members_built_from_combinations(self):
        rng = random.Random(37)
        for _ in range(60):
            d, g = rng.randint(1, 3), rng.randint(1, 4)
            gens = random_matrix(rng, d, g, bound=3)
            coeffs = [Fraction(rng.randint(0, 5), rng.randint(1, 3)) for _ in range(g)]
            point = [
                sum(gens.entries[i][j] * coeffs[j] for j in range(g)) for i in range(d)
            ]
            out = cone_member(point, gens)
            assert out.member


class TestIntMatrixValidation:
    def test_rejects_floats(self):
        with pytest.raises(TypeError):
            IntMatrix.from_rows([[1.0, 2]])

    def test_rejects_bools(self):
        with pytest.raises(TypeError):
            IntMatrix.from_rows([[True, 2]])

    def test_rejects_ragged(self):
        with pytest.raises(ValueError):
            IntMatrix.from_rows([[1, 2], [3]])
