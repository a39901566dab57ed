import cmath
from fractions import Fraction

import pytest

from complexity_one.errors import ExceptionalPoint, NotNonProper
from complexity_one.lattice import IntMatrix
from complexity_one.local_model import (
    FiberKind,
    LocalModel,
    classify_fiber,
    exceptional_sheet_member,
    fiber_orbit_check,
    moment_image,
    submersion_check,
    submersion_scan,
    surjectivity_check,
    trivializing_map,
)
from complexity_one.rep import SubtorusRep, is_exceptional_orbit


def image_rep(rows):
    return SubtorusRep(len(rows[0]), "image", IntMatrix.from_rows(rows))


def kernel_rep(row):
    return SubtorusRep(len(row), "kernel", IntMatrix.from_rows([row]))


def linear_model(row):
    return LocalModel.linear(kernel_rep(row))


class TestMomentImage:
    def test_first_quadrant(self):
        model = LocalModel.linear(image_rep([[1, 0], [0, 1]]))
        img = moment_image(model)
        assert img.contains([1, 2])
        assert img.contains([0, 0])
        assert not img.contains([-1, 0])
        assert not img.contains([1, Fraction(-1, 7)])

    def test_whole_line(self):
        model = LocalModel.linear(image_rep([[1, -1]]))
        img = moment_image(model)
        for x in (-5, 0, Fraction(7, 3)):
            assert img.contains([x])

    def test_shifted_half_plane(self):
        rep = SubtorusRep(1, "image", IntMatrix.from_rows([[1]]))
        model = LocalModel(
            2, rep, (Fraction(1), Fraction(0)), IntMatrix.from_rows([[0, 1]])
        )
        img = moment_image(model)
        assert img.contains([1, 5])
        assert img.contains([Fraction(3, 2), -2])
        assert not img.contains([Fraction(1, 2), 0])

    def test_membership_witnesses_verify(self):
        model = LocalModel.linear(image_rep([[1, 0], [0, 1]]))
        img = moment_image(model)
        out = img.membership([2, 3])
        assert out.member and out.verify([2, 3], img._cone_columns())


class TestClassifyFiber:
    def test_single_orbit(self):
        assert classify_fiber(LocalModel.linear(image_rep([[1, 1]]))) is FiberKind.SINGLE_ORBIT
        assert (
            classify_fiber(LocalModel.linear(image_rep([[1, 0], [0, 1]])))
            is FiberKind.SINGLE_ORBIT
        )

    def test_infinitely_many(self):
        assert (
            classify_fiber(LocalModel.linear(image_rep([[1, -1]])))
            is FiberKind.INFINITELY_MANY_ORBITS
        )


class TestTrivializingMap:
    def test_at_origin(self):
        rep = kernel_rep([1, 1])
        model = LocalModel(
            2, rep, (Fraction(2), Fraction(0)), IntMatrix.from_rows([[0, 1]])
        )
        q = trivializing_map(model, [0, 0])
        assert q.moment == pytest.approx((2.0, 0.0))
        assert q.monomial == 0

    def test_direct_formula(self):
        model = linear_model([1, 1])
        q = trivializing_map(model, [1, 1])
        assert q.moment == pytest.approx((0.0,))
        assert q.monomial == pytest.approx(1.0)

    def test_group_invariance_of_phases(self):
        model = linear_model([1, 1])
        for theta in (0.3, 1.2, 2.9):
            z = (cmath.exp(1j * theta), cmath.exp(-1j * theta))
            q = trivializing_map(model, z)
            assert q.moment == pytest.approx((0.0,), abs=1e-12)
            assert q.monomial == pytest.approx(1.0, abs=1e-12)

    def test_affine_block_offsets(self):
        rep = kernel_rep([1, 1])
        model = LocalModel(
            2, rep, (Fraction(0), Fraction(0)), IntMatrix.from_rows([[0, 1]])
        )
        q = trivializing_map(model, [1, 1], nu=[Fraction(3)])
        assert q.moment[1] == pytest.approx(3.0)

    def test_proper_model_rejected(self):
        with pytest.raises(NotNonProper):
            trivializing_map(LocalModel.linear(image_rep([[1, 1]])), [1, 1])


class TestExceptionalSheet:
    def test_no_zeros(self):
        assert not exceptional_sheet_member(linear_model([1, 1, 0]), [2, 1, 1]).on_sheet

    def test_zero_with_positive_exponent(self):
        assert exceptional_sheet_member(linear_model([1, 1, 0]), [0, 1, 0]).on_sheet

    def test_zero_only_in_toric_block(self):
        assert not exceptional_sheet_member(linear_model([1, 1, 0]), [1, 1, 0]).on_sheet

    def test_exceptional_orbits_lie_on_sheet(self):
        rep = kernel_rep([1, 2, 1])
        model = LocalModel.linear(rep)
        for mask in range(8):
            support = [j for j in range(3) if mask & (1 << j)]
            if is_exceptional_orbit(rep, support):
                z = [1 if j in support else 0 for j in range(3)]
                assert exceptional_sheet_member(model, z).on_sheet


class TestFiberOrbitCheck:
    @pytest.mark.parametrize("row", [[1, 1], [1, 2, 1], [1, 1, 0]])
    def test_models_pass(self, row):
        report = fiber_orbit_check(linear_model(row), 600, seed=0, tol=1e-8)
        assert report.passes == report.checks
        assert report.invariance_max_error < 1e-10
        assert report.pair_max_distance < 1e-8

    def test_deterministic(self):
        a = fiber_orbit_check(linear_model([1, 2]), 300, seed=5)
        b = fiber_orbit_check(linear_model([1, 2]), 300, seed=5)
        assert a == b


class TestSurjectivity:
    @pytest.mark.parametrize("row", [[1, 1], [1, 2, 1], [1, 1, 0], [2, 1]])
    def test_preimages_found(self, row):
        report = surjectivity_check(linear_model(row), 150, seed=2, tol=1e-8)
        assert report.all_found
        assert report.max_error < 1e-8


class TestSubmersion:
    def test_interior_witness(self):
        report = submersion_check(linear_model([1, 1]), [1, 1])
        assert report.rank == report.full_rank == 3
        assert report.witness == (1 + 0j, 1 + 0j)
        assert report.annihilation_error < 1e-12
        assert report.monomial_derivative == pytest.approx(2.0)

    def test_boundary_witness(self):
        report = submersion_check(linear_model([1, 2]), [0, 1])
        assert report.rank == report.full_rank == 3
        assert report.witness == (1 + 0j, 0j)
        assert report.monomial_derivative == pytest.approx(1.0)
        assert report.boundary_index == 0

    def test_exceptional_point_rejected(self):
        with pytest.raises(ExceptionalPoint):
            submersion_check(linear_model([2, 1]), [0, 1])

    def test_scan_clean(self):
        for row in ([1, 1], [1, 2, 1], [1, 1, 0]):
            report = submersion_scan(linear_model(row), 2000, seed=1)
            assert report.rank_failures == 0
            assert report.max_annihilation_error < 1e-9
            assert report.min_monomial_derivative > 0


class TestModelValidation:
    def test_dimension_bookkeeping(self):
        rep = kernel_rep([1, 1])
        with pytest.raises(ValueError):
            LocalModel(2, rep, (Fraction(0),), IntMatrix.from_rows([[0, 1]]))
        with pytest.raises(ValueError):
            LocalModel(
                3, rep, (Fraction(0),) * 3, IntMatrix.from_rows([[0, 1, 0], [0, 2, 0]])
            )

    def test_embedding_is_orthogonal_complement(self):
        rep = kernel_rep([1, 1])
        model = LocalModel(
            3,
            rep,
            (Fraction(0),) * 3,
            IntMatrix.from_rows([[1, 0, 1], [0, 1, 0]]),
        )
        emb = model.embedding
        assert emb.cols == 1
        for row in model.annihilator_basis.entries:
            assert sum(row[i] * emb.column(0)[i] for i in range(3)) == 0
