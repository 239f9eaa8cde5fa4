import random
from itertools import combinations

import pytest

from core.algebra.laurent import LaurentPoly
from core.algebra.linear import (
    adapted_basis,
    determinant,
    intersection_with_coordinates,
    lattice_intersection,
    module_intersection_laurent,
    rank_kernel_image,
    solve_in_ring,
)
from core.algebra.matrix import Matrix
from core.algebra.rational_function import RationalFunction
from core.algebra.rings import RingTag
from core.algebra.snf import image_basis, kernel_basis, snf
from domain.exceptions.computation_errors import BasisCompletionError, IntegralityError

t = LaurentPoly.monomial(1, 1)


def _random_integer_matrix(rng: random.Random) -> Matrix:
    m, n = rng.randint(0, 8), rng.randint(0, 8)
    rows = [[rng.choice((0, 0, 0, 1, -1, 2, -3, 5)) for _ in range(n)] for _ in range(m)]
    return Matrix(rows, RingTag.Z, n)


def _random_laurent(rng: random.Random) -> LaurentPoly:
    if rng.random() < 0.5:
        return LaurentPoly.zero()
    return LaurentPoly.from_terms({rng.randint(-1, 1): rng.randint(-2, 2) for _ in range(rng.randint(1, 2))})


def _random_laurent_matrix(rng: random.Random) -> Matrix:
    m, n = rng.randint(0, 6), rng.randint(0, 6)
    return Matrix([[_random_laurent(rng) for _ in range(n)] for _ in range(m)], RingTag.Z_LAURENT, n)


def _minor_rank(matrix: Matrix) -> int:
    """Largest k with a nonzero k x k minor."""
    m, n = matrix.shape
    for k in range(min(m, n), 0, -1):
        for rows in combinations(range(m), k):
            for cols in combinations(range(n), k):
                if matrix.select_rows(rows).select_columns(cols).determinant():
                    return k
    return 0


def _random_rational(rng: random.Random) -> RationalFunction:
    numerator = _random_laurent(rng) or LaurentPoly.monomial(rng.choice((-3, -1, 2)), rng.randint(-2, 2))
    denominator = LaurentPoly.from_terms({0: rng.choice((-2, 1, 3)), rng.randint(1, 2): rng.choice((-1, 1, 2))})
    return RationalFunction(numerator, denominator)


class TestLaurentPoly:
    def test_parse_and_print(self):
        p = LaurentPoly.parse("t - 1")
        assert p == t - 1
        assert str(p) == "t - 1"
        assert LaurentPoly.parse("2*t^-1 + 3") == LaurentPoly.from_terms({-1: 2, 0: 3})

    def test_monomials_are_units(self):
        assert LaurentPoly.monomial(-1, 3).is_unit()
        assert LaurentPoly.monomial(2, 3).is_unit(integral=False)
        assert not LaurentPoly.monomial(2, 3).is_unit()
        assert not (t - 1).is_unit(integral=False)

    def test_bar_and_augment(self):
        p = LaurentPoly.from_terms({2: 3, -1: -1})
        assert p.bar() == LaurentPoly.from_terms({-2: 3, 1: -1})
        assert p.augment() == 2

    def test_unit_normal_strips_t_powers(self):
        p = LaurentPoly.from_terms({3: -2, 4: 2})
        unit, normal = p.unit_normal(integral=False)
        assert unit * normal == p
        assert normal == t - 1


class TestRationalFunction:
    def test_normalize_unit_strips_sign_and_t_power(self):
        raw = RationalFunction(-t, t - 1)
        canonical = raw.normalize_unit()
        assert canonical == RationalFunction(1, t - 1)
        assert str(canonical) == "(t - 1)^-1"

    def test_inverse(self):
        value = RationalFunction(t + 1, t - 1)
        assert value * value.inverse() == RationalFunction.one()

    def test_canonical_form_is_idempotent_and_multiplicative(self):
        rng = random.Random(13)
        for _ in range(100):
            a, b = _random_rational(rng), _random_rational(rng)
            for rational_scalars in (False, True):
                canon_a = a.normalize_unit(rational_scalars)
                canon_b = b.normalize_unit(rational_scalars)
                assert canon_a.normalize_unit(rational_scalars) == canon_a
                assert (a * b).normalize_unit(rational_scalars) == canon_a * canon_b


class TestSmithNormalForm:
    def test_known_integer_factors(self):
        m = Matrix([[2, 4, 4], [-6, 6, 12], [10, -4, -16]], RingTag.Z)
        result = snf(m, verify=True)
        assert result.invariant_factors == [2, 6, 12]

    def test_small_integer_factors(self):
        result = snf(Matrix([[2, 4], [6, 8]], RingTag.Z), verify=True)
        assert result.invariant_factors == [2, 4]

    def test_random_integer_certificates(self):
        rng = random.Random(7)
        for _ in range(100):
            m = _random_integer_matrix(rng)
            result = snf(m, verify=True)
            assert result.U @ m @ result.V == result.D
            if m.nrows:
                assert result.U.determinant() in (1, -1)
            if m.ncols:
                assert result.V.determinant() in (1, -1)

    def test_random_laurent_certificates(self):
        rng = random.Random(11)
        for _ in range(100):
            m = _random_laurent_matrix(rng)
            result = snf(m, verify=True)
            assert result.U @ m.with_ring(result.D.ring) @ result.V == result.D
            for unimodular in (result.U, result.V):
                if unimodular.nrows:
                    det = unimodular.determinant()
                    assert det.is_laurent()
                    assert det.as_laurent().is_unit(integral=False)

    def test_empty_shapes(self):
        for shape in ((0, 3), (3, 0), (0, 0)):
            result = snf(Matrix.zeros(*shape, RingTag.Z), verify=True)
            assert result.rank == 0

    def test_field_input_rejected(self):
        with pytest.raises(ValueError):
            snf(Matrix([[1]], RingTag.Q))

    def test_kernel_and_image(self):
        m = Matrix([[1, 2, 3], [2, 4, 6]], RingTag.Z)
        kernel = kernel_basis(m)
        assert kernel.ncols == 2
        assert (m @ kernel).is_zero()
        assert image_basis(m).ncols == 1


class TestLinear:
    def test_rank_kernel_image_over_field(self):
        m = Matrix([[1, 1], [t, t]], RingTag.Z_LAURENT)
        result = rank_kernel_image(m)
        assert result.rank == 1
        assert result.kernel.ncols == 1

    def test_solve_in_ring_detects_fractions(self):
        m = Matrix([[2, 0], [0, 1]], RingTag.Z)
        assert solve_in_ring(m, [4, 3], RingTag.Z, "test") == [2, 3]
        with pytest.raises(IntegralityError):
            solve_in_ring(m, [1, 0], RingTag.Z, "test")

    def test_intersection_coordinates(self):
        a = Matrix.from_columns([[1, 0, 0], [0, 1, 0]], 3, RingTag.Z)
        b = Matrix.from_columns([[0, 1, 0], [0, 0, 1]], 3, RingTag.Z)
        meet = intersection_with_coordinates(a, b)
        assert meet.basis.ncols == 1
        assert meet.exact
        assert a @ meet.left == meet.basis
        assert b @ meet.right == meet.basis
        assert meet.basis.column(0) in ((0, 1, 0), (0, -1, 0))

    def test_adapted_basis_completes_summands(self):
        lattice = Matrix.identity(3, RingTag.Z)
        sub = Matrix.from_columns([[1, 1, 0]], 3, RingTag.Z)
        completed = adapted_basis(lattice, sub)
        assert completed.split == 1
        assert completed.basis.determinant() in (1, -1)
        coordinates = completed.coordinates([1, 1, 0])
        assert coordinates[1:] == [0, 0]

    def test_adapted_basis_rejects_non_summands(self):
        lattice = Matrix.identity(2, RingTag.Z)
        sub = Matrix.from_columns([[2, 0]], 2, RingTag.Z)
        with pytest.raises(BasisCompletionError):
            adapted_basis(lattice, sub)

    def test_rank_matches_minors(self):
        rng = random.Random(19)
        for _ in range(60):
            m, n = rng.randint(1, 5), rng.randint(1, 5)
            if rng.random() < 0.5:
                rows = [[rng.choice((0, 0, 1, -1, 2)) for _ in range(n)] for _ in range(m)]
                matrix = Matrix(rows, RingTag.Z, n)
            else:
                matrix = Matrix([[_random_laurent(rng) for _ in range(n)] for _ in range(m)], RingTag.Z_LAURENT, n)
            result = rank_kernel_image(matrix)
            assert result.rank == _minor_rank(matrix)
            assert result.rank + result.kernel.ncols == n
            assert (matrix.with_ring(result.kernel.ring) @ result.kernel).is_zero()

    def test_lattice_intersection(self):
        e1 = Matrix.from_columns([[1, 0]], 2, RingTag.Z)
        e2 = Matrix.from_columns([[0, 1]], 2, RingTag.Z)
        assert lattice_intersection(e1, e2).ncols == 0
        assert lattice_intersection(e1, e1).column(0) in ((1, 0), (-1, 0))
        doubled = Matrix.from_columns([[2, 0]], 2, RingTag.Z)
        meet = lattice_intersection(doubled, e1)
        assert meet.ncols == 1
        assert meet.column(0) in ((2, 0), (-2, 0))

    def test_random_lattice_intersections_lie_in_both(self):
        rng = random.Random(23)
        for _ in range(40):
            a = Matrix([[rng.randint(-2, 2) for _ in range(2)] for _ in range(4)], RingTag.Z, 2)
            b = Matrix([[rng.randint(-2, 2) for _ in range(3)] for _ in range(4)], RingTag.Z, 3)
            meet = lattice_intersection(a, b)
            assert meet.ncols == a.rank() + b.rank() - a.hstack(b).rank()
            for column in meet.columns():
                solve_in_ring(a, column, RingTag.Z, "first span")
                solve_in_ring(b, column, RingTag.Z, "second span")

    def test_module_intersection_laurent(self):
        first = Matrix.from_columns([[t - 1, 0]], 2, RingTag.Q_LAURENT)
        second = Matrix.from_columns([[1, 0]], 2, RingTag.Q_LAURENT)
        meet = module_intersection_laurent(first, second)
        assert meet.ncols == 1
        entry, other = meet.column(0)
        assert other == 0
        assert LaurentPoly.coerce(entry).unit_normal(integral=False)[1] == t - 1
        disjoint = Matrix.from_columns([[0, 1]], 2, RingTag.Q_LAURENT)
        assert module_intersection_laurent(second, disjoint).ncols == 0

    def test_determinant(self):
        assert determinant(Matrix.identity(3, RingTag.Q)) == 1
        assert determinant(Matrix([[t, 0], [0, t.inverse()]], RingTag.Q_RATFUNC)) == RationalFunction.one()
        assert determinant(Matrix([[1, 1], [1, 2]], RingTag.Z)) == 1
