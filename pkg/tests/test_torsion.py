import random

import pytest

from application.services.torsion_service import parse_homology_basis, pivot_columns
from core.algebra.laurent import LaurentPoly
from core.algebra.matrix import Matrix
from core.algebra.rational_function import RationalFunction
from core.algebra.rings import RingTag
from domain.entities.chain_complex_model import ChainComplex
from domain.entities.torsion_model import Ambiguity
from domain.exceptions.computation_errors import HomologyBasisError

t = LaurentPoly.monomial(1, 1)


def test_example_two_torsion(torsion_service, ex2):
    value = torsion_service.torsion_of_diagram(ex2)
    assert value.acyclic
    assert value.ambiguity is Ambiguity.SIGNED_T_POWERS
    assert value.representative == RationalFunction(1, t - 1)
    assert value.raw == RationalFunction(-t, t - 1)
    assert str(value) == "(t - 1)^-1 up to ±t^k"


def test_random_pivots_and_rescaled_bases_agree(torsion_service, multisection_service, ex2):
    complex_ = multisection_service.build_absolute_complex(ex2)
    reference = torsion_service.torsion(complex_)
    for seed in (1, 2):
        assert torsion_service.torsion(complex_, rng=random.Random(seed)).same_class(reference)
    rescaled = complex_.rescale_basis(2, 0, LaurentPoly.monomial(-1, 2))
    rescaled = rescaled.rescale_basis(1, 3, LaurentPoly.monomial(1, -1))
    assert torsion_service.torsion(rescaled, rng=random.Random(3)).same_class(reference)


def test_twist_override(torsion_service, ex2):
    value = torsion_service.torsion_of_diagram(ex2.untwisted(), twist=ex2.twist)
    assert value.representative == RationalFunction(1, t - 1)


def test_non_acyclic_complex_needs_homology_basis(torsion_service):
    complex_ = ChainComplex(RingTag.Z, 0, (1, 1), {1: Matrix([[0]], RingTag.Z)})
    with pytest.raises(HomologyBasisError):
        torsion_service.torsion(complex_)


def test_supplied_homology_basis(torsion_service):
    circle = ChainComplex(
        RingTag.Z_LAURENT,
        0,
        (1, 1),
        {1: Matrix([[t - 1]], RingTag.Z_LAURENT)},
    )
    value = torsion_service.torsion(circle)
    assert value.acyclic
    assert value.representative == RationalFunction(1, t - 1)

    untwisted = ChainComplex(RingTag.Z, 0, (1, 1), {1: Matrix([[0]], RingTag.Z)})
    basis = {0: Matrix([[1]], RingTag.Q), 1: Matrix([[1]], RingTag.Q)}
    value = torsion_service.torsion(untwisted, basis)
    assert not value.acyclic
    assert value.homology_basis == "supplied"
    assert value.representative == RationalFunction.one()


def test_homology_basis_must_be_cycles(torsion_service):
    complex_ = ChainComplex(RingTag.Z, 0, (1, 2), {1: Matrix([[1, 0]], RingTag.Z)})
    with pytest.raises(HomologyBasisError):
        torsion_service.torsion(complex_, {1: Matrix([[1], [0]], RingTag.Q)})


def test_pivot_columns_follow_scan_order():
    m = Matrix([[1, 1, 0], [0, 0, 1]], RingTag.Q)
    assert pivot_columns(m) == [0, 2]
    assert pivot_columns(m, [1, 0, 2]) == [1, 2]


def test_parse_homology_basis():
    parsed = parse_homology_basis({1: [["1", "t - 1"]]}, RingTag.Q_RATFUNC)
    assert parsed[1].shape == (2, 1)
    assert parsed[1][1, 0] == RationalFunction(t - 1)


def test_torsion_is_multiplicative_on_direct_sums(torsion_service, multisection_service, ex2):
    circle = ChainComplex(RingTag.Z_LAURENT, 0, (1, 1), {1: Matrix([[t - 1]], RingTag.Z_LAURENT)})
    square = ChainComplex(RingTag.Z_LAURENT, 0, (1, 1), {1: Matrix([[t * t - 1]], RingTag.Z_LAURENT)})
    diagram_complex = multisection_service.build_absolute_complex(ex2)
    for first, second in ((circle, square), (diagram_complex, circle), (diagram_complex, diagram_complex)):
        left = torsion_service.torsion(first)
        right = torsion_service.torsion(second)
        total = torsion_service.torsion(first.direct_sum(second))
        assert total.acyclic
        assert total.representative == (left.representative * right.representative).normalize_unit()
