import random
from dataclasses import replace

import pytest

from application.services.multisection_service import connected_sum
from core.algebra.laurent import LaurentPoly
from core.algebra.matrix import Matrix
from core.algebra.rings import RingTag
from domain.entities.chain_complex_model import ChainComplex
from domain.entities.diagram_model import CurveCollection, MultisectionDiagram, Variant
from domain.entities.surface_model import Frame, TwistSpec, Word
from domain.exceptions.diagram_errors import BoundedModelError, ClosedModelError, DiagramValidationError


def _assert_complex(complex_: ChainComplex) -> None:
    for k in range(complex_.low + 1, complex_.high + 1):
        assert complex_.boundary(k).shape == (complex_.rank(k - 1), complex_.rank(k))
    for k in range(complex_.low + 2, complex_.high + 1):
        assert (complex_.boundary(k - 1) @ complex_.boundary(k)).is_zero()


def _free_ranks(report) -> list[int]:
    return [report.group(k).free_rank for k in range(5)]


def _at_one(matrix: Matrix) -> Matrix:
    """Entry-wise t -> 1 over Q."""
    return matrix.map(lambda x: LaurentPoly.coerce(x).augment(), RingTag.Q)


def _same_span(a: Matrix, b: Matrix) -> bool:
    return a.rank() == b.rank() == a.hstack(b).rank()


def _inside(a: Matrix, b: Matrix) -> bool:
    return b.hstack(a).rank() == b.rank()


def _compare_top_maps(twisted: ChainComplex, plain: ChainComplex, blocks, plain_blocks) -> None:
    """d3 compared through the ambient images of its columns, which do not depend on the chosen bases."""
    embed = Matrix.block_diagonal([_at_one(b) for b in blocks], RingTag.Q)
    plain_embed = Matrix.block_diagonal([b.with_ring(RingTag.Q) for b in plain_blocks], RingTag.Q)
    image = embed @ _at_one(twisted.boundary(3))
    plain_image = plain_embed @ plain.boundary(3).with_ring(RingTag.Q)
    assert _inside(image, plain_image)
    if twisted.rank(3) == plain.rank(3):
        assert _same_span(image, plain_image)


class TestValidation:
    def test_fixtures_are_valid(self, multisection_service, ex1, ex2, cp2):
        for diagram in (ex1, ex2, cp2):
            assert multisection_service.validate(diagram).valid

    def test_page_bookkeeping(self, multisection_service, ex1, ex2):
        report = multisection_service.validate(ex1)
        assert (report.page_genus, report.page_components) == (0, 1)
        report = multisection_service.validate(ex2)
        assert (report.page_genus, report.page_components) == (1, 1)

    def test_rank_deficient_collection(self, multisection_service, ex1):
        broken = replace(
            ex1,
            collections=(CurveCollection("alpha", (Word.of("a1"), Word.of("a1"))),) + ex1.collections[1:],
        )
        report = multisection_service.validate(broken)
        assert not report.valid
        assert "collection alpha has rank 1 < 2" in report.reasons

    def test_twist_must_kill_curves(self, multisection_service, ex2):
        broken = ex2.with_twist(TwistSpec.parse({"alpha": "t"}))
        report = multisection_service.validate(broken)
        assert "twist does not kill curve A" in report.reasons
        with pytest.raises(DiagramValidationError):
            multisection_service.require_valid(broken)

    def test_single_sector_rejected(self, multisection_service, ex1):
        report = multisection_service.validate(replace(ex1, collections=ex1.collections[:1]))
        assert not report.valid

    def test_closed_needs_p_equal_genus(self, multisection_service, cp2):
        empty = tuple(CurveCollection(c.name, ()) for c in cp2.collections)
        report = multisection_service.validate(replace(cp2, collections=empty))
        assert any("p = g" in reason for reason in report.reasons)


class TestSubmodules:
    def test_orthogonal_complements(self, multisection_service, ex1):
        J = multisection_service.J_orthogonal(ex1, 0)
        assert J.count == 3
        surface = multisection_service.surface(ex1)
        for word in ex1.sector(0).curves:
            loop = surface.abelian_class(word).coordinates
            assert all(surface.evaluate(loop, column) == 0 for column in J.generators.columns())

    def test_closed_model_has_no_complements(self, multisection_service, cp2):
        with pytest.raises(ClosedModelError):
            multisection_service.J_orthogonal(cp2, 0)


class TestExampleHomology:
    def test_example_one_absolute(self, multisection_service, homology_service, ex1):
        report = homology_service.homology(multisection_service.build_absolute_complex(ex1))
        assert report.summary() == "H0=Z H1=0 H2=Z H3=0"

    def test_example_one_relative(self, multisection_service, homology_service, ex1):
        report = homology_service.homology(multisection_service.build_relative_complex(ex1))
        assert str(report.group(1)) == "0"
        assert str(report.group(2)) == "Z"
        assert str(report.group(3)) == "0"

    def test_example_two_absolute(self, multisection_service, homology_service, ex2):
        report = homology_service.homology(multisection_service.build_absolute_complex(ex2.untwisted()))
        assert report.summary() == "H0=Z H1=Z H2=0 H3=0"

    def test_example_two_relative(self, multisection_service, homology_service, ex2):
        report = homology_service.homology(multisection_service.build_relative_complex(ex2.untwisted()))
        assert str(report.group(1)) == "0"
        assert str(report.group(2)) == "0"
        assert str(report.group(3)) == "Z"

    def test_example_two_twisted(self, multisection_service, homology_service, ex2):
        complex_ = multisection_service.build_absolute_complex(ex2)
        assert complex_.ring is RingTag.Z_LAURENT
        report = homology_service.homology_over_laurent(complex_)
        h0 = report.group(0)
        assert h0.free_rank == 0
        assert h0.torsion == (LaurentPoly.parse("t - 1"),)
        assert all(report.group(k).is_zero() for k in (1, 2, 3))
        assert homology_service.homology_over_field(complex_).acyclic

    def test_closed_example(self, multisection_service, homology_service, cp2):
        complex_ = multisection_service.build_complex(cp2, Variant.CLOSED)
        report = homology_service.homology(complex_)
        assert report.summary() == "H0=Z H1=0 H2=Z H3=0 H4=Z"

    def test_variant_checks_model(self, multisection_service, ex1, cp2):
        with pytest.raises(ClosedModelError):
            multisection_service.build_absolute_complex(cp2)
        with pytest.raises(BoundedModelError):
            multisection_service.build_closed_complex(ex1)


class TestComplexes:
    def test_boundaries_square_to_zero(self, multisection_service, random_diagram, ex1, ex2, cp2):
        rng = random.Random(31)
        diagrams = [ex1, ex2, ex2.untwisted()]
        diagrams += [random_diagram(rng) for _ in range(5)]
        diagrams += [random_diagram(rng, twisted=True) for _ in range(5)]
        for diagram in diagrams:
            for variant in (Variant.ABSOLUTE, Variant.RELATIVE):
                _assert_complex(multisection_service.build_complex(diagram, variant))
        _assert_complex(multisection_service.build_complex(cp2, Variant.CLOSED))

    def test_labels_name_diagram_elements(self, multisection_service, ex1):
        complex_ = multisection_service.build_absolute_complex(ex1)
        assert complex_.basis_labels(1) == ("a1", "b1", "a2", "b2", "d1")
        assert complex_.basis_labels(2)[:2] == ("alpha1", "alpha2")

    def test_augmentation_matches_untwisted(self, multisection_service, random_diagram):
        rng = random.Random(41)
        for _ in range(40):
            diagram = random_diagram(rng, twisted=True)
            plain_diagram = diagram.untwisted()
            twisted = multisection_service.build_absolute_complex(diagram)
            plain = multisection_service.build_absolute_complex(plain_diagram)
            assert twisted.augment().ring is RingTag.Z
            for k in (1, 2):
                assert _at_one(twisted.boundary(k)) == plain.boundary(k).with_ring(RingTag.Q)
            curves = [multisection_service.curve_matrix(diagram, i) for i in range(diagram.n)]
            plain_curves = [multisection_service.curve_matrix(plain_diagram, i) for i in range(diagram.n)]
            _compare_top_maps(twisted, plain, curves, plain_curves)

            twisted = multisection_service.build_relative_complex(diagram)
            plain = multisection_service.build_relative_complex(plain_diagram)
            complements = [multisection_service.J_orthogonal(diagram, i).generators for i in range(diagram.n)]
            plain_complements = [multisection_service.J_orthogonal(plain_diagram, i).generators for i in range(diagram.n)]
            for block, plain_block in zip(complements, plain_complements):
                assert _same_span(_at_one(block), plain_block.with_ring(RingTag.Q))
            assert _same_span(_at_one(twisted.boundary(2)), plain.boundary(2).with_ring(RingTag.Q))
            _compare_top_maps(twisted, plain, complements, plain_complements)
            if twisted.rank(3) == plain.rank(3):
                assert _at_one(twisted.boundary(4)).is_zero()
                assert plain.boundary(4).is_zero()

    def test_euler_characteristic(self, multisection_service, homology_service, random_diagram, ex1, ex2):
        rng = random.Random(47)
        diagrams = [ex1, ex2.untwisted()] + [random_diagram(rng) for _ in range(15)]
        for diagram in diagrams:
            for complex_ in (
                multisection_service.build_absolute_complex(diagram),
                multisection_service.build_relative_complex(diagram),
            ):
                report = homology_service.homology_over_field(complex_)
                chains = sum((-1) ** k * complex_.rank(k) for k in complex_.degrees)
                cycles = sum((-1) ** k * rank for k, rank in report.ranks.items())
                assert chains == cycles, diagram.name

    def test_first_and_third_homology_from_curves(
        self, multisection_service, homology_service, form_service, random_diagram, ex1, ex2
    ):
        rng = random.Random(59)
        diagrams = [ex1, ex2.untwisted()] + [random_diagram(rng) for _ in range(15)]
        for diagram in diagrams:
            report = homology_service.homology(multisection_service.build_absolute_complex(diagram))
            curves = Matrix.from_columns(
                [c for i in range(diagram.n) for c in multisection_service.curve_matrix(diagram, i).columns()],
                diagram.rose.rank,
                RingTag.Z,
            )
            quotient = ChainComplex(RingTag.Z, 0, (diagram.rose.rank, curves.ncols), {1: curves})
            assert str(report.group(1)) == str(homology_service.homology(quotient).group(0))
            meet = form_service.triple_intersection(diagram, Frame.LOOP)
            assert report.group(3).free_rank == meet.rank()
            assert report.group(3).torsion == ()

    def test_duality_of_ranks(self, multisection_service, homology_service, random_diagram):
        rng = random.Random(53)
        for _ in range(20):
            diagram = random_diagram(rng)
            absolute = homology_service.homology_over_field(multisection_service.build_absolute_complex(diagram))
            relative = homology_service.homology_over_field(multisection_service.build_relative_complex(diagram))
            absolute_ranks = _free_ranks(absolute)
            relative_ranks = _free_ranks(relative)
            assert absolute_ranks == relative_ranks[::-1], diagram


class TestConnectedSum:
    def test_closed_sum(self, multisection_service, homology_service, cp2):
        doubled = connected_sum(cp2, cp2)
        assert doubled.rose.generators == ("a1", "b1", "a1_2", "b1_2")
        assert doubled.p == 2
        report = homology_service.homology(multisection_service.build_closed_complex(doubled))
        assert report.summary() == "H0=Z H1=0 H2=Z^2 H3=0 H4=Z"

    def test_bounded_sum(self, multisection_service, homology_service, ex1, ex2):
        total = connected_sum(ex1, ex2.untwisted())
        assert (total.rose.genus, total.rose.boundary) == (4, 2)
        assert multisection_service.validate(total).valid
        report = homology_service.homology(multisection_service.build_absolute_complex(total))
        assert report.group(1).free_rank == 1
        assert report.group(2).free_rank == 1

    def test_sector_counts_must_match(self, ex1):
        shorter = replace(ex1, collections=ex1.collections[:2])
        with pytest.raises(DiagramValidationError):
            connected_sum(ex1, shorter)


def test_direct_sum_of_complexes(multisection_service, ex1, ex2):
    first = multisection_service.build_absolute_complex(ex1)
    second = multisection_service.build_absolute_complex(ex2.untwisted())
    total = first.direct_sum(second)
    assert total.ranks == tuple(a + b for a, b in zip(first.ranks, second.ranks))
    _assert_complex(total)


def test_rose_is_shared_between_services(multisection_service, ex1):
    assert multisection_service.surface(ex1) is multisection_service.surface(replace(ex1, name="other"))
    assert isinstance(ex1, MultisectionDiagram)
