import random
from dataclasses import replace

import pytest

from core.algebra.matrix import Matrix
from core.algebra.rings import RingTag
from domain.entities.diagram_model import Arc
from domain.exceptions.computation_errors import MonodromyError
from domain.exceptions.diagram_errors import ClosedModelError


class TestExampleOne:
    def test_recursion_steps(self, open_book_service, ex1):
        result = open_book_service.monodromy_action(ex1)
        assert len(result.steps) == 3
        assert result.steps[1].R == Matrix([[0, -1]], RingTag.Z)
        assert result.steps[2].R == Matrix([[-2, 1]], RingTag.Z)
        assert result.R == Matrix([[1]], RingTag.Z)
        assert result.arc_names == ("e",)

    def test_boundary_homology(self, open_book_service, ex1):
        result = open_book_service.boundary_homology(ex1)
        assert result.S.shape == (1, 1)
        assert abs(result.S.determinant()) == 2
        assert str(result.homology.group(1)) == "Z/2"
        assert str(result.homology.group(2)) == "0"
        assert str(result.homology.group(0)) == "Z"
        assert str(result.homology.group(3)) == "Z"

    def test_negated_arc(self, open_book_service, ex1):
        flipped = (Arc("e", tuple(-x for x in ex1.arcs[0].vector)),)
        result = open_book_service.boundary_homology(ex1, arcs=flipped)
        assert result.monodromy.R == Matrix([[1]], RingTag.Z)
        assert str(result.homology.group(1)) == "Z/2"


class TestExampleTwo:
    def test_monodromy(self, open_book_service, ex2):
        result = open_book_service.monodromy_action(ex2)
        assert result.R == Matrix([[1, 0], [-1, 1]], RingTag.Z)
        assert result.R.determinant() in (1, -1)
        assert (result.page.genus, result.page.components) == (1, 1)

    def test_twist_is_ignored(self, open_book_service, ex2):
        assert open_book_service.monodromy_action(ex2).R == open_book_service.monodromy_action(ex2.untwisted()).R

    def test_boundary_homology(self, open_book_service, ex2):
        result = open_book_service.boundary_homology(ex2)
        assert result.xi.rank() == 1
        assert all(x == 0 for x in result.xi.column(1))
        assert result.S == result.xi.T
        assert str(result.homology.group(1)) == "Z"
        assert str(result.homology.group(2)) == "Z"

    def test_permuted_arcs_conjugate_R(self, open_book_service, ex2):
        swapped = tuple(reversed(ex2.arcs))
        result = open_book_service.boundary_homology(ex2, arcs=swapped)
        assert result.monodromy.R == Matrix([[1, -1], [0, 1]], RingTag.Z)
        assert str(result.homology.group(1)) == "Z"
        assert str(result.homology.group(2)) == "Z"


class TestInputs:
    def test_default_arcs_avoid_first_collection(self, open_book_service, multisection_service, ex1, ex2):
        for diagram in (ex1, ex2):
            arcs = open_book_service.default_arcs(diagram)
            page = multisection_service.page_data(diagram)
            assert len(arcs) == page.rank_J - page.rank_dual_L
            surface = multisection_service.surface(diagram)
            for arc in arcs:
                for word in diagram.sector(0).curves:
                    assert surface.evaluate(surface.abelian_class(word).coordinates, arc.vector) == 0

    def test_arc_meeting_first_collection(self, open_book_service, ex1):
        with pytest.raises(MonodromyError):
            open_book_service.monodromy_action(ex1, arcs=(Arc("bad", (1, 0, 0, 0, 0)),))

    def test_arc_of_wrong_length(self, open_book_service, ex1):
        with pytest.raises(MonodromyError):
            open_book_service.monodromy_action(replace(ex1, arcs=(Arc("short", (0, 0, 1)),)))

    def test_closed_diagram_has_no_page(self, open_book_service, cp2):
        with pytest.raises(ClosedModelError):
            open_book_service.monodromy_action(cp2)

    def test_open_book_complex(self, open_book_service):
        report = open_book_service.open_book_homology(1, Matrix([[2]], RingTag.Z))
        assert report.summary() == "H0=Z H1=Z/2 H2=0 H3=Z"


@pytest.mark.parametrize("name", ["ex1", "ex2"])
def test_arcs_shifted_by_first_collection_duals(request, open_book_service, multisection_service, name):
    diagram = request.getfixturevalue(name)
    surface = multisection_service.surface(diagram)
    duals = [surface.dual(word).coordinates for word in diagram.sector(0).curves]
    expected = open_book_service.boundary_homology(diagram)
    assert expected.monodromy.R.determinant() in (1, -1)
    rng = random.Random(61)
    for _ in range(10):
        shifted = []
        for arc in diagram.arcs:
            vector = list(arc.vector)
            for dual in duals:
                m = rng.randint(-3, 3)
                vector = [v + m * d for v, d in zip(vector, dual)]
            shifted.append(Arc(arc.name, tuple(vector)))
        result = open_book_service.boundary_homology(diagram, arcs=shifted)
        assert result.monodromy.R == expected.monodromy.R
        assert result.S == expected.S
        assert result.homology.summary() == expected.homology.summary()
