import random

import pytest

from application.services.intersection_oracle import IntersectionOracle
from application.services.surface_service import SurfaceService, standard_rose
from conftest import commensurable, random_word
from core.algebra.laurent import LaurentPoly
from domain.entities.surface_model import TwistSpec, Word
from domain.exceptions.diagram_errors import BoundedModelError, SurfaceConstructionError
from domain.exceptions.parse_errors import UnknownGeneratorError, WordSyntaxError

t = LaurentPoly.monomial(1, 1)


def _random_twist(rng: random.Random, generators: tuple[str, ...]) -> TwistSpec:
    images = {}
    for name in generators:
        if rng.random() < 0.6:
            images[name] = (rng.choice((1, 1, -1)), rng.randint(-1, 2))
    if all(value[1] == 0 for value in images.values()):
        images[generators[0]] = (1, 1)
    return TwistSpec(images)


class TestRose:
    def test_standard_generators(self):
        rose = standard_rose(2, 2)
        assert rose.generators == ("a1", "b1", "a2", "b2", "d1")
        assert rose.rank == 5

    def test_closed_model(self):
        rose = standard_rose(1, 0, closed=True)
        assert rose.generators == ("a1", "b1")

    @pytest.mark.parametrize(
        "genus,boundary,closed",
        [(0, 0, False), (-1, 1, False), (0, 0, True), (1, 1, True)],
    )
    def test_invalid_surfaces(self, genus, boundary, closed):
        with pytest.raises(SurfaceConstructionError):
            standard_rose(genus, boundary, closed=closed)

    def test_custom_names_must_be_distinct(self):
        with pytest.raises(SurfaceConstructionError):
            standard_rose(1, 1, generators=["x", "x"])


class TestWords:
    def test_free_reduction(self):
        assert Word.parse("a1 b1 b1^-1 a1^-1") == Word()
        assert str(Word.parse("a1 b1^-1")) == "a1 b1^-1"

    def test_exponent_syntax_rejected(self):
        with pytest.raises(WordSyntaxError):
            Word.parse("a1^-2")

    def test_unknown_generator(self):
        with pytest.raises(UnknownGeneratorError):
            Word.parse("a1 z", ("a1", "b1"))


class TestIntersections:
    def test_symplectic_calibration(self):
        surface = SurfaceService(standard_rose(2, 2))
        a1, b1, a2, b2, d1 = (Word.of(g) for g in ("a1", "b1", "a2", "b2", "d1"))
        assert surface.algebraic_intersection(a1, b1) == 1
        assert surface.algebraic_intersection(b1, a1) == -1
        assert surface.algebraic_intersection(a2, b2) == 1
        assert surface.algebraic_intersection(a1, a2) == 0
        assert surface.algebraic_intersection(a1, b2) == 0
        assert all(surface.algebraic_intersection(d1, w) == 0 for w in (a1, b1, a2, b2))

    def test_pairing_matrix_is_antisymmetric(self):
        omega = SurfaceService(standard_rose(3, 2)).pairing_matrix()
        assert omega == -omega.T

    def test_algebraic_intersection_is_bilinear_in_classes(self):
        rng = random.Random(3)
        surface = SurfaceService(standard_rose(2, 2))
        for _ in range(50):
            x = random_word(rng, surface.rose.generators, 5)
            y = random_word(rng, surface.rose.generators, 5)
            if commensurable(x, y):
                continue
            expected = SurfaceService.evaluate(surface.abelian_class(x).coordinates, surface.dual(y).coordinates)
            assert surface.algebraic_intersection(x, y) == expected

    def test_oracle_agrees_with_vertex_crossings(self):
        rng = random.Random(17)
        checked = 0
        while checked < 100:
            rose = standard_rose(rng.randint(1, 2), rng.randint(1, 2))
            surface = SurfaceService(rose)
            oracle = IntersectionOracle(surface)
            x = random_word(rng, rose.generators, 5)
            y = random_word(rng, rose.generators, 5)
            if commensurable(x, y):
                continue
            twist = _random_twist(rng, rose.generators)
            assert surface.equivariant_intersection(x, y, twist) == oracle.equivariant_intersection(x, y, twist)
            checked += 1

    def test_oracle_does_not_use_vertex_layout(self, monkeypatch):
        surface = SurfaceService(standard_rose(1, 1))
        oracle = IntersectionOracle(surface)

        def unavailable(*_):
            raise AssertionError("vertex layout consulted")

        monkeypatch.setattr(SurfaceService, "vertex_picture", unavailable)
        a1, b1 = Word.parse("a1"), Word.parse("b1")
        assert oracle.equivariant_intersection(a1, b1, TwistSpec.trivial()) == LaurentPoly.one()
        assert oracle.equivariant_intersection(b1, a1, TwistSpec.trivial()) == LaurentPoly.monomial(-1, 0)
        twist = TwistSpec({"a1": (1, 1)})
        assert oracle.equivariant_intersection(a1, b1, twist) == LaurentPoly.one()

    def test_oracle_padding_defaults_to_settings(self, monkeypatch):
        from core.settings import app_settings

        monkeypatch.setattr(app_settings, "oracle_window_padding", 3)
        surface = SurfaceService(standard_rose(1, 1))
        assert IntersectionOracle(surface).window_padding == 3
        assert IntersectionOracle(surface, window_padding=0).window_padding == 0
        x = Word.parse("a1 b1")
        assert IntersectionOracle(surface).window(x, x, TwistSpec({"a1": (1, 2)})) == 4 + 1 + 3

    def test_sesquilinear_skew_symmetry(self):
        rng = random.Random(29)
        checked = 0
        while checked < 150:
            rose = standard_rose(rng.randint(1, 3), rng.randint(1, 2))
            surface = SurfaceService(rose)
            x = random_word(rng, rose.generators, 5)
            y = random_word(rng, rose.generators, 5)
            if commensurable(x, y):
                continue
            twist = _random_twist(rng, rose.generators)
            forward = surface.equivariant_intersection(x, y, twist)
            backward = surface.equivariant_intersection(y, x, twist)
            assert forward == -backward.bar(), (x, y, twist)
            checked += 1

    def test_trivial_twist_specializes_to_algebraic_intersection(self):
        rng = random.Random(23)
        for _ in range(100):
            rose = standard_rose(rng.randint(1, 3), rng.randint(1, 3))
            surface = SurfaceService(rose)
            x = random_word(rng, rose.generators, 5)
            y = random_word(rng, rose.generators, 5)
            if commensurable(x, y):
                continue
            value = surface.equivariant_intersection(x, y, TwistSpec.trivial())
            assert value == surface.algebraic_intersection(x, y)
            twist = _random_twist(rng, rose.generators)
            positive = TwistSpec({k: (1, e) for k, (_, e) in twist.images.items()})
            assert surface.equivariant_intersection(x, y, positive).augment() == surface.algebraic_intersection(x, y)


class TestFoxCalculus:
    def test_example_word(self, ex2):
        surface = SurfaceService(ex2.rose)
        gamma = ex2.sector(2).curves[0]
        assert surface.fox_class(gamma, ex2.twist).coordinates == (
            LaurentPoly.monomial(-1, 0),
            LaurentPoly.one(),
            LaurentPoly.zero(),
            t,
        )

    def test_product_rule(self):
        rng = random.Random(5)
        rose = standard_rose(2, 2)
        surface = SurfaceService(rose)
        for _ in range(200):
            twist = _random_twist(rng, rose.generators)
            u = random_word(rng, rose.generators, 5)
            v = random_word(rng, rose.generators, 5)
            left = surface.fox_class(u * v, twist).coordinates
            fu = surface.fox_class(u, twist).coordinates
            fv = surface.fox_class(v, twist).coordinates
            phi_u = twist.word_monomial(u)
            assert left == tuple(a + phi_u * b for a, b in zip(fu, fv))

    def test_trivial_twist_gives_abelian_class(self):
        rng = random.Random(9)
        surface = SurfaceService(standard_rose(3, 1))
        for _ in range(30):
            w = random_word(rng, surface.rose.generators, 6)
            assert surface.fox_class(w, TwistSpec.trivial()).coordinates == surface.abelian_class(w).coordinates

    def test_untwisted_relator_vanishes(self, cp2):
        surface = SurfaceService(cp2.rose)
        assert all(c == 0 for c in surface.relator_class(TwistSpec.trivial()).coordinates)

    def test_relator_needs_closed_model(self, ex1):
        with pytest.raises(BoundedModelError):
            SurfaceService(ex1.rose).relator_class(TwistSpec.trivial())
