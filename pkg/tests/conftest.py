import random
from pathlib import Path
from typing import Callable

import pytest

from application.services.homology_service import HomologyService
from application.services.intersection_form_service import IntersectionFormService
from application.services.multisection_service import MultisectionService
from application.services.open_book_service import OpenBookService
from application.services.surface_service import standard_rose
from application.services.torsion_service import TorsionService
from domain.entities.diagram_model import CurveCollection, MultisectionDiagram
from domain.entities.surface_model import Letter, TwistSpec, Word
from infrastructure.repositories.diagram_file_repository import DiagramFileRepository

FIXTURES = Path(__file__).parent / "fixtures"


def random_word(rng: random.Random, generators: tuple[str, ...], max_length: int = 4) -> Word:
    """Non-empty freely reduced word."""
    while True:
        length = rng.randint(1, max_length)
        word = Word(tuple(Letter(rng.choice(generators), rng.choice((1, -1))) for _ in range(length)))
        if len(word):
            return word


def commensurable(x: Word, y: Word) -> bool:
    """True when the cyclic cores of x and y have conjugate common powers."""
    _, cx = x.cyclic_reduction()
    _, cy = y.cyclic_reduction()
    if not len(cx) or not len(cy):
        return True
    px = cx.power(len(cy))
    py = cy.power(len(cx))
    targets = {py, py.inverse()}
    return any(px.rotate(k) in targets for k in range(len(px)))


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def repository() -> DiagramFileRepository:
    return DiagramFileRepository()


@pytest.fixture(scope="session")
def ex1(repository: DiagramFileRepository) -> MultisectionDiagram:
    return repository.load(FIXTURES / "ex1.msd")


@pytest.fixture(scope="session")
def ex2(repository: DiagramFileRepository) -> MultisectionDiagram:
    return repository.load(FIXTURES / "ex2.msd")


@pytest.fixture(scope="session")
def cp2(repository: DiagramFileRepository) -> MultisectionDiagram:
    return repository.load(FIXTURES / "cp2.msd")


@pytest.fixture
def multisection_service() -> MultisectionService:
    return MultisectionService()


@pytest.fixture
def homology_service() -> HomologyService:
    return HomologyService()


@pytest.fixture
def torsion_service(multisection_service, homology_service) -> TorsionService:
    return TorsionService(multisection_service, homology_service)


@pytest.fixture
def form_service(multisection_service, homology_service) -> IntersectionFormService:
    return IntersectionFormService(multisection_service, homology_service)


@pytest.fixture
def open_book_service(multisection_service, homology_service) -> OpenBookService:
    return OpenBookService(multisection_service, homology_service)


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240917)


@pytest.fixture
def random_diagram(multisection_service) -> Callable[..., MultisectionDiagram]:
    """
    Factory for homologically valid bounded diagrams with g <= 3, b <= 3, n <= 4 and p <= g.

    With ``twisted`` set, a generator g0 maps to t (a second one possibly to
    another power) and every curve is closed up by a power of g0 so the
    twist kills it.
    """

    def build(rng: random.Random, twisted: bool = False, max_p: int = 3) -> MultisectionDiagram:
        for attempt in range(500):
            genus = rng.randint(1, 3)
            boundary = rng.randint(1, 3)
            n = rng.randint(2, 4)
            p = rng.randint(1, min(genus, max_p))
            rose = standard_rose(genus, boundary)
            twist = TwistSpec.trivial()
            anchor = rose.generators[0]
            if twisted:
                anchor = rng.choice(rose.generators)
                images = {anchor: (1, 1)}
                other = rng.choice(rose.generators)
                if other != anchor:
                    images[other] = (1, rng.randint(-2, 2))
                twist = TwistSpec(images)
            collections = []
            for i in range(n):
                curves = []
                for _ in range(p):
                    word = random_word(rng, rose.generators)
                    if twisted:
                        _, exponent = twist.word_image(word)
                        word = word * Word((Letter(anchor, 1),)).power(-exponent)
                    curves.append(word)
                collections.append(CurveCollection(f"c{i + 1}", tuple(curves)))
            diagram = MultisectionDiagram(rose, tuple(collections), twist, name=f"random{attempt}")
            if multisection_service.validate(diagram).valid:
                return diagram
        raise RuntimeError("no valid random diagram found")

    return build
