from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Any

from core.algebra.matrix import Matrix
from domain.entities.surface_model import Frame, RoseSurface, TwistSpec, Word
from domain.exceptions.diagram_errors import SectorIndexError


class Variant(str, Enum):
    ABSOLUTE = "absolute"
    RELATIVE = "relative"
    CLOSED = "closed"


@dataclass(frozen=True)
class CurveCollection:
    name: str
    curves: tuple[Word, ...]

    def labels(self) -> list[str]:
        if len(self.curves) == 1:
            return [self.name]
        return [f"{self.name}{k + 1}" for k in range(len(self.curves))]


@dataclass(frozen=True)
class Arc:
    """An arc given by its dual coordinates (intersection numbers with the generators)."""

    name: str
    vector: tuple[int, ...]


@dataclass(frozen=True)
class DiagramOptions:
    variant: Variant | None = None
    # degree -> list of cycle vectors, used as homology basis for torsion
    homology_basis: dict[int, list[list[str]]] = field(default_factory=dict)
    # per-sector indices into the curve collection
    monodromy_subbases: list[list[int]] | None = None


@dataclass(frozen=True)
class MultisectionDiagram:
    """A central surface with n cyclically ordered curve collections of p curves each."""

    rose: RoseSurface
    collections: tuple[CurveCollection, ...]
    twist: TwistSpec = field(default_factory=TwistSpec.trivial)
    arcs: tuple[Arc, ...] = ()
    options: DiagramOptions = field(default_factory=DiagramOptions)
    name: str = "diagram"

    @property
    def n(self) -> int:
        return len(self.collections)

    @property
    def p(self) -> int:
        return len(self.collections[0].curves) if self.collections else 0

    @property
    def closed(self) -> bool:
        return self.rose.closed

    def sector(self, i: int) -> CurveCollection:
        if not 0 <= i < self.n:
            raise SectorIndexError(i, self.n)
        return self.collections[i]

    def neighbour(self, i: int, step: int) -> int:
        """Cyclic index arithmetic mod n."""
        return (i + step) % self.n

    def with_twist(self, twist: TwistSpec) -> "MultisectionDiagram":
        return replace(self, twist=twist)

    def untwisted(self) -> "MultisectionDiagram":
        return replace(self, twist=TwistSpec.trivial())


@dataclass(frozen=True)
class Submodule:
    """Generators (as columns) of a submodule of the free module on the rose generators."""

    generators: Matrix
    frame: Frame
    labels: tuple[str, ...] = ()

    @property
    def ambient_rank(self) -> int:
        return self.generators.nrows

    @property
    def count(self) -> int:
        return self.generators.ncols

    @property
    def rank(self) -> int:
        return self.generators.rank()

    @property
    def is_basis(self) -> bool:
        return self.rank == self.count

    @property
    def ring(self) -> Any:
        return self.generators.ring


@dataclass
class ValidationReport:
    valid: bool
    reasons: list[str] = field(default_factory=list)
    collection_ranks: dict[str, int] = field(default_factory=dict)
    page_genus: int | None = None
    page_components: int | None = None
    euler_characteristic: int | None = None
    name: str = "diagram"
