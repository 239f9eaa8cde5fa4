from __future__ import annotations

from dataclasses import dataclass, field

from core.algebra.matrix import Matrix
from domain.entities.homology_model import HomologyReport


@dataclass(frozen=True)
class PageData:
    """Bookkeeping for the page of the open book on the boundary."""

    genus: int
    boundary: int
    components: int
    rank_L: int
    rank_J: int
    rank_dual_L: int
    rank_dual_J: int


@dataclass(frozen=True)
class MonodromyStep:
    """One step of the arc recursion: R_i and the updated arc and loop vectors."""

    sector: int
    R: Matrix
    arcs: tuple[tuple[int, ...], ...]
    epsilon: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class MonodromyResult:
    R: Matrix
    steps: tuple[MonodromyStep, ...]
    arc_names: tuple[str, ...]
    subbases: tuple[tuple[int, ...], ...]
    page: PageData
    name: str = "diagram"

    @property
    def final_arcs(self) -> tuple[tuple[int, ...], ...]:
        return self.steps[-1].arcs if self.steps else ()

    @property
    def final_epsilon(self) -> tuple[tuple[int, ...], ...]:
        return self.steps[-1].epsilon if self.steps else ()


@dataclass(frozen=True)
class BoundaryHomologyResult:
    xi: Matrix
    S: Matrix
    monodromy: MonodromyResult
    homology: HomologyReport
    page: PageData
    completion_labels: tuple[str, ...] = field(default_factory=tuple)
