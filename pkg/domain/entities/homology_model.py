from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from core.algebra.matrix import Matrix
from core.algebra.rings import RingTag, format_scalar


@dataclass(frozen=True)
class HomologyGroup:
    """
    One homology group: free rank plus torsion.

    Over Z the torsion lists the invariant factors > 1; over the Laurent
    rings it lists the non-unit invariant factors over Q[t,t^-1] and
    ``presentation`` carries relations against a kernel basis.
    """

    degree: int
    free_rank: int
    torsion: tuple[Any, ...] = ()
    ring: RingTag = RingTag.Z
    presentation: Matrix | None = None

    def is_zero(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        if self.ring is RingTag.Z or self.ring.is_field:
            base = self.ring.display
        else:
            base = RingTag.Q_LAURENT.display
        parts = []
        if self.free_rank:
            parts.append(base if self.free_rank == 1 else f"{base}^{self.free_rank}")
        for factor in self.torsion:
            parts.append(f"{base}/({factor})" if self.ring.is_univariate else f"Z/{factor}")
        return " + ".join(parts)


@dataclass(frozen=True)
class HomologyReport:
    ring: RingTag
    groups: tuple[HomologyGroup, ...]
    name: str = "complex"
    acyclic: bool = False
    exact_bases: bool = True

    def group(self, degree: int) -> HomologyGroup:
        for g in self.groups:
            if g.degree == degree:
                return g
        return HomologyGroup(degree, 0, (), self.ring)

    @property
    def ranks(self) -> dict[int, int]:
        return {g.degree: g.free_rank for g in self.groups}

    @property
    def betti(self) -> tuple[int, ...]:
        return tuple(g.free_rank for g in self.groups)

    def summary(self, label: str = "H") -> str:
        return " ".join(f"{label}{g.degree}={g}" for g in self.groups)


@dataclass(frozen=True)
class CycleBasis:
    """Cycle vectors (columns) whose classes form a basis of the free part of H_degree."""

    degree: int
    cycles: Matrix
    labels: tuple[str, ...] = field(default_factory=tuple)

    def vectors(self) -> list[tuple[Any, ...]]:
        return self.cycles.columns()

    def describe(self) -> list[str]:
        return ["(" + ", ".join(format_scalar(x) for x in v) + ")" for v in self.vectors()]
