from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Any

from core.algebra.rings import RingTag


class CycleKind(str, Enum):
    ABSOLUTE_H2 = "absolute_h2"  # (x_i) in the direct sum of the L_i, curve coordinates
    RELATIVE_H2 = "relative_h2"  # (y_i) in the direct sum of the J_i, orthogonal-complement coordinates
    CLOSED_H2 = "closed_h2"
    H1 = "h1"  # loop-frame vector
    H3_RELATIVE = "h3_relative"  # dual-frame vector in every J_i


@dataclass(frozen=True)
class CycleCoords:
    """A chain given blockwise, one coordinate block per sector (a single block for H1/H3)."""

    kind: CycleKind
    blocks: tuple[tuple[Any, ...], ...]
    ring: RingTag = RingTag.Z

    def flat(self) -> list[Any]:
        return [x for block in self.blocks for x in block]

    def scale(self, factor: Any) -> "CycleCoords":
        return CycleCoords(self.kind, tuple(tuple(x * factor for x in b) for b in self.blocks), self.ring)
