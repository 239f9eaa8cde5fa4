from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from core.algebra.rational_function import RationalFunction


class Ambiguity(str, Enum):
    SIGNED_T_POWERS = "±t^k"
    RATIONAL_T_POWERS = "Q*·t^k"


@dataclass(frozen=True)
class TorsionValue:
    """Torsion of a based complex, stored as the canonical representative of its unit class."""

    representative: RationalFunction
    ambiguity: Ambiguity
    acyclic: bool
    raw: RationalFunction
    homology_basis: str = "none"

    def same_class(self, other: "TorsionValue") -> bool:
        return self.representative == other.representative and self.ambiguity == other.ambiguity

    def __str__(self) -> str:
        return f"{self.representative} up to {self.ambiguity.value}"
