from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from core.algebra.matrix import Matrix


@dataclass(frozen=True)
class FormReport:
    """A pairing matrix between two bases, with its rank and determinant."""

    kind: str
    matrix: Matrix
    rank: int
    determinant: Any = None
    signature: int | None = None
    symmetric: bool | None = None
    row_labels: tuple[str, ...] = field(default_factory=tuple)
    col_labels: tuple[str, ...] = field(default_factory=tuple)

    @property
    def unimodular(self) -> bool:
        return self.determinant in (1, -1)
