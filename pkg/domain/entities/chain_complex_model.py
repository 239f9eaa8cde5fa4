from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Any

from core.algebra.matrix import Matrix, common_ring
from core.algebra.rings import RingTag
from domain.exceptions.computation_errors import ComplexIntegrityError


@dataclass(frozen=True)
class ChainComplex:
    """
    Finite free chain complex C_high -> ... -> C_low.

    ``maps[k]`` is the boundary C_k -> C_{k-1} for low < k <= high, as a
    matrix whose columns are the images of the basis of C_k. ``exact_bases``
    is False when some basis was only known up to a rational scalar.
    """

    ring: RingTag
    low: int
    ranks: tuple[int, ...]
    maps: dict[int, Matrix]
    labels: dict[int, tuple[str, ...]] = field(default_factory=dict)
    name: str = "complex"
    exact_bases: bool = True

    @property
    def high(self) -> int:
        return self.low + len(self.ranks) - 1

    @property
    def degrees(self) -> range:
        return range(self.low, self.high + 1)

    def rank(self, k: int) -> int:
        if k < self.low or k > self.high:
            return 0
        return self.ranks[k - self.low]

    def boundary(self, k: int) -> Matrix:
        """d_k : C_k -> C_{k-1}; zero matrices outside the stored range."""
        if k in self.maps:
            return self.maps[k]
        return Matrix.zeros(self.rank(k - 1), self.rank(k), self.ring)

    def basis_labels(self, k: int) -> tuple[str, ...]:
        labels = self.labels.get(k)
        if labels is not None and len(labels) == self.rank(k):
            return labels
        return tuple(f"c{k}_{j + 1}" for j in range(self.rank(k)))

    def check_integrity(self) -> None:
        """Dimensions match the ranks and d_{k-1} d_k = 0 everywhere."""
        for k in range(self.low + 1, self.high + 1):
            d = self.boundary(k)
            if d.shape != (self.rank(k - 1), self.rank(k)):
                raise ComplexIntegrityError(k, f"d{k} has shape {d.shape}, expected {(self.rank(k - 1), self.rank(k))}")
        for k in range(self.low + 2, self.high + 1):
            if not (self.boundary(k - 1) @ self.boundary(k)).is_zero():
                raise ComplexIntegrityError(k)

    def with_ring(self, ring: RingTag) -> "ChainComplex":
        return replace(self, ring=ring, maps={k: m.with_ring(ring) for k, m in self.maps.items()})

    def augment(self) -> "ChainComplex":
        """Specialize t -> 1 entry-wise."""
        return replace(self, ring=RingTag.Z, maps={k: m.augment() for k, m in self.maps.items()})

    def rescale_basis(self, degree: int, index: int, unit: Any) -> "ChainComplex":
        """
        Replace basis vector ``index`` of C_degree by ``unit`` times itself.

        The outgoing boundary column is multiplied by the unit and the
        incoming boundary row by its inverse.
        """
        maps = dict(self.maps)
        if degree in maps:
            outgoing = maps[degree].to_lists()
            for row in outgoing:
                row[index] = row[index] * unit
            maps[degree] = Matrix(outgoing, maps[degree].ring, maps[degree].ncols)
        if degree + 1 in maps:
            incoming = maps[degree + 1].to_lists()
            if hasattr(unit, "inverse"):
                inverse = unit.inverse()
            elif unit in (1, -1):
                inverse = unit
            else:
                raise ValueError(f"{unit} is not a unit")
            incoming[index] = [x * inverse for x in incoming[index]]
            maps[degree + 1] = Matrix(incoming, maps[degree + 1].ring, maps[degree + 1].ncols)
        return replace(self, maps=maps)

    def direct_sum(self, other: "ChainComplex") -> "ChainComplex":
        """Block-diagonal sum over the union of the degree ranges."""
        ring = common_ring(self.ring, other.ring)
        low = min(self.low, other.low)
        high = max(self.high, other.high)
        ranks = tuple(self.rank(k) + other.rank(k) for k in range(low, high + 1))
        maps = {}
        labels = {}
        for k in range(low, high + 1):
            if k > low:
                maps[k] = Matrix.block_diagonal(
                    [self.boundary(k).with_ring(ring), other.boundary(k).with_ring(ring)], ring
                )
            labels[k] = self.basis_labels(k) + other.basis_labels(k)
        return ChainComplex(
            ring=ring,
            low=low,
            ranks=ranks,
            maps=maps,
            labels=labels,
            name=f"{self.name}+{other.name}",
            exact_bases=self.exact_bases and other.exact_bases,
        )
