"""
Smith normal form over the Euclidean domains ZZ and QQ[t, t^-1].

snf(M) returns U, D, V (and the inverses of U and V) with U * M * V = D,
D diagonal, d1 | d2 | ..., every nonzero diagonal entry unit-normalized
(positive over ZZ, monic with nonzero constant term over QQ[t, t^-1]).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any

from core.algebra.matrix import Matrix
from core.algebra.rings import RingTag, euclid_for, one
from core.settings import app_settings
from domain.exceptions.computation_errors import CertificateError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SnfResult:
    U: Matrix
    D: Matrix
    V: Matrix
    U_inv: Matrix
    V_inv: Matrix
    rank: int

    @property
    def invariant_factors(self) -> list[Any]:
        return [self.D[i, i] for i in range(self.rank)]

    def verify(self, source: Matrix) -> None:
        """Check U*M*V = D, U*U_inv = 1, V*V_inv = 1 and the divisibility chain."""
        ring = self.D.ring
        m, n = source.shape
        if (self.U @ source.with_ring(ring)) @ self.V != self.D:
            raise CertificateError("U * M * V != D")
        if self.U @ self.U_inv != Matrix.identity(m, ring):
            raise CertificateError("U is not invertible over the ring")
        if self.V @ self.V_inv != Matrix.identity(n, ring):
            raise CertificateError("V is not invertible over the ring")
        euclid = euclid_for(ring)
        for i in range(m):
            for j in range(n):
                if i != j and self.D[i, j]:
                    raise CertificateError(f"off-diagonal entry at ({i}, {j})")
        factors = self.invariant_factors
        for i, d in enumerate(factors):
            if not d:
                raise CertificateError(f"zero invariant factor inside rank at {i}")
            if euclid.unit_normal(d)[1] != d:
                raise CertificateError(f"invariant factor {d} is not unit-normalized")
            if i + 1 < len(factors) and euclid.divmod(factors[i + 1], d)[1]:
                raise CertificateError(f"{d} does not divide {factors[i + 1]}")
        for i in range(self.rank, min(m, n)):
            if self.D[i, i]:
                raise CertificateError("nonzero diagonal entry beyond the rank")


class _Reducer:
    """Mutable working state; every row/column operation is mirrored on U, U^-1, V, V^-1."""

    def __init__(self, matrix: Matrix, ring: RingTag) -> None:
        self.ring = ring
        self.euclid = euclid_for(ring)
        self.m, self.n = matrix.shape
        self.A = [list(row) for row in matrix.with_ring(ring).rows]
        self.U = [list(row) for row in Matrix.identity(self.m, ring).rows]
        self.Ui = [list(row) for row in Matrix.identity(self.m, ring).rows]
        self.V = [list(row) for row in Matrix.identity(self.n, ring).rows]
        self.Vi = [list(row) for row in Matrix.identity(self.n, ring).rows]

    def add_row(self, target: int, source: int, c: Any) -> None:
        for M in (self.A, self.U):
            M[target] = [a + c * b if b else a for a, b in zip(M[target], M[source])]
        for row in self.Ui:
            if row[target]:
                row[source] = row[source] - c * row[target]

    def add_col(self, target: int, source: int, c: Any) -> None:
        for M in (self.A, self.V):
            for row in M:
                if row[source]:
                    row[target] = row[target] + c * row[source]
        self.Vi[source] = [a - c * b if b else a for a, b in zip(self.Vi[source], self.Vi[target])]

    def swap_rows(self, a: int, b: int) -> None:
        if a == b:
            return
        for M in (self.A, self.U):
            M[a], M[b] = M[b], M[a]
        for row in self.Ui:
            row[a], row[b] = row[b], row[a]

    def swap_cols(self, a: int, b: int) -> None:
        if a == b:
            return
        for M in (self.A, self.V):
            for row in M:
                row[a], row[b] = row[b], row[a]
        self.Vi[a], self.Vi[b] = self.Vi[b], self.Vi[a]

    def scale_row(self, k: int, unit: Any) -> None:
        inverse = self.euclid.unit_inverse(unit)
        self.A[k] = [x * unit for x in self.A[k]]
        self.U[k] = [x * unit for x in self.U[k]]
        for row in self.Ui:
            row[k] = row[k] * inverse

    def pick_pivot(self, k: int) -> tuple[int, int] | None:
        best = None
        for i in range(k, self.m):
            for j in range(k, self.n):
                x = self.A[i][j]
                if x:
                    key = (self.euclid.norm(x), i, j)
                    if best is None or key < best:
                        best = key
        return None if best is None else (best[1], best[2])

    def find_indivisible(self, k: int) -> int | None:
        pivot = self.A[k][k]
        for i in range(k + 1, self.m):
            for j in range(k + 1, self.n):
                x = self.A[i][j]
                if x and self.euclid.divmod(x, pivot)[1]:
                    return i
        return None

    def run(self) -> int:
        for k in range(min(self.m, self.n)):
            while True:
                pivot = self.pick_pivot(k)
                if pivot is None:
                    return k
                self.swap_rows(k, pivot[0])
                self.swap_cols(k, pivot[1])
                p = self.A[k][k]
                dirty = False
                for i in range(k + 1, self.m):
                    if self.A[i][k]:
                        q, r = self.euclid.divmod(self.A[i][k], p)
                        self.add_row(i, k, -q)
                        dirty = dirty or bool(r)
                for j in range(k + 1, self.n):
                    if self.A[k][j]:
                        q, r = self.euclid.divmod(self.A[k][j], p)
                        self.add_col(j, k, -q)
                        dirty = dirty or bool(r)
                if dirty:
                    continue
                offending = self.find_indivisible(k)
                if offending is not None:
                    self.add_row(k, offending, one(self.ring))
                    continue
                break
            unit, _ = self.euclid.unit_normal(self.A[k][k])
            if unit != one(self.ring):
                self.scale_row(k, self.euclid.unit_inverse(unit))
        return min(self.m, self.n)

    def result(self, rank: int) -> SnfResult:
        m, n, ring = self.m, self.n, self.ring
        return SnfResult(
            U=Matrix(self.U, ring, m),
            D=Matrix(self.A, ring, n),
            V=Matrix(self.V, ring, n),
            U_inv=Matrix(self.Ui, ring, m),
            V_inv=Matrix(self.Vi, ring, n),
            rank=rank,
        )


def snf(matrix: Matrix, verify: bool | None = None) -> SnfResult:
    """
    Smith normal form with certificates over ZZ (for Z) or QQ[t, t^-1] (for Laurent tags).

    verify defaults to the verify_certificates setting.
    """
    if matrix.ring.is_field:
        raise ValueError(f"Smith normal form over the field {matrix.ring.display}; use rank_kernel_image")
    ring = matrix.ring.pid
    reducer = _Reducer(matrix, ring)
    rank = reducer.run()
    result = reducer.result(rank)
    check = app_settings.verify_certificates if verify is None else verify
    if check:
        result.verify(matrix)
    logger.debug("snf %sx%s over %s: rank=%s", matrix.nrows, matrix.ncols, ring.display, rank)
    return result


def kernel_basis(matrix: Matrix, verify: bool | None = None) -> Matrix:
    """Columns form a basis of the kernel over the PID (saturated by construction)."""
    result = snf(matrix, verify)
    return result.V.select_columns(range(result.rank, matrix.ncols))


def image_basis(matrix: Matrix, verify: bool | None = None) -> Matrix:
    """Columns form a basis of the column span over the PID."""
    result = snf(matrix, verify)
    return (matrix.with_ring(result.D.ring) @ result.V).select_columns(range(result.rank))
