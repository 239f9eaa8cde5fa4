"""Kernel, image, solving and intersection helpers built on DomainMatrix and the Smith normal form."""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from math import gcd, lcm
from typing import Any, Sequence

from sympy.polys.domains import QQ

from core.algebra.laurent import LaurentPoly
from core.algebra.matrix import Matrix, common_ring
from core.algebra.rings import RingTag, convert, one, zero
from core.algebra.snf import SnfResult, image_basis, kernel_basis, snf
from domain.exceptions.computation_errors import BasisCompletionError, IntegralityError


@dataclass(frozen=True)
class KernelImage:
    rank: int
    kernel: Matrix
    image: Matrix


def rank_kernel_image(matrix: Matrix) -> KernelImage:
    """Rank, null-space basis and pivot-column image basis over the fraction field."""
    field = matrix.ring.fraction_field
    m, n = matrix.shape
    if m == 0 or n == 0:
        return KernelImage(0, Matrix.identity(n, field), Matrix.zeros(m, 0, field))
    rref, pivots = matrix.to_domain_matrix(over_field=True).rref()
    reduced = Matrix.from_domain_matrix(rref, field)
    pivots = list(pivots)
    kernel_columns = []
    for free in (j for j in range(n) if j not in pivots):
        vector = [zero(field)] * n
        vector[free] = one(field)
        for r, p in enumerate(pivots):
            vector[p] = -reduced[r, free]
        kernel_columns.append(vector)
    kernel = Matrix.from_columns(kernel_columns, n, field)
    return KernelImage(len(pivots), kernel, matrix.with_ring(field).select_columns(pivots))


def determinant(matrix: Matrix) -> Any:
    return matrix.determinant()


def solve_over_field(matrix: Matrix, vector: Sequence[Any]) -> list[Any] | None:
    """One solution x of matrix * x = vector over the fraction field, or None."""
    field = matrix.ring.fraction_field
    m, n = matrix.shape
    rhs = Matrix.from_columns([list(vector)], m, field)
    if n == 0:
        return [] if rhs.is_zero() else None
    if m == 0:
        return [zero(field)] * n
    augmented = matrix.with_ring(field).hstack(rhs)
    rref, pivots = augmented.to_domain_matrix().rref()
    if n in pivots:
        return None
    reduced = Matrix.from_domain_matrix(rref, field)
    solution = [zero(field)] * n
    for r, p in enumerate(pivots):
        solution[p] = reduced[r, n]
    return solution


def to_ring(values: Sequence[Any], ring: RingTag, context: str) -> list[Any]:
    try:
        return [convert(x, ring) for x in values]
    except ValueError as exc:
        raise IntegralityError(context) from exc


def solve_in_ring(matrix: Matrix, vector: Sequence[Any], ring: RingTag, context: str) -> list[Any]:
    """Coordinates of vector in the columns of matrix, required to lie in ring."""
    solution = solve_over_field(matrix, vector)
    if solution is None:
        raise IntegralityError(f"{context}: vector is not in the span")
    return to_ring(solution, ring, context)


def in_span(matrix: Matrix, vector: Sequence[Any]) -> bool:
    return solve_over_field(matrix, vector) is not None


def primitive_integer_vector(vector: Sequence[int]) -> list[int]:
    content = reduce(gcd, (abs(int(x)) for x in vector), 0)
    if content == 0:
        return [int(x) for x in vector]
    scaled = [int(x) // content for x in vector]
    lead = next(x for x in scaled if x)
    return [-x for x in scaled] if lead < 0 else scaled


def primitive_laurent_vector(vector: Sequence[Any]) -> list[LaurentPoly]:
    """
    Scale a QQ[t, t^-1] vector by an element of QQ(t) so that it becomes a
    primitive Z[t, t^-1] vector: no common polynomial factor, coprime integer
    coefficients, lowest exponent zero and positive leading coefficient on the
    first nonzero entry.
    """
    entries = [LaurentPoly.coerce(x) for x in vector]
    nonzero = [x for x in entries if x]
    if not nonzero:
        return entries
    common = reduce(lambda a, b: a.gcd(b), nonzero)
    entries = [x.exact_quotient(common) if x else x for x in entries]
    low = min(x.low_degree() for x in entries if x)
    entries = [x * LaurentPoly.monomial(1, -low) for x in entries]
    denominators = lcm(*(x.clear_denominators()[0] for x in entries if x))
    entries = [x.scale(denominators) for x in entries]
    content = reduce(gcd, (x.integer_content() for x in entries if x), 0)
    entries = [x.scale(QQ(1, content)) for x in entries]
    lead = next(x for x in entries if x)
    if lead.leading_coefficient() < 0:
        entries = [-x for x in entries]
    return entries


def primitive_columns(matrix: Matrix) -> Matrix:
    if matrix.ring.pid is RingTag.Z:
        columns = [primitive_integer_vector(c) for c in matrix.columns()]
        return Matrix.from_columns(columns, matrix.nrows, RingTag.Z)
    columns = [primitive_laurent_vector(c) for c in matrix.columns()]
    return Matrix.from_columns(columns, matrix.nrows, RingTag.Z_LAURENT)


@dataclass(frozen=True)
class Intersection:
    """Basis of span(A) cap span(B) with coordinates in the columns of A and of B."""

    basis: Matrix
    left: Matrix
    right: Matrix
    exact: bool


def intersection_with_coordinates(a: Matrix, b: Matrix) -> Intersection:
    """
    Kernel of [A | -B] over the PID. Each kernel vector (x; y) gives the
    intersection element A x = B y. Over QQ[t, t^-1] kernel vectors are made
    primitive over Z[t, t^-1]; such a basis is known to span the integral
    intersection when the intersection has rank at most one.
    """
    if a.nrows != b.nrows:
        raise ValueError("intersection requires a common ambient module")
    ring = common_ring(a.ring, b.ring)
    pid = ring.pid
    stacked = a.with_ring(pid).hstack(-(b.with_ring(pid)))
    kernel = kernel_basis(stacked)
    exact = True
    if pid is RingTag.Q_LAURENT:
        integral = ring is RingTag.Z_LAURENT
        if integral:
            kernel = primitive_columns(kernel)
            exact = kernel.ncols <= 1
        ring = RingTag.Z_LAURENT if integral else RingTag.Q_LAURENT
    left = kernel.select_rows(range(a.ncols)).with_ring(ring)
    right = kernel.select_rows(range(a.ncols, a.ncols + b.ncols)).with_ring(ring)
    basis = (a.with_ring(ring) @ left) if a.ncols else Matrix.zeros(a.nrows, kernel.ncols, ring)
    return Intersection(basis, left, right, exact)


def lattice_intersection(a: Matrix, b: Matrix) -> Matrix:
    """Z-basis of span_Z(A) cap span_Z(B)."""
    found = intersection_with_coordinates(a.with_ring(RingTag.Z), b.with_ring(RingTag.Z))
    if found.basis.ncols == 0:
        return found.basis
    return image_basis(found.basis)


def module_intersection_laurent(a: Matrix, b: Matrix) -> Matrix:
    """Basis of the intersection of the spans over the PID QQ[t, t^-1]."""
    found = intersection_with_coordinates(a.with_ring(RingTag.Q_LAURENT), b.with_ring(RingTag.Q_LAURENT))
    if found.basis.ncols == 0:
        return found.basis
    return image_basis(found.basis)


@dataclass(frozen=True)
class AdaptedBasis:
    """
    A basis of a lattice whose first ``split`` columns span a given direct
    summand; coordinates() expresses lattice vectors in that basis.
    """

    lattice: Matrix
    certificate: SnfResult
    basis: Matrix
    split: int

    def coordinates(self, vector: Sequence[Any], context: str = "adapted basis") -> list[int]:
        ring = self.lattice.ring
        inner = solve_in_ring(self.lattice, vector, ring, context)
        return list(self.certificate.U.apply(inner))


def adapted_basis(lattice: Matrix, sub: Matrix) -> AdaptedBasis:
    """Complete a basis of span(sub) to a basis of the lattice spanned by ``lattice``'s columns."""
    ring = lattice.ring
    coords = [solve_in_ring(lattice, column, ring, "sublattice coordinates") for column in sub.columns()]
    coordinate_matrix = Matrix.from_columns(coords, lattice.ncols, ring)
    certificate = snf(coordinate_matrix)
    if any(d != one(certificate.D.ring) for d in certificate.invariant_factors):
        raise BasisCompletionError("the sublattice is not a direct summand (nontrivial invariant factor)")
    basis = lattice @ certificate.U_inv
    return AdaptedBasis(lattice, certificate, basis, certificate.rank)
