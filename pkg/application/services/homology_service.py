import logging
from dataclasses import dataclass
from typing import Any

from core.algebra.linear import primitive_columns, rank_kernel_image, solve_over_field, to_ring
from core.algebra.matrix import Matrix
from core.algebra.rings import RingTag, euclid_for
from core.algebra.snf import snf
from domain.entities.chain_complex_model import ChainComplex
from domain.entities.homology_model import CycleBasis, HomologyGroup, HomologyReport
from domain.exceptions.computation_errors import IntegralityError
from infrastructure.observability.logging.decorators import log_computation
from infrastructure.observability.tracing.decorators import trace_computation

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class _DegreeData:
    """Kernel basis of d_k and the relations d_{k+1} written against it."""

    kernel: Matrix
    relations: Matrix
    free_rank: int
    torsion: tuple[Any, ...]
    free_cycles: Matrix


def _kernel_frame(d: Matrix, ring: RingTag) -> tuple[int, Matrix, Matrix]:
    """(rank, V, V_inv) with the last columns of V spanning ker d."""
    if d.nrows == 0 or d.ncols == 0:
        identity = Matrix.identity(d.ncols, ring)
        return 0, identity, identity
    result = snf(d)
    return result.rank, result.V, result.V_inv


class HomologyService:
    """Homology of chain complexes over Z, the Laurent rings and fields."""

    def homology(self, complex_: ChainComplex) -> HomologyReport:
        """Dispatch on the coefficient ring of the complex."""
        if complex_.ring.is_field:
            return self.homology_over_field(complex_)
        if complex_.ring.is_laurent:
            return self.homology_over_laurent(complex_)
        return self.homology_over_z(complex_)

    def _degree(self, complex_: ChainComplex, k: int) -> _DegreeData:
        ring = complex_.ring.pid
        n_k = complex_.rank(k)
        d_k = complex_.boundary(k).with_ring(ring)
        d_next = complex_.boundary(k + 1).with_ring(ring)

        r, V, V_inv = _kernel_frame(d_k, ring)
        kernel = V.select_columns(range(r, n_k))
        relations = (V_inv @ d_next).select_rows(range(r, n_k)) if n_k else Matrix.zeros(0, d_next.ncols, ring)

        if relations.nrows == 0 or relations.ncols == 0:
            return _DegreeData(kernel, relations, relations.nrows, (), kernel)

        presented = snf(relations)
        euclid = euclid_for(ring)
        torsion = tuple(f for f in presented.invariant_factors if not euclid.is_unit(f))
        r2 = presented.rank
        free_cycles = kernel @ presented.U_inv.select_columns(range(r2, relations.nrows))
        return _DegreeData(kernel, relations, relations.nrows - r2, torsion, free_cycles)

    @trace_computation(kind="homology")
    @log_computation(computation="homology_over_z")
    def homology_over_z(self, complex_: ChainComplex) -> HomologyReport:
        """
        Integral homology via compatible bases.

        The kernel of d_k is read off the Smith form of d_k (a saturated
        lattice), and d_{k+1} rewritten in that kernel basis is diagonalized
        again; invariant factors above 1 are the torsion coefficients.

        Args:
            complex_: Complex over Z

        Returns:
            HomologyReport: One group per degree of the complex
        """
        complex_.check_integrity()
        if complex_.ring is not RingTag.Z:
            raise ValueError(f"homology_over_z needs a complex over Z, got {complex_.ring.display}")
        groups = []
        for k in complex_.degrees:
            data = self._degree(complex_, k)
            groups.append(HomologyGroup(k, data.free_rank, data.torsion, RingTag.Z, data.relations))
        return HomologyReport(
            ring=RingTag.Z,
            groups=tuple(groups),
            name=complex_.name,
            acyclic=all(g.is_zero() for g in groups),
            exact_bases=complex_.exact_bases,
        )

    @trace_computation(kind="homology")
    @log_computation(computation="homology_over_field")
    def homology_over_field(self, complex_: ChainComplex) -> HomologyReport:
        """
        Betti numbers over Q or Q(t); integral and Laurent complexes are read in their fraction field.

        Args:
            complex_: Any complex

        Returns:
            HomologyReport: Free ranks only, with the acyclic flag
        """
        complex_.check_integrity()
        field = complex_.ring.fraction_field
        ranks = {k: complex_.boundary(k).rank() for k in range(complex_.low, complex_.high + 2)}
        groups = []
        for k in complex_.degrees:
            betti = complex_.rank(k) - ranks[k] - ranks[k + 1]
            groups.append(HomologyGroup(k, betti, (), field))
        acyclic = all(g.free_rank == 0 for g in groups)
        logger.debug("%s over %s: betti=%s acyclic=%s", complex_.name, field.display, [g.free_rank for g in groups], acyclic)
        return HomologyReport(
            ring=field,
            groups=tuple(groups),
            name=complex_.name,
            acyclic=acyclic,
            exact_bases=complex_.exact_bases,
        )

    @trace_computation(kind="homology")
    @log_computation(computation="homology_over_laurent")
    def homology_over_laurent(self, complex_: ChainComplex) -> HomologyReport:
        """
        Invariant factors over Q[t,t^-1].

        For complexes over Z[t,t^-1] each group also carries an integral
        presentation: the columns of d_{k+1} written in a primitive integral
        basis of ker d_k. Over Z[t,t^-1] (not a PID) the groups are
        reported by presentation, not classified.
        """
        complex_.check_integrity()
        if not complex_.ring.is_laurent and complex_.ring is not RingTag.Z:
            raise ValueError(f"homology_over_laurent needs a Laurent complex, got {complex_.ring.display}")
        if complex_.ring is RingTag.Z:
            complex_ = complex_.with_ring(RingTag.Z_LAURENT)
        groups = []
        for k in complex_.degrees:
            data = self._degree(complex_, k)
            presentation = data.relations
            if complex_.ring is RingTag.Z_LAURENT:
                presentation = self._integral_presentation(data.kernel, complex_.boundary(k + 1))
            groups.append(HomologyGroup(k, data.free_rank, data.torsion, complex_.ring, presentation))
        return HomologyReport(
            ring=complex_.ring,
            groups=tuple(groups),
            name=complex_.name,
            acyclic=all(g.is_zero() for g in groups),
            exact_bases=complex_.exact_bases,
        )

    @staticmethod
    def _integral_presentation(kernel: Matrix, d_next: Matrix) -> Matrix:
        if kernel.ncols == 0:
            return Matrix.zeros(0, d_next.ncols, RingTag.Z_LAURENT)
        basis = primitive_columns(kernel)
        columns = []
        ring = RingTag.Z_LAURENT
        for j in range(d_next.ncols):
            coordinates = solve_over_field(basis, d_next.column(j))
            try:
                columns.append(to_ring(coordinates, RingTag.Z_LAURENT, "presentation"))
            except IntegralityError:
                ring = RingTag.Q_LAURENT
                columns.append(to_ring(coordinates, RingTag.Q_LAURENT, "presentation"))
        return Matrix.from_columns(columns, basis.ncols, ring)

    def cycle_representatives(self, complex_: ChainComplex, degree: int) -> CycleBasis:
        """
        Cycle vectors whose classes form a basis of the free part of H_degree.

        Over Z and the Laurent rings they come from the compatible-basis
        computation (made primitive over Z[t,t^-1]); over fields a greedy
        complement of the boundaries inside the cycles is returned.
        """
        complex_.check_integrity()
        if complex_.ring.is_field:
            cycles = self._field_cycles(complex_, degree)
        else:
            cycles = self._degree(complex_, degree).free_cycles
            if complex_.ring is RingTag.Z_LAURENT:
                cycles = primitive_columns(cycles)
        labels = tuple(f"h{degree}_{j + 1}" for j in range(cycles.ncols))
        return CycleBasis(degree, cycles, labels)

    @staticmethod
    def _field_cycles(complex_: ChainComplex, degree: int) -> Matrix:
        ring = complex_.ring
        kernel = rank_kernel_image(complex_.boundary(degree)).kernel
        chosen = rank_kernel_image(complex_.boundary(degree + 1)).image
        picked = []
        for column in kernel.columns():
            trial = chosen.hstack(Matrix.from_columns([column], kernel.nrows, ring))
            if trial.rank() > chosen.rank():
                chosen = trial
                picked.append(column)
        return Matrix.from_columns(picked, complex_.rank(degree), ring)
