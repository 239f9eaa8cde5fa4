import logging
from typing import Any, Sequence

from sympy import Matrix as SymbolicMatrix
from sympy import Symbol, real_roots

from application.services.homology_service import HomologyService
from application.services.multisection_service import MultisectionService
from application.services.surface_service import SurfaceService
from core.algebra.linear import in_span, lattice_intersection, module_intersection_laurent, solve_in_ring
from core.algebra.matrix import Matrix
from core.algebra.rings import RingTag, conjugate, zero
from domain.entities.cycle_model import CycleCoords, CycleKind
from domain.entities.diagram_model import MultisectionDiagram
from domain.entities.form_model import FormReport
from domain.entities.surface_model import Frame, TwistSpec
from domain.exceptions.computation_errors import CycleError, IntegralityError
from domain.exceptions.diagram_errors import BoundedModelError, ClosedModelError
from infrastructure.observability.tracing.decorators import trace_computation

logger = logging.getLogger(__name__)


def _blocks(flat: Sequence[Any], sizes: Sequence[int]) -> tuple[tuple[Any, ...], ...]:
    out = []
    start = 0
    for size in sizes:
        out.append(tuple(flat[start:start + size]))
        start += size
    return tuple(out)


def signature(gram: Matrix) -> int:
    """Signature of the symmetric part of an integer matrix, from the real roots of its characteristic polynomial."""
    if gram.nrows == 0:
        return 0
    symmetric = SymbolicMatrix(gram.to_lists()) + SymbolicMatrix(gram.to_lists()).T
    roots = real_roots(symmetric.charpoly(Symbol("lam")))
    return sum(1 for r in roots if r > 0) - sum(1 for r in roots if r < 0)


class IntersectionFormService:
    """Equivariant intersection pairings on H2, and between H1 and H3."""

    def __init__(
        self,
        multisection_service: MultisectionService | None = None,
        homology_service: HomologyService | None = None,
    ) -> None:
        self.multisection_service = multisection_service or MultisectionService()
        self.homology_service = homology_service or HomologyService()

    # cycles

    def absolute_cycle(
        self, diagram: MultisectionDiagram, blocks: Sequence[Sequence[Any]], twist: TwistSpec | None = None
    ) -> CycleCoords:
        """H2 chain given by curve coordinates per sector; must have zero boundary in the surface."""
        twist = diagram.twist if twist is None else twist
        kind = CycleKind.CLOSED_H2 if diagram.closed else CycleKind.ABSOLUTE_H2
        cycle = CycleCoords(kind, tuple(tuple(b) for b in blocks), twist.ring)
        self._check_absolute(diagram, cycle, twist)
        return cycle

    def relative_cycle(
        self, diagram: MultisectionDiagram, blocks: Sequence[Sequence[Any]], twist: TwistSpec | None = None
    ) -> CycleCoords:
        """H2 relative chain given by coordinates in each J_i basis."""
        twist = diagram.twist if twist is None else twist
        cycle = CycleCoords(CycleKind.RELATIVE_H2, tuple(tuple(b) for b in blocks), twist.ring)
        self._check_relative(diagram, cycle, twist)
        return cycle

    def relative_cycle_from_dual(
        self, diagram: MultisectionDiagram, vectors: Sequence[Sequence[Any]], twist: TwistSpec | None = None
    ) -> CycleCoords:
        """Relative H2 chain given by one dual-frame vector per sector, each lying in J_i."""
        twist = diagram.twist if twist is None else twist
        blocks = []
        for i, vector in enumerate(vectors):
            J = self.multisection_service.J_orthogonal(diagram, i, twist).generators
            try:
                blocks.append(solve_in_ring(J, vector, twist.ring, f"sector {diagram.sector(i).name}"))
            except IntegralityError as exc:
                raise CycleError(f"vector {list(vector)} does not lie in J of sector {diagram.sector(i).name}") from exc
        return self.relative_cycle(diagram, blocks, twist)

    def _loop_vectors(self, diagram: MultisectionDiagram, cycle: CycleCoords, twist: TwistSpec) -> list[tuple[Any, ...]]:
        if len(cycle.blocks) != diagram.n:
            raise CycleError(f"expected {diagram.n} blocks, got {len(cycle.blocks)}")
        vectors = []
        for i, block in enumerate(cycle.blocks):
            F = self.multisection_service.curve_matrix(diagram, i, twist)
            if len(block) != F.ncols:
                raise CycleError(f"block {i} has {len(block)} entries, sector has {F.ncols} curves")
            vectors.append(F.apply(block))
        return vectors

    def _dual_vectors(self, diagram: MultisectionDiagram, cycle: CycleCoords, twist: TwistSpec) -> list[tuple[Any, ...]]:
        if len(cycle.blocks) != diagram.n:
            raise CycleError(f"expected {diagram.n} blocks, got {len(cycle.blocks)}")
        vectors = []
        for i, block in enumerate(cycle.blocks):
            J = self.multisection_service.J_orthogonal(diagram, i, twist).generators
            if len(block) != J.ncols:
                raise CycleError(f"block {i} has {len(block)} entries, J has {J.ncols} generators")
            vectors.append(J.apply(block))
        return vectors

    def _check_absolute(self, diagram: MultisectionDiagram, cycle: CycleCoords, twist: TwistSpec) -> None:
        total = [zero(twist.ring)] * diagram.rose.rank
        for vector in self._loop_vectors(diagram, cycle, twist):
            total = [a + b for a, b in zip(total, vector)]
        if any(total):
            raise CycleError("the curve combinations do not sum to zero in the surface")

    def _check_relative(self, diagram: MultisectionDiagram, cycle: CycleCoords, twist: TwistSpec) -> None:
        total = [zero(twist.ring)] * diagram.rose.rank
        for vector in self._dual_vectors(diagram, cycle, twist):
            total = [a + b for a, b in zip(total, vector)]
        if any(total):
            raise CycleError("the J-combinations do not sum to zero in the surface")

    # pairings

    def pair_H2(
        self,
        diagram: MultisectionDiagram,
        h1: CycleCoords,
        h2: CycleCoords,
        twist: TwistSpec | None = None,
    ) -> Any:
        """
        Sum over sector pairs i < j of the surface pairing of x_i (loop frame) with y_j (dual frame).

        Args:
            diagram: Bounded diagram
            h1: Absolute cycle in curve coordinates
            h2: Relative cycle in J coordinates

        Returns:
            Value in Z, or in Z[t,t^-1] for a twist
        """
        if diagram.closed:
            raise ClosedModelError("pair_H2")
        twist = diagram.twist if twist is None else twist
        self._check_absolute(diagram, h1, twist)
        self._check_relative(diagram, h2, twist)
        xs = self._loop_vectors(diagram, h1, twist)
        ys = self._dual_vectors(diagram, h2, twist)
        total: Any = zero(twist.ring)
        for i in range(diagram.n):
            for j in range(i + 1, diagram.n):
                total = total + SurfaceService.evaluate(xs[i], ys[j])
        return total

    def triple_intersection(self, diagram: MultisectionDiagram, frame: Frame, twist: TwistSpec | None = None) -> Matrix:
        """Basis of the intersection of all L_i (loop frame) or of all J_i (dual frame)."""
        twist = diagram.twist if twist is None else twist
        if frame is Frame.LOOP:
            blocks = [self.multisection_service.curve_matrix(diagram, i, twist) for i in range(diagram.n)]
        else:
            blocks = [self.multisection_service.J_orthogonal(diagram, i, twist).generators for i in range(diagram.n)]
        meet = lattice_intersection if twist.ring is RingTag.Z else module_intersection_laurent
        current = blocks[0]
        for block in blocks[1:]:
            current = meet(current, block)
        return current

    def pair_H1_H3(
        self,
        diagram: MultisectionDiagram,
        a: Sequence[Any],
        b: Sequence[Any],
        twist: TwistSpec | None = None,
        relative_h3: bool = True,
    ) -> Any:
        """
        Surface pairing of an H1 class with an H3 class.

        With ``relative_h3`` (default) a is a loop-frame class of H1(X) and b a
        dual-frame vector in every J_i; otherwise a is a dual-frame class of
        H1(X, boundary) and b a loop-frame vector in every L_i, and the value
        is conjugated so that it stays linear in b.
        """
        twist = diagram.twist if twist is None else twist
        frame = Frame.DUAL if relative_h3 else Frame.LOOP
        meet = self.triple_intersection(diagram, frame, twist)
        if any(b) and not in_span(meet, b):
            raise CycleError(f"{list(b)} does not lie in the intersection of all {'J' if relative_h3 else 'L'}_i")
        if relative_h3:
            return SurfaceService.evaluate(a, b)
        return conjugate(SurfaceService.evaluate(b, a))

    def _closed_pair(
        self, diagram: MultisectionDiagram, omega: Matrix, h1: CycleCoords, h2: CycleCoords, twist: TwistSpec
    ) -> Any:
        xs = self._loop_vectors(diagram, h1, twist)
        ys = self._loop_vectors(diagram, h2, twist)
        total: Any = zero(twist.ring)
        for i in range(diagram.n):
            for j in range(i + 1, diagram.n):
                total = total + SurfaceService.evaluate(xs[i], omega.apply(ys[j]))
        return total

    @trace_computation(kind="forms")
    def closed_H2_form(
        self,
        diagram: MultisectionDiagram,
        basis: Sequence[CycleCoords] | None = None,
        twist: TwistSpec | None = None,
    ) -> FormReport:
        """
        Gram matrix of the H2 pairing of a closed diagram, both arguments in the L_i.

        Args:
            diagram: Closed diagram
            basis: Cycles in curve coordinates; extracted from the closed complex when omitted
            twist: Optional twist overriding the diagram's own

        Returns:
            FormReport: Gram matrix, rank, determinant and (untwisted) signature
        """
        if not diagram.closed:
            raise BoundedModelError("closed_H2_form")
        twist = diagram.twist if twist is None else twist
        if basis is None:
            basis = self.auto_h2_basis(diagram, twist)
        omega = SurfaceService(diagram.rose).pairing_matrix(twist)
        for cycle in basis:
            self._check_absolute(diagram, cycle, twist)
        rows = [[self._closed_pair(diagram, omega, u, v, twist) for v in basis] for u in basis]
        gram = Matrix(rows, twist.ring, len(basis))
        labels = tuple(f"h2_{k + 1}" for k in range(len(basis)))
        untwisted = twist.is_trivial()
        report = FormReport(
            kind="closed_h2",
            matrix=gram,
            rank=gram.rank(),
            determinant=gram.determinant(),
            signature=signature(gram) if untwisted else None,
            symmetric=gram == gram.T if untwisted else None,
            row_labels=labels,
            col_labels=labels,
        )
        logger.debug("closed H2 form of %s: %s", diagram.name, gram)
        return report

    # automatic bases

    def auto_h2_basis(self, diagram: MultisectionDiagram, twist: TwistSpec | None = None) -> list[CycleCoords]:
        """Free H2 cycles of the absolute (or closed) complex, split into per-sector curve coordinates."""
        twist = diagram.twist if twist is None else twist
        complex_ = (
            self.multisection_service.build_closed_complex(diagram, twist)
            if diagram.closed
            else self.multisection_service.build_absolute_complex(diagram, twist)
        )
        cycles = self.homology_service.cycle_representatives(complex_, 2)
        sizes = [len(c.curves) for c in diagram.collections]
        kind = CycleKind.CLOSED_H2 if diagram.closed else CycleKind.ABSOLUTE_H2
        return [CycleCoords(kind, _blocks(v, sizes), complex_.ring) for v in cycles.vectors()]

    def auto_relative_h2_basis(self, diagram: MultisectionDiagram, twist: TwistSpec | None = None) -> list[CycleCoords]:
        twist = diagram.twist if twist is None else twist
        complex_ = self.multisection_service.build_relative_complex(diagram, twist)
        cycles = self.homology_service.cycle_representatives(complex_, 2)
        sizes = [self.multisection_service.J_orthogonal(diagram, i, twist).count for i in range(diagram.n)]
        return [CycleCoords(CycleKind.RELATIVE_H2, _blocks(v, sizes), complex_.ring) for v in cycles.vectors()]

    @trace_computation(kind="forms")
    def bounded_H2_pairing(self, diagram: MultisectionDiagram, twist: TwistSpec | None = None) -> FormReport:
        """Pairing matrix between auto-extracted bases of H2(X) and H2(X, boundary)."""
        if diagram.closed:
            raise ClosedModelError("bounded_H2_pairing")
        twist = diagram.twist if twist is None else twist
        rows_basis = self.auto_h2_basis(diagram, twist)
        cols_basis = self.auto_relative_h2_basis(diagram, twist)
        rows = [[self.pair_H2(diagram, u, v, twist) for v in cols_basis] for u in rows_basis]
        matrix = Matrix(rows, twist.ring, len(cols_basis))
        return FormReport(
            kind="h2_pairing",
            matrix=matrix,
            rank=matrix.rank(),
            determinant=matrix.determinant() if matrix.is_square() else None,
            row_labels=tuple(f"h2_{k + 1}" for k in range(len(rows_basis))),
            col_labels=tuple(f"h2rel_{k + 1}" for k in range(len(cols_basis))),
        )

    @trace_computation(kind="forms")
    def bounded_H1_H3_pairing(self, diagram: MultisectionDiagram, twist: TwistSpec | None = None) -> FormReport:
        """Pairing matrix between a basis of the free part of H1(X) and the intersection of all J_i."""
        if diagram.closed:
            raise ClosedModelError("bounded_H1_H3_pairing")
        twist = diagram.twist if twist is None else twist
        complex_ = self.multisection_service.build_absolute_complex(diagram, twist)
        h1 = self.homology_service.cycle_representatives(complex_, 1).vectors()
        h3 = self.triple_intersection(diagram, Frame.DUAL, twist).columns()
        rows = [[self.pair_H1_H3(diagram, a, b, twist) for b in h3] for a in h1]
        matrix = Matrix(rows, twist.ring, len(h3))
        return FormReport(
            kind="h1_h3_pairing",
            matrix=matrix,
            rank=matrix.rank(),
            determinant=matrix.determinant() if matrix.is_square() else None,
            row_labels=tuple(f"h1_{k + 1}" for k in range(len(h1))),
            col_labels=tuple(f"h3rel_{k + 1}" for k in range(len(h3))),
        )
