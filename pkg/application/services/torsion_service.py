import logging
import random
from typing import Mapping, Sequence

from application.services.homology_service import HomologyService
from application.services.multisection_service import MultisectionService
from core.algebra.laurent import LaurentPoly
from core.algebra.matrix import Matrix
from core.algebra.rational_function import RationalFunction
from core.algebra.rings import RingTag, convert
from domain.entities.chain_complex_model import ChainComplex
from domain.entities.diagram_model import MultisectionDiagram, Variant
from domain.entities.surface_model import TwistSpec
from domain.entities.torsion_model import Ambiguity, TorsionValue
from domain.exceptions.computation_errors import HomologyBasisError
from infrastructure.observability.logging.decorators import log_computation
from infrastructure.observability.tracing.decorators import trace_computation

logger = logging.getLogger(__name__)


def pivot_columns(matrix: Matrix, order: Sequence[int] | None = None) -> list[int]:
    """Greedy maximal set of independent columns, scanned in ``order``."""
    order = list(range(matrix.ncols)) if order is None else list(order)
    chosen: list[int] = []
    rank = 0
    for j in order:
        trial = matrix.select_columns(chosen + [j])
        trial_rank = trial.rank()
        if trial_rank > rank:
            chosen.append(j)
            rank = trial_rank
    return sorted(chosen)


def parse_homology_basis(
    raw: Mapping[int, Sequence[Sequence[str]]], ring: RingTag
) -> dict[int, Matrix]:
    """Homology basis vectors given as scalar strings, keyed by degree."""
    parsed = {}
    for degree, vectors in raw.items():
        columns = [[convert(LaurentPoly.parse(x), ring) for x in vector] for vector in vectors]
        size = len(columns[0]) if columns else 0
        parsed[int(degree)] = Matrix.from_columns(columns, size, ring)
    return parsed


class TorsionService:
    """Reidemeister torsion of based complexes and of multisection diagrams."""

    def __init__(
        self,
        multisection_service: MultisectionService | None = None,
        homology_service: HomologyService | None = None,
    ) -> None:
        """
        Args:
            multisection_service: Complex builder
            homology_service: Used for the acyclicity check
        """
        self.multisection_service = multisection_service or MultisectionService()
        self.homology_service = homology_service or HomologyService()

    @trace_computation(kind="torsion")
    @log_computation(computation="torsion")
    def torsion(
        self,
        complex_: ChainComplex,
        homology_basis: Mapping[int, Matrix] | None = None,
        rng: random.Random | None = None,
    ) -> TorsionValue:
        """
        Alternating product of basis-change determinants over the fraction field.

        In each degree i the new basis is (b_i, h_i, lifted b_{i-1}): b_i are
        the images of a pivot set of columns of d_{i+1}, h_i the homology
        basis and the lift of b_{i-1} is the matching pivot set of basis
        vectors of C_i. The determinant of degree i enters with exponent
        (-1)^(i+1).

        Args:
            complex_: Based complex
            homology_basis: Cycle vectors (columns) per degree; required unless acyclic
            rng: Shuffles the pivot scan order when given

        Returns:
            TorsionValue: Canonical representative with its unit ambiguity

        Raises:
            HomologyBasisError: Missing, non-cycle or dependent homology basis
        """
        field = complex_.ring.fraction_field
        based = complex_.with_ring(field)
        based.check_integrity()
        report = self.homology_service.homology_over_field(based)
        homology_basis = dict(homology_basis or {})

        bases: dict[int, Matrix] = {}
        for group in report.groups:
            k = group.degree
            supplied = homology_basis.get(k)
            if group.free_rank == 0:
                if supplied is not None and supplied.ncols:
                    raise HomologyBasisError(f"H{k} vanishes over {field.display} but {supplied.ncols} vectors were given")
                bases[k] = Matrix.zeros(based.rank(k), 0, field)
                continue
            if supplied is None:
                raise HomologyBasisError("homology basis required")
            supplied = supplied.with_ring(field)
            if supplied.shape != (based.rank(k), group.free_rank):
                raise HomologyBasisError(
                    f"H{k} basis must be {group.free_rank} vectors of length {based.rank(k)}, got shape {supplied.shape}"
                )
            if not (based.boundary(k) @ supplied).is_zero():
                raise HomologyBasisError(f"H{k} basis vectors are not cycles")
            bases[k] = supplied

        pivots: dict[int, list[int]] = {}
        for k in range(based.low, based.high + 2):
            d = based.boundary(k)
            order = list(range(d.ncols))
            if rng is not None:
                rng.shuffle(order)
            pivots[k] = pivot_columns(d, order)

        raw = RationalFunction.one()
        for k in based.degrees:
            n_k = based.rank(k)
            b_k = based.boundary(k + 1).select_columns(pivots[k + 1])
            lifts = Matrix.identity(n_k, field).select_columns(pivots[k])
            change = b_k.hstack(bases[k], lifts)
            if change.shape != (n_k, n_k):
                raise HomologyBasisError(f"degree {k}: new basis has {change.ncols} vectors for rank {n_k}")
            det = RationalFunction.coerce(change.determinant())
            if det.is_zero():
                raise HomologyBasisError(f"H{k} basis is not independent modulo boundaries")
            raw = raw * (det if (k + 1) % 2 == 0 else det.inverse())

        exact = complex_.exact_bases
        value = TorsionValue(
            representative=raw.normalize_unit(rational_scalars=not exact),
            ambiguity=Ambiguity.SIGNED_T_POWERS if exact else Ambiguity.RATIONAL_T_POWERS,
            acyclic=report.acyclic,
            raw=raw,
            homology_basis="none" if report.acyclic else "supplied",
        )
        logger.debug("torsion of %s: raw=%s canonical=%s", complex_.name, raw, value)
        return value

    def torsion_of_diagram(
        self,
        diagram: MultisectionDiagram,
        twist: TwistSpec | None = None,
        variant: Variant = Variant.ABSOLUTE,
        homology_basis: Mapping[int, Matrix] | None = None,
        rng: random.Random | None = None,
    ) -> TorsionValue:
        """
        Torsion of the complex of a diagram in its natural bases: basepoint,
        generators, curve classes and the computed double-intersection bases.

        A basis stored in the diagram options is used when none is passed.
        """
        if twist is not None:
            diagram = diagram.with_twist(twist)
        self.multisection_service.require_valid(diagram)
        complex_ = self.multisection_service.build_complex(diagram, variant)
        if homology_basis is None and diagram.options.homology_basis:
            homology_basis = parse_homology_basis(diagram.options.homology_basis, complex_.ring.fraction_field)
        return self.torsion(complex_, homology_basis, rng)
