"""
Monodromy of the open book induced on the boundary, and the homology of the boundary.

All computations are over Z with abelian classes. Arcs are dual-frame
integer vectors (their intersection numbers with the generators).
"""

import itertools
import logging
from typing import Any, Iterator, Sequence

from application.services.homology_service import HomologyService
from application.services.multisection_service import MultisectionService
from application.services.surface_service import SurfaceService
from core.algebra.linear import adapted_basis, image_basis, solve_in_ring
from core.algebra.matrix import Matrix
from core.algebra.rings import RingTag
from core.settings import app_settings
from domain.entities.chain_complex_model import ChainComplex
from domain.entities.diagram_model import Arc, MultisectionDiagram
from domain.entities.homology_model import HomologyReport
from domain.entities.monodromy_model import BoundaryHomologyResult, MonodromyResult, MonodromyStep
from domain.entities.surface_model import TwistSpec
from domain.exceptions.computation_errors import BasisCompletionError, IntegralityError, MonodromyError
from domain.exceptions.diagram_errors import ClosedModelError
from infrastructure.observability.logging.decorators import log_computation
from infrastructure.observability.tracing.decorators import trace_computation

logger = logging.getLogger(__name__)

Vector = tuple[int, ...]


def _add(u: Sequence[int], v: Sequence[int], scale: int = 1) -> Vector:
    return tuple(a + scale * b for a, b in zip(u, v))


class OpenBookService:
    """Arc recursion through the sectors, the monodromy matrix R and the map xi."""

    def __init__(
        self,
        multisection_service: MultisectionService | None = None,
        homology_service: HomologyService | None = None,
        max_subbasis_search: int | None = None,
    ) -> None:
        """
        Args:
            multisection_service: Supplies the submodules of the first sector
            homology_service: Computes the homology of the boundary complex
            max_subbasis_search: Cap on candidate sub-basis tuples; defaults to the setting
        """
        self.multisection_service = multisection_service or MultisectionService()
        self.homology_service = homology_service or HomologyService()
        self.max_subbasis_search = max_subbasis_search or app_settings.max_subbasis_search

    # inputs

    def default_arcs(self, diagram: MultisectionDiagram) -> tuple[Arc, ...]:
        """
        Arcs completing the dual images of the first collection to a basis of its dual complement.

        Raises:
            MonodromyError: The dual images do not span a direct summand
        """
        untwisted = diagram.untwisted()
        complement = self.multisection_service.J_orthogonal(untwisted, 0).generators
        dual_images = self.multisection_service.dual_L(untwisted, 0).generators
        if dual_images.rank() == 0:
            spanned = Matrix.zeros(complement.nrows, 0, RingTag.Z)
        else:
            spanned = image_basis(dual_images)
        try:
            completed = adapted_basis(complement, spanned)
        except (BasisCompletionError, IntegralityError) as exc:
            raise MonodromyError(f"cannot complete the first collection's dual images: {exc}") from exc
        columns = completed.basis.select_columns(range(completed.split, completed.basis.ncols)).columns()
        return tuple(Arc(f"e{k + 1}", tuple(int(x) for x in c)) for k, c in enumerate(columns))

    def _arcs(self, diagram: MultisectionDiagram, arcs: Sequence[Arc] | None) -> tuple[Arc, ...]:
        if arcs is None:
            arcs = diagram.arcs or self.default_arcs(diagram)
        arcs = tuple(arcs)
        surface = self.multisection_service.surface(diagram)
        for arc in arcs:
            if len(arc.vector) != diagram.rose.rank:
                raise MonodromyError(f"arc {arc.name} has {len(arc.vector)} coordinates, expected {diagram.rose.rank}")
            for label, word in zip(diagram.sector(0).labels(), diagram.sector(0).curves):
                if surface.evaluate(surface.abelian_class(word).coordinates, arc.vector):
                    raise MonodromyError(f"arc {arc.name} is not orthogonal to curve {label} of the first collection")
        return arcs

    def _candidate_subbases(self, diagram: MultisectionDiagram) -> Iterator[tuple[tuple[int, ...], ...]]:
        """Full collections first, then equal-size subsets of decreasing size."""
        n, p = diagram.n, diagram.p
        for q in range(p, 0, -1):
            yield from itertools.product(itertools.combinations(range(p), q), repeat=n)

    # recursion

    def _pairings(
        self, diagram: MultisectionDiagram, subbases: Sequence[Sequence[int]]
    ) -> tuple[list[list[Vector]], list[list[Vector]]]:
        surface = self.multisection_service.surface(diagram)
        loops, duals = [], []
        for i, chosen in enumerate(subbases):
            words = [diagram.sector(i).curves[k] for k in chosen]
            loops.append([surface.abelian_class(w).coordinates for w in words])
            duals.append([surface.dual(w).coordinates for w in words])
        return loops, duals

    def _run(
        self,
        diagram: MultisectionDiagram,
        arcs: Sequence[Arc],
        subbases: Sequence[Sequence[int]],
    ) -> MonodromyResult:
        n = diagram.n
        evaluate = SurfaceService.evaluate
        loops, duals = self._pairings(diagram, subbases)
        e: list[Vector] = [tuple(arc.vector) for arc in arcs]
        epsilon: list[Vector] = [tuple([0] * diagram.rose.rank) for _ in arcs]
        steps = []

        for i in range(n):
            nxt = (i + 1) % n
            size = len(loops[i])
            if size != len(loops[nxt]):
                raise MonodromyError(f"sub-bases of sectors {i + 1} and {nxt + 1} differ in size")
            P = Matrix([[evaluate(loops[nxt][m], duals[i][j]) for m in range(size)] for j in range(size)], RingTag.Z, size)
            if size and P.determinant() == 0:
                raise MonodromyError(
                    f"standard-position pairing singular between {diagram.sector(i).name} and {diagram.sector(nxt).name}"
                )
            rows = []
            for j, arc in enumerate(e):
                E_row = [-evaluate(loops[nxt][m], arc) for m in range(size)]
                try:
                    rows.append(solve_in_ring(P.T, E_row, RingTag.Z, f"R_{i + 1} row {j}") if size else [])
                except IntegralityError as exc:
                    raise MonodromyError(f"R_{i + 1} is not integral ({exc.context})") from exc
            R_i = Matrix(rows, RingTag.Z, size)

            for j in range(len(e)):
                for m in range(size):
                    coefficient = R_i[j, m]
                    if coefficient:
                        e[j] = _add(e[j], duals[i][m], coefficient)
                        epsilon[j] = _add(epsilon[j], loops[i][m], coefficient)
            for j, arc in enumerate(e):
                for m in range(size):
                    if evaluate(loops[nxt][m], arc):
                        raise MonodromyError(f"arc {arcs[j].name} meets {diagram.sector(nxt).name} after step {i + 1}")
            steps.append(MonodromyStep(i + 1, R_i, tuple(e), tuple(epsilon)))
            logger.debug("step %s: R=%s", i + 1, R_i.to_lists())

        R = self._final_matrix(diagram, arcs, e)
        return MonodromyResult(
            R=R,
            steps=tuple(steps),
            arc_names=tuple(a.name for a in arcs),
            subbases=tuple(tuple(s) for s in subbases),
            page=self.multisection_service.page_data(diagram),
            name=diagram.name,
        )

    def _final_matrix(self, diagram: MultisectionDiagram, arcs: Sequence[Arc], final: Sequence[Vector]) -> Matrix:
        """Column j: e-block coordinates of the final image of arc j in the basis (e, dual images of c_1)."""
        dual_images = self.multisection_service.dual_L(diagram.untwisted(), 0).generators
        if dual_images.rank():
            dual_images = image_basis(dual_images)
        else:
            dual_images = Matrix.zeros(diagram.rose.rank, 0, RingTag.Z)
        basis = Matrix.from_columns([a.vector for a in arcs], diagram.rose.rank, RingTag.Z).hstack(dual_images)
        columns = []
        for j, image in enumerate(final):
            try:
                coordinates = solve_in_ring(basis, image, RingTag.Z, f"image of arc {arcs[j].name}")
            except IntegralityError as exc:
                raise MonodromyError(f"image of arc {arcs[j].name} is not in the arc basis ({exc.context})") from exc
            columns.append(coordinates[: len(arcs)])
        return Matrix.from_columns(columns, len(arcs), RingTag.Z)

    @trace_computation(kind="monodromy")
    @log_computation(computation="monodromy_action")
    def monodromy_action(
        self,
        diagram: MultisectionDiagram,
        arcs: Sequence[Arc] | None = None,
        subbases: Sequence[Sequence[int]] | None = None,
    ) -> MonodromyResult:
        """
        Action of the monodromy on the arcs of the page.

        Args:
            diagram: Valid bounded diagram
            arcs: Dual-frame arcs orthogonal to the first collection; diagram arcs or a computed completion by default
            subbases: Curve indices per sector; searched automatically by default

        Returns:
            MonodromyResult: R with the per-sector R_i, arc images and epsilon traces

        Raises:
            MonodromyError: Singular pairings with no valid sub-basis, non-integral steps, arcs meeting c_1
        """
        if diagram.closed:
            raise ClosedModelError("monodromy_action")
        self.multisection_service.require_valid(diagram)
        diagram = diagram.with_twist(TwistSpec.trivial())
        arcs = self._arcs(diagram, arcs)
        subbases = subbases if subbases is not None else diagram.options.monodromy_subbases
        if subbases is not None:
            return self._run(diagram, arcs, subbases)

        failure: MonodromyError | None = None
        for candidate in itertools.islice(self._candidate_subbases(diagram), self.max_subbasis_search):
            try:
                result = self._run(diagram, arcs, candidate)
            except MonodromyError as exc:
                failure = failure or exc
                continue
            logger.debug("monodromy of %s uses sub-bases %s", diagram.name, candidate)
            return result
        if diagram.p == 0:
            return self._run(diagram, arcs, [() for _ in range(diagram.n)])
        detail = f" (first failure: {failure.reason})" if failure else ""
        raise MonodromyError(f"standard-position pairing singular{detail}")

    # boundary homology

    def open_book_homology(self, components: int, xi: Matrix) -> HomologyReport:
        """Homology of 0 -> Z^s -> H1(page, boundary) -> H1(page) -> Z^s -> 0 with middle map xi."""
        rows, cols = xi.shape
        complex_ = ChainComplex(
            ring=RingTag.Z,
            low=0,
            ranks=(components, rows, cols, components),
            maps={
                1: Matrix.zeros(components, rows, RingTag.Z),
                2: xi.with_ring(RingTag.Z),
                3: Matrix.zeros(cols, components, RingTag.Z),
            },
            name="open_book",
        )
        return self.homology_service.homology_over_z(complex_)

    @trace_computation(kind="monodromy")
    def boundary_homology(
        self,
        diagram: MultisectionDiagram,
        arcs: Sequence[Arc] | None = None,
        subbases: Sequence[Sequence[int]] | None = None,
    ) -> BoundaryHomologyResult:
        """
        Homology of the boundary 3-manifold from the epsilon traces.

        Each final epsilon vector is written in a basis of J_1 (loop frame)
        that starts with the curves of the first collection; the remaining
        block gives one column of xi, and S is the transpose of xi.
        """
        monodromy = self.monodromy_action(diagram, arcs, subbases)
        untwisted = diagram.untwisted()
        lattice = self.multisection_service.loop_J(untwisted, 0).generators
        curves = self.multisection_service.curve_matrix(untwisted, 0, TwistSpec.trivial())
        try:
            completion = adapted_basis(lattice, curves)
        except (BasisCompletionError, IntegralityError) as exc:
            raise MonodromyError(f"cannot complete the first collection to a basis of J_1: {exc}") from exc

        columns: list[list[Any]] = []
        for name, vector in zip(monodromy.arc_names, monodromy.final_epsilon):
            try:
                coordinates = completion.coordinates(vector, f"epsilon of arc {name}")
            except IntegralityError as exc:
                raise MonodromyError(f"epsilon of arc {name} is not in J_1 ({exc.context})") from exc
            columns.append(coordinates[completion.split:])
        rows = completion.basis.ncols - completion.split
        xi = Matrix.from_columns(columns, rows, RingTag.Z)
        homology = self.open_book_homology(monodromy.page.components, xi)
        labels = tuple(f"b{k + 1}" for k in range(rows))
        logger.info("boundary of %s: %s", diagram.name, homology.summary("H"))
        return BoundaryHomologyResult(
            xi=xi,
            S=xi.T,
            monodromy=monodromy,
            homology=homology,
            page=monodromy.page,
            completion_labels=labels,
        )
