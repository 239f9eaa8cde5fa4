"""
Submodules and chain complexes of a multisection diagram.

Loop frame: coordinates in the generator basis of the surface homology.
Dual frame: coordinates pairing against loop vectors through
evaluate(u, v) = sum(conj(u_k) * v_k).
"""

import logging
from dataclasses import replace
from typing import Any, Sequence

from application.services.surface_service import SurfaceService, standard_rose
from core.algebra.linear import (
    Intersection,
    intersection_with_coordinates,
    primitive_columns,
    solve_over_field,
    to_ring,
)
from core.algebra.matrix import Matrix
from core.algebra.rings import RingTag, zero
from core.algebra.snf import kernel_basis
from domain.entities.chain_complex_model import ChainComplex
from domain.entities.diagram_model import (
    CurveCollection,
    MultisectionDiagram,
    Submodule,
    ValidationReport,
    Variant,
)
from domain.entities.monodromy_model import PageData
from domain.entities.surface_model import Frame, Letter, RoseSurface, TwistSpec, Word
from domain.exceptions.computation_errors import ComplexIntegrityError, IntegralityError
from domain.exceptions.diagram_errors import BoundedModelError, ClosedModelError, DiagramValidationError
from infrastructure.observability.logging.decorators import log_computation
from infrastructure.observability.logging.loki_handler import get_structured_logger, log_validation_event
from infrastructure.observability.tracing.decorators import trace_computation

logger = logging.getLogger(__name__)


def _hstack(blocks: Sequence[Matrix], nrows: int, ring: RingTag) -> Matrix:
    blocks = [b.with_ring(ring) for b in blocks if b.ncols]
    if not blocks:
        return Matrix.zeros(nrows, 0, ring)
    return blocks[0].hstack(*blocks[1:])


def _pair_label(previous: str, current: str, k: int, count: int) -> str:
    base = f"{previous}&{current}"
    return base if count == 1 else f"{base}_{k + 1}"


class MultisectionService:
    """Builds L_i, the orthogonal complements J_i, and the absolute, relative and closed complexes."""

    def __init__(self) -> None:
        self._surfaces: dict[RoseSurface, SurfaceService] = {}

    def surface(self, diagram: MultisectionDiagram) -> SurfaceService:
        if diagram.rose not in self._surfaces:
            self._surfaces[diagram.rose] = SurfaceService(diagram.rose)
        return self._surfaces[diagram.rose]

    # validation

    def validate(self, diagram: MultisectionDiagram) -> ValidationReport:
        """
        Homological validity checks; failures are reported, never raised.

        Args:
            diagram: Parsed diagram

        Returns:
            ValidationReport: Named reasons for every failed check plus page bookkeeping
        """
        surface = self.surface(diagram)
        reasons: list[str] = []
        ranks: dict[str, int] = {}
        p = diagram.p

        if diagram.n < 2:
            reasons.append(f"a multisection needs at least 2 sectors, got {diagram.n}")
        for collection in diagram.collections:
            if len(collection.curves) != p:
                reasons.append(f"collection {collection.name} has {len(collection.curves)} curves, expected {p}")
            columns = [surface.abelian_class(w).coordinates for w in collection.curves]
            rank = Matrix.from_columns(columns, diagram.rose.rank, RingTag.Z).rank()
            ranks[collection.name] = rank
            if rank < len(collection.curves):
                reasons.append(f"collection {collection.name} has rank {rank} < {len(collection.curves)}")

        if not diagram.twist.is_trivial():
            for collection in diagram.collections:
                for label, word in zip(collection.labels(), collection.curves):
                    if diagram.twist.word_image(word) != (1, 0):
                        reasons.append(f"twist does not kill curve {label}")

        page_genus = page_components = None
        if diagram.closed:
            if p != diagram.rose.genus:
                reasons.append(f"closed diagram needs p = g, got p = {p}, g = {diagram.rose.genus}")
        elif diagram.collections and not reasons:
            page = self.page_data(diagram)
            page_genus, page_components = page.genus, page.components
            if page.components < 1 or page.genus < 0:
                reasons.append(
                    f"page bookkeeping is inconsistent (components {page.components}, genus {page.genus})"
                )

        report = ValidationReport(
            valid=not reasons,
            reasons=reasons,
            collection_ranks=ranks,
            page_genus=page_genus,
            page_components=page_components,
            euler_characteristic=diagram.rose.euler_characteristic,
            name=diagram.name,
        )
        log_validation_event(
            get_structured_logger(__name__),
            diagram=diagram.name,
            valid=report.valid,
            reasons=reasons,
            page_genus=page_genus,
            page_components=page_components,
        )
        return report

    def require_valid(self, diagram: MultisectionDiagram) -> ValidationReport:
        report = self.validate(diagram)
        if not report.valid:
            raise DiagramValidationError(report.reasons)
        return report

    # submodules

    def curve_matrix(self, diagram: MultisectionDiagram, i: int, twist: TwistSpec | None = None) -> Matrix:
        """Columns are the twisted classes of the curves of sector i."""
        twist = diagram.twist if twist is None else twist
        surface = self.surface(diagram)
        columns = [surface.fox_class(w, twist).coordinates for w in diagram.sector(i).curves]
        return Matrix.from_columns(columns, diagram.rose.rank, twist.ring)

    def L_submodule(self, diagram: MultisectionDiagram, i: int, twist: TwistSpec | None = None) -> Submodule:
        return Submodule(self.curve_matrix(diagram, i, twist), Frame.LOOP, tuple(diagram.sector(i).labels()))

    def J_orthogonal(self, diagram: MultisectionDiagram, i: int, twist: TwistSpec | None = None) -> Submodule:
        """
        Dual-frame complement of L_i: the null space of conj(L_i)^T.

        Over Z[t,t^-1] the null space is computed over Q[t,t^-1] and each
        basis vector is scaled to a primitive integral vector.
        """
        if diagram.closed:
            raise ClosedModelError("J_orthogonal")
        curves = self.curve_matrix(diagram, i, twist)
        null = kernel_basis(curves.conjugate().T)
        if curves.ring is not RingTag.Z:
            null = primitive_columns(null)
        name = diagram.sector(i).name
        labels = tuple(f"J{name}_{k + 1}" for k in range(null.ncols))
        return Submodule(null.with_ring(curves.ring), Frame.DUAL, labels)

    def loop_J(self, diagram: MultisectionDiagram, i: int) -> Submodule:
        """Loop-frame classes with zero intersection against every curve of sector i (over Z)."""
        omega = self.surface(diagram).pairing_matrix()
        curves = self.curve_matrix(diagram, i, TwistSpec.trivial())
        null = kernel_basis((omega @ curves).T)
        return Submodule(null, Frame.LOOP)

    def dual_L(self, diagram: MultisectionDiagram, i: int) -> Submodule:
        """Dual-frame images of the curves of sector i (their intersection numbers with the generators)."""
        omega = self.surface(diagram).pairing_matrix()
        curves = self.curve_matrix(diagram, i, TwistSpec.trivial())
        return Submodule(omega @ curves, Frame.DUAL, tuple(diagram.sector(i).labels()))

    def page_data(self, diagram: MultisectionDiagram) -> PageData:
        """Genus, component count and rank bookkeeping of the page cut out by the first collection."""
        if diagram.closed:
            raise ClosedModelError("page_data")
        g, b = diagram.rose.genus, diagram.rose.boundary
        n_gens, p = diagram.rose.rank, diagram.p
        rank_L = self.curve_matrix(diagram, 0, TwistSpec.trivial()).rank()
        rank_dual_L = self.dual_L(diagram, 0).rank
        return PageData(
            genus=g - rank_dual_L,
            boundary=b,
            components=1 + p - rank_dual_L,
            rank_L=rank_L,
            rank_J=n_gens - rank_dual_L,
            rank_dual_L=rank_dual_L,
            rank_dual_J=n_gens - rank_L,
        )

    # complexes

    @staticmethod
    def _double_summands(blocks: Sequence[Matrix]) -> list[Intersection]:
        return [intersection_with_coordinates(blocks[i - 1], blocks[i]) for i in range(len(blocks))]

    @staticmethod
    def _difference_map(summands: Sequence[Intersection], sizes: Sequence[int], ring: RingTag) -> Matrix:
        """Summand i sends (x; y) with A_{i-1} x = A_i y to +y in block i and -x in block i-1."""
        n = len(sizes)
        offsets = [sum(sizes[:i]) for i in range(n)]
        total = sum(sizes)
        columns = []
        for i, found in enumerate(summands):
            previous = (i - 1) % n
            for c in range(found.basis.ncols):
                column = [zero(ring)] * total
                for r in range(sizes[i]):
                    column[offsets[i] + r] = column[offsets[i] + r] + found.right[r, c]
                for r in range(sizes[previous]):
                    column[offsets[previous] + r] = column[offsets[previous] + r] - found.left[r, c]
                columns.append(column)
        return Matrix.from_columns(columns, total, ring)

    @staticmethod
    def _pair_labels(names: Sequence[str], summands: Sequence[Intersection]) -> tuple[str, ...]:
        labels = []
        for i, found in enumerate(summands):
            count = found.basis.ncols
            labels += [_pair_label(names[i - 1], names[i], k, count) for k in range(count)]
        return tuple(labels)

    @staticmethod
    def _top_column(
        summands: Sequence[Intersection],
        names: Sequence[str],
        vector: Sequence[Any],
        ring: RingTag,
        degree: int,
    ) -> tuple[list[Any], RingTag]:
        """Coordinates of one vector in every double-intersection summand, stacked."""
        column: list[Any] = []
        widened = ring
        for i, found in enumerate(summands):
            if all(not x for x in vector):
                column += [zero(ring)] * found.basis.ncols
                continue
            solution = solve_over_field(found.basis, vector)
            if solution is None:
                raise ComplexIntegrityError(degree, f"top class does not lie in {names[i - 1]}&{names[i]}")
            context = f"top class in {names[i - 1]}&{names[i]}"
            try:
                column += to_ring(solution, ring, context)
            except IntegralityError:
                widened = RingTag.Q_LAURENT if ring.is_laurent else RingTag.Q
                column += to_ring(solution, widened, context)
        return column, widened

    def _finish(self, complex_: ChainComplex) -> ChainComplex:
        complex_.check_integrity()
        logger.debug("built %s over %s with ranks %s", complex_.name, complex_.ring.display, complex_.ranks)
        return complex_

    def _absolute_parts(self, diagram: MultisectionDiagram, twist: TwistSpec) -> dict[str, Any]:
        ring = twist.ring
        n_gens = diagram.rose.rank
        names = [c.name for c in diagram.collections]
        blocks = [self.curve_matrix(diagram, i, twist) for i in range(diagram.n)]
        summands = self._double_summands(blocks)
        d1 = Matrix([[twist.monomial(g) - 1 for g in diagram.rose.generators]], ring, n_gens)
        d2 = _hstack(blocks, n_gens, ring)
        d3 = self._difference_map(summands, [b.ncols for b in blocks], ring)
        curve_labels = tuple(label for c in diagram.collections for label in c.labels())
        return {
            "ring": ring,
            "names": names,
            "summands": summands,
            "maps": {1: d1, 2: d2, 3: d3},
            "ranks": (1, n_gens, d2.ncols, d3.ncols),
            "labels": {
                0: ("*",),
                1: diagram.rose.generators,
                2: curve_labels,
                3: self._pair_labels(names, summands),
            },
            "exact": all(s.exact for s in summands),
        }

    @trace_computation(kind="complex")
    @log_computation(computation="absolute_complex")
    def build_absolute_complex(self, diagram: MultisectionDiagram, twist: TwistSpec | None = None) -> ChainComplex:
        """
        Complex computing H_*(X): C3 = sum of L_{i-1}&L_i, C2 = sum of L_i, C1 = surface, C0 = point.

        Args:
            diagram: Bounded diagram
            twist: Optional twist overriding the diagram's own

        Returns:
            ChainComplex: Degrees 0..3, boundary maps verified to square to zero
        """
        if diagram.closed:
            raise ClosedModelError("build_absolute_complex")
        twist = diagram.twist if twist is None else twist
        parts = self._absolute_parts(diagram, twist)
        return self._finish(
            ChainComplex(
                ring=parts["ring"],
                low=0,
                ranks=parts["ranks"],
                maps=parts["maps"],
                labels=parts["labels"],
                name=f"{diagram.name}:absolute",
                exact_bases=parts["exact"],
            )
        )

    @trace_computation(kind="complex")
    @log_computation(computation="relative_complex")
    def build_relative_complex(self, diagram: MultisectionDiagram, twist: TwistSpec | None = None) -> ChainComplex:
        """
        Complex computing H_*(X, boundary): degrees 4..1 are the relative surface class,
        the sum of J_{i-1}&J_i, the sum of J_i and the dual-frame surface module.
        """
        if diagram.closed:
            raise ClosedModelError("build_relative_complex")
        twist = diagram.twist if twist is None else twist
        ring = twist.ring
        n_gens = diagram.rose.rank
        names = [c.name for c in diagram.collections]
        complements = [self.J_orthogonal(diagram, i, twist) for i in range(diagram.n)]
        blocks = [j.generators for j in complements]
        summands = self._double_summands(blocks)

        d2 = _hstack(blocks, n_gens, ring)
        d3 = self._difference_map(summands, [b.ncols for b in blocks], ring)
        # A based loop crosses the puncture circle twice, with deck elements 1 and phi(a), opposite signs.
        delta = [twist.monomial(g).inverse() - 1 for g in diagram.rose.generators]
        column, widened = self._top_column(summands, names, delta, ring, 4)
        d4 = Matrix.from_columns([column], d3.ncols, widened)

        exact = all(s.exact for s in summands) and (
            twist.is_trivial() or all(j.count <= 1 for j in complements)
        )
        complex_ = ChainComplex(
            ring=ring,
            low=1,
            ranks=(n_gens, d2.ncols, d3.ncols, 1),
            maps={2: d2, 3: d3, 4: d4},
            labels={
                1: tuple(f"{g}*" for g in diagram.rose.generators),
                2: tuple(label for j in complements for label in j.labels),
                3: self._pair_labels(names, summands),
                4: ("[S,S']",),
            },
            name=f"{diagram.name}:relative",
            exact_bases=exact,
        )
        if widened is not ring:
            complex_ = replace(complex_.with_ring(widened), exact_bases=False)
        return self._finish(complex_)

    @trace_computation(kind="complex")
    @log_computation(computation="closed_complex")
    def build_closed_complex(self, diagram: MultisectionDiagram, twist: TwistSpec | None = None) -> ChainComplex:
        """The absolute complex of the punctured model capped by the surface relator in degree 4."""
        if not diagram.closed:
            raise BoundedModelError("build_closed_complex")
        twist = diagram.twist if twist is None else twist
        parts = self._absolute_parts(diagram, twist)
        ring = parts["ring"]
        relator = self.surface(diagram).relator_class(twist).coordinates
        column, widened = self._top_column(parts["summands"], parts["names"], relator, ring, 4)
        maps = dict(parts["maps"])
        maps[4] = Matrix.from_columns([column], parts["ranks"][3], widened)
        labels = dict(parts["labels"])
        labels[4] = ("[S]",)
        complex_ = ChainComplex(
            ring=ring,
            low=0,
            ranks=parts["ranks"] + (1,),
            maps=maps,
            labels=labels,
            name=f"{diagram.name}:closed",
            exact_bases=parts["exact"],
        )
        if widened is not ring:
            complex_ = replace(complex_.with_ring(widened), exact_bases=False)
        return self._finish(complex_)

    def build_complex(
        self,
        diagram: MultisectionDiagram,
        variant: Variant,
        twist: TwistSpec | None = None,
    ) -> ChainComplex:
        if variant is Variant.RELATIVE:
            return self.build_relative_complex(diagram, twist)
        if variant is Variant.CLOSED:
            return self.build_closed_complex(diagram, twist)
        return self.build_absolute_complex(diagram, twist)


def _rename(word: Word, mapping: dict[str, str]) -> Word:
    return Word(tuple(Letter(mapping.get(l.generator, l.generator), l.exponent) for l in word))


def connected_sum(first: MultisectionDiagram, second: MultisectionDiagram) -> MultisectionDiagram:
    """
    Sector-wise connected sum: genera add, boundary counts add minus one,
    collections are concatenated sector by sector.

    Generators of the second diagram that clash with the first get a
    ``_2`` suffix. Arcs are not carried over.
    """
    if first.n != second.n:
        raise DiagramValidationError([f"connected sum needs equal sector counts, got {first.n} and {second.n}"])
    if first.closed != second.closed:
        raise DiagramValidationError(["connected sum of a closed and a bounded diagram"])

    taken = set(first.rose.generators)
    mapping = {g: (f"{g}_2" if g in taken else g) for g in second.rose.generators}

    def handles(rose, names):
        return list(names[: 2 * rose.genus]), list(names[2 * rose.genus:])

    h1, d1 = handles(first.rose, list(first.rose.generators))
    h2, d2 = handles(second.rose, [mapping[g] for g in second.rose.generators])
    genus = first.rose.genus + second.rose.genus
    if first.closed:
        rose = standard_rose(genus, 0, closed=True, generators=h1 + h2)
    else:
        boundary = first.rose.boundary + second.rose.boundary - 1
        rose = standard_rose(genus, boundary, generators=h1 + h2 + d1 + d2)

    collections = tuple(
        CurveCollection(a.name, a.curves + tuple(_rename(w, mapping) for w in b.curves))
        for a, b in zip(first.collections, second.collections)
    )
    twist = TwistSpec({**dict(first.twist.images), **{mapping[g]: v for g, v in second.twist.images.items()}})
    return MultisectionDiagram(
        rose=rose,
        collections=collections,
        twist=twist,
        name=f"{first.name}#{second.name}",
    )
