"""
Combinatorics of the central surface as a one-vertex ribbon graph (rose).

Curves are edge paths on the rose. Parallel strands on an edge get disjoint
lanes, so every intersection of two curves happens inside a small disk
around the vertex, where passes are chords between edge ends and crossings
are detected by interleaving.
"""

import logging
from dataclasses import dataclass
from typing import Any, Sequence

from core.algebra.laurent import LaurentPoly, qq_to_int
from core.algebra.matrix import Matrix
from core.algebra.rings import RingTag, conjugate, zero
from domain.entities.surface_model import Frame, HalfEdge, HClass, Letter, RoseSurface, TwistSpec, Word
from domain.exceptions.diagram_errors import BoundedModelError, SurfaceConstructionError
from domain.exceptions.parse_errors import UnknownGeneratorError
from infrastructure.observability.logging.decorators import log_operation

logger = logging.getLogger(__name__)


def standard_generators(genus: int, boundary: int, closed: bool = False) -> tuple[str, ...]:
    names: list[str] = []
    for i in range(1, genus + 1):
        names += [f"a{i}", f"b{i}"]
    if not closed:
        names += [f"d{j}" for j in range(1, boundary)]
    return tuple(names)


def _ribbon_successor(word: Word, boundary_generators: Sequence[str]) -> dict[HalfEdge, HalfEdge]:
    """sigma: the half-edge following each half-edge counterclockwise around the vertex."""
    sigma: dict[HalfEdge, HalfEdge] = {}
    letters = word.letters
    for k, letter in enumerate(letters):
        sigma[letter.arrival] = letters[(k + 1) % len(letters)].departure
    for name in boundary_generators:
        sigma[(name, 1)] = (name, -1)
    return sigma


def _cycles(permutation: dict[HalfEdge, HalfEdge]) -> list[list[HalfEdge]]:
    seen: set[HalfEdge] = set()
    cycles = []
    for start in permutation:
        if start in seen:
            continue
        cycle = []
        current = start
        while current not in seen:
            seen.add(current)
            cycle.append(current)
            current = permutation[current]
        cycles.append(cycle)
    return cycles


@log_operation(operation_type="surface_construction")
def standard_rose(
    genus: int,
    boundary: int,
    closed: bool = False,
    generators: Sequence[str] | None = None,
) -> RoseSurface:
    """
    Build the rose of the standard surface word.

    Args:
        genus: Genus g of the central surface
        boundary: Number b of boundary components (0 for the closed model)
        closed: Build the once-punctured model of a closed surface
        generators: Optional custom generator names, in the order a1, b1, ..., ag, bg, d1, ...

    Returns:
        RoseSurface: Rose whose ribbon order reads the polygon word around the vertex

    Raises:
        SurfaceConstructionError: Invalid (g, b) or inconsistent ribbon structure
    """
    if genus < 0 or boundary < 0:
        raise SurfaceConstructionError(genus, boundary, "genus and boundary must be non-negative")
    if closed and boundary != 0:
        raise SurfaceConstructionError(genus, boundary, "the closed model takes boundary = 0")
    if closed and genus == 0:
        raise SurfaceConstructionError(genus, boundary, "the closed model needs genus >= 1")
    if not closed and boundary == 0:
        raise SurfaceConstructionError(genus, boundary, "a bounded surface needs boundary >= 1")

    default = standard_generators(genus, boundary, closed)
    names = tuple(generators) if generators is not None else default
    if len(names) != len(default):
        raise SurfaceConstructionError(genus, boundary, f"expected {len(default)} generator names, got {len(names)}")
    if len(set(names)) != len(names):
        raise SurfaceConstructionError(genus, boundary, "generator names must be distinct")

    letters: list[Letter] = []
    for i in range(genus):
        a, b = names[2 * i], names[2 * i + 1]
        letters += [Letter(a, 1), Letter(b, 1), Letter(a, -1), Letter(b, -1)]
    boundary_generators = names[2 * genus:]
    letters += [Letter(d, 1) for d in boundary_generators]
    polygon_word = Word(tuple(letters))

    if not names:
        return RoseSurface(genus, boundary, (), polygon_word, (), closed)

    sigma = _ribbon_successor(polygon_word, boundary_generators)
    if len(sigma) != 2 * len(names):
        raise SurfaceConstructionError(genus, boundary, "ribbon order does not cover every half-edge")
    ribbon = [(names[0], -1)]
    while len(ribbon) < len(sigma):
        following = sigma[ribbon[-1]]
        if following == ribbon[0]:
            raise SurfaceConstructionError(genus, boundary, "ribbon order is not a single cycle")
        ribbon.append(following)

    faces = _cycles({h: (sigma[h][0], -sigma[h][1]) for h in sigma})
    expected = 1 if closed else boundary
    if len(faces) != expected:
        raise SurfaceConstructionError(genus, boundary, f"face tracing found {len(faces)} boundary cycles, expected {expected}")

    logger.debug("rose g=%s b=%s closed=%s generators=%s", genus, boundary, closed, names)
    return RoseSurface(genus, boundary, names, polygon_word, tuple(ribbon), closed)


def in_arc(p: int, a: int, b: int, modulus: int) -> bool:
    """p lies strictly inside the counterclockwise arc from a to b."""
    return 0 < (p - a) % modulus < (b - a) % modulus


@dataclass(frozen=True)
class VertexPass:
    """A passage of a curve through the vertex disk, as a chord between two endpoint slots."""

    role: int
    index: int
    inbound: int
    outbound: int


@dataclass(frozen=True)
class VertexPicture:
    slots: int
    passes: tuple[VertexPass, ...]

    def of(self, role: int) -> list[VertexPass]:
        return [p for p in self.passes if p.role == role]


def crossing_sign(x_pass: VertexPass, y_pass: VertexPass, slots: int) -> int:
    """+1 when y leaves through the arc swept counterclockwise from x-in to x-out, -1 when it enters there, else 0."""
    a, b = x_pass.inbound, x_pass.outbound
    y_in = in_arc(y_pass.inbound, a, b, slots)
    y_out = in_arc(y_pass.outbound, a, b, slots)
    if y_out and not y_in:
        return 1
    if y_in and not y_out:
        return -1
    return 0


class SurfaceService:
    """Homology classes and intersection numbers of words on a fixed rose."""

    def __init__(self, rose: RoseSurface) -> None:
        """
        Args:
            rose: Rose surface whose generators the words are spelled in
        """
        self.rose = rose
        self._index = {name: i for i, name in enumerate(rose.generators)}
        self._positions = rose.positions()
        self._omega: Matrix | None = None

    # classes

    def _check(self, word: Word) -> None:
        for letter in word:
            if letter.generator not in self._index:
                raise UnknownGeneratorError(letter.generator, str(word))

    def abelian_class(self, word: Word) -> HClass:
        """Exponent-sum vector of the word in the generator basis."""
        self._check(word)
        coordinates = [0] * self.rose.rank
        for letter in word:
            coordinates[self._index[letter.generator]] += letter.exponent
        return HClass(tuple(coordinates), Frame.LOOP, RingTag.Z)

    def fox_class(self, word: Word, twist: TwistSpec) -> HClass:
        """
        Twisted class of a based loop: the vector of Fox derivatives evaluated through the twist.

        Args:
            word: Based loop at the vertex
            twist: Monomial twist

        Returns:
            HClass: Loop-frame coordinates over Z (trivial twist) or Z[t,t^-1]
        """
        self._check(word)
        ring = twist.ring
        coordinates: list[Any] = [zero(ring)] * self.rose.rank
        prefix = LaurentPoly.one()
        for letter in word:
            j = self._index[letter.generator]
            image = twist.monomial(letter.generator)
            if letter.exponent > 0:
                coordinates[j] = coordinates[j] + prefix
                prefix = prefix * image
            else:
                prefix = prefix * image.inverse()
                coordinates[j] = coordinates[j] - prefix
        return HClass(tuple(LaurentPoly.coerce(c) if ring is RingTag.Z_LAURENT else _as_int(c) for c in coordinates), Frame.LOOP, ring)

    def relator_class(self, twist: TwistSpec) -> HClass:
        """Twisted class of the polygon word of the closed model."""
        if not self.rose.closed:
            raise BoundedModelError("relator_class")
        return self.fox_class(self.rose.polygon_word, twist)

    # intersections

    def _letter_code(self, letter: Letter) -> int:
        return 2 * self._index[letter.generator] + (0 if letter.exponent > 0 else 1)

    def vertex_picture(self, x: Word, y: Word) -> VertexPicture:
        """
        Lay both cyclically reduced words out as parallel strands and list their vertex passes.

        Strands on one edge are stacked by their onward itinerary, then the
        backward one; the lane a strand takes at the + end of an edge is
        mirrored at the - end.
        """
        words = (x, y)
        horizon = len(x) + len(y)
        lanes: dict[str, list[tuple[Any, int, int]]] = {}
        for role, word in enumerate(words):
            n = len(word)
            for k, letter in enumerate(word):
                onward = tuple(self._letter_code(word[(k + j) % n]) for j in range(1, horizon + 1))
                backward = tuple(self._letter_code(word[(k - j) % n].inverse()) for j in range(1, horizon + 1))
                if letter.exponent < 0:
                    onward, backward = backward, onward
                lanes.setdefault(letter.generator, []).append(((onward, backward, role, k), role, k))

        endpoints: dict[tuple[int, int, str], tuple[int, int]] = {}
        for name, strands in lanes.items():
            strands.sort(key=lambda item: item[0])
            for rank, (_, role, k) in enumerate(strands):
                letter = words[role][k]
                for end, half_edge in (("dep", letter.departure), ("arr", letter.arrival)):
                    sub = rank if half_edge[1] > 0 else -rank
                    endpoints[(role, k, end)] = (self._positions[half_edge], sub)

        order = sorted(endpoints, key=lambda e: endpoints[e])
        slot = {e: i for i, e in enumerate(order)}
        passes = []
        for role, word in enumerate(words):
            n = len(word)
            for k in range(n):
                passes.append(VertexPass(role, k, slot[(role, (k - 1) % n, "arr")], slot[(role, k, "dep")]))
        return VertexPicture(len(order), tuple(passes))

    def _reduced_pair(self, x: Word, y: Word) -> tuple[Word, Word, Word, Word]:
        self._check(x)
        self._check(y)
        ux, cx = x.cyclic_reduction()
        uy, cy = y.cyclic_reduction()
        return ux, cx, uy, cy

    def algebraic_intersection(self, x: Word, y: Word) -> int:
        """Signed count of vertex crossings; calibrated so that <a_i, b_i> = +1."""
        _, cx, _, cy = self._reduced_pair(x, y)
        if not len(cx) or not len(cy):
            return 0
        picture = self.vertex_picture(cx, cy)
        return sum(
            crossing_sign(p, q, picture.slots) for p in picture.of(0) for q in picture.of(1)
        )

    def equivariant_intersection(self, x: Word, y: Word, twist: TwistSpec) -> LaurentPoly:
        """
        Sum over vertex crossings of sign * phi(prefix of x)^-1 * phi(prefix of y).

        Conjugate-linear in x, linear in y. For words that are not cyclically
        reduced, x = u x' u^-1, the conjugators contribute phi(u_x)^-1 phi(u_y).
        """
        ux, cx, uy, cy = self._reduced_pair(x, y)
        if not len(cx) or not len(cy):
            return LaurentPoly.zero()
        picture = self.vertex_picture(cx, cy)
        x_prefix = _prefix_images(cx, twist)
        y_prefix = _prefix_images(cy, twist)
        terms: dict[int, int] = {}
        for p in picture.of(0):
            for q in picture.of(1):
                sign = crossing_sign(p, q, picture.slots)
                if not sign:
                    continue
                sx, ex = x_prefix[p.index]
                sy, ey = y_prefix[q.index]
                exponent = ey - ex
                terms[exponent] = terms.get(exponent, 0) + sign * sx * sy
        value = LaurentPoly.from_terms(terms)
        return twist.word_monomial(ux).inverse() * twist.word_monomial(uy) * value

    def pairing_matrix(self, twist: TwistSpec | None = None) -> Matrix:
        """Omega[j][k] = <generator j, generator k>; over Z at the trivial twist."""
        twist = twist or TwistSpec.trivial()
        words = [Word((Letter(name, 1),)) for name in self.rose.generators]
        if twist.is_trivial():
            if self._omega is None:
                rows = [[self.algebraic_intersection(u, v) for v in words] for u in words]
                self._omega = Matrix(rows, RingTag.Z, self.rose.rank)
            return self._omega
        rows = [[self.equivariant_intersection(u, v, twist) for v in words] for u in words]
        return Matrix(rows, RingTag.Z_LAURENT, self.rose.rank)

    # frames

    def dual(self, word: Word) -> HClass:
        """Dual-frame coordinates of a loop: its intersection numbers with each generator."""
        coordinates = self.pairing_matrix().apply(self.abelian_class(word).coordinates)
        return HClass(tuple(coordinates), Frame.DUAL, RingTag.Z)

    @staticmethod
    def evaluate(u: Sequence[Any], v: Sequence[Any]) -> Any:
        """Pairing of loop-frame u with dual-frame v: sum of conj(u_k) * v_k."""
        if len(u) != len(v):
            raise ValueError("evaluation pairing needs vectors of equal length")
        total: Any = 0
        for a, b in zip(u, v):
            if a and b:
                total = conjugate(a) * b + total
        return total


def _prefix_images(word: Word, twist: TwistSpec) -> list[tuple[int, int]]:
    images = []
    sign, exponent = 1, 0
    for letter in word:
        images.append((sign, exponent))
        s, e = twist.letter_image(letter)
        sign *= s
        exponent += e
    return images


def _as_int(value: Any) -> int:
    if isinstance(value, LaurentPoly):
        return qq_to_int(value.constant_value())
    return qq_to_int(value)
