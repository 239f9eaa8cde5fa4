"""
Brute-force equivariant intersections in the infinite cyclic cover.

The cover of the rose has one vertex copy per sheet. Edge g on sheet s runs
from its + end at vertex copy s to its - end at vertex copy s + e(g). The
lift of x starting on sheet 0 is laid against every deck translate h.y with
|h| inside a finite window. Strands sharing an edge copy get lanes from their
lifted itineraries, and each vertex copy is then a planar disk where chords
are compared one pair at a time. Nothing here goes through the vertex layout
of SurfaceService, so the two computations check each other.
"""

import logging
from collections import defaultdict
from dataclasses import dataclass

from application.services.surface_service import SurfaceService
from core.algebra.laurent import LaurentPoly
from core.settings import app_settings
from domain.entities.surface_model import HalfEdge, Letter, TwistSpec, Word

logger = logging.getLogger(__name__)

LaneKey = tuple


@dataclass(frozen=True)
class _Lift:
    """One period of a lifted curve: the sheet and orientation sign at each vertex pass."""

    word: Word
    sheets: tuple[int, ...]
    signs: tuple[int, ...]
    lanes: tuple[LaneKey, ...]


@dataclass(frozen=True)
class _Chord:
    role: int
    sign: int
    inbound: tuple[HalfEdge, LaneKey]
    outbound: tuple[HalfEdge, LaneKey]


class IntersectionOracle:
    """Counts crossings sheet by sheet in the Z-cover determined by a monomial twist."""

    def __init__(self, surface: SurfaceService, window_padding: int | None = None) -> None:
        """
        Args:
            surface: Surface service whose rose supplies the ribbon order
            window_padding: Extra deck translates on each side of the minimal window
                (defaults to MSD_ORACLE_WINDOW_PADDING)
        """
        self.rose = surface.rose
        self.window_padding = app_settings.oracle_window_padding if window_padding is None else window_padding
        self._positions = self.rose.positions()
        self._index = {name: i for i, name in enumerate(self.rose.generators)}

    def _code(self, letter: Letter) -> int:
        return 2 * self._index[letter.generator] + (0 if letter.exponent > 0 else 1)

    def _lift(self, word: Word, role: int, twist: TwistSpec, horizon: int) -> _Lift:
        n = len(word)
        shift = [twist.letter_image(letter)[1] for letter in word]
        sheets, signs = [], []
        sheet, sign = 0, 1
        for letter in word:
            sheets.append(sheet)
            signs.append(sign)
            s, e = twist.letter_image(letter)
            sheet += e
            sign *= s

        def itinerary(k: int, direction: int, base: int) -> tuple[tuple[int, int], ...]:
            # (letter, sheet where it starts) read away from letter k; sheets relative
            # to the + end of the edge copy under letter k, which sits at `base`
            read = []
            offset = shift[k] if direction > 0 else 0
            for j in range(1, horizon + 1):
                if direction > 0:
                    letter = word[(k + j) % n]
                    read.append((self._code(letter), offset - base))
                    offset += shift[(k + j) % n]
                else:
                    letter = word[(k - j) % n].inverse()
                    read.append((self._code(letter), offset - base))
                    offset -= shift[(k - j) % n]
            return tuple(read)

        lanes = []
        for k, letter in enumerate(word):
            base = 0 if letter.exponent > 0 else shift[k]
            ahead, behind = itinerary(k, 1, base), itinerary(k, -1, base)
            if letter.exponent < 0:
                ahead, behind = behind, ahead
            lanes.append((ahead, behind, role, k))
        return _Lift(word, tuple(sheets), tuple(signs), tuple(lanes))

    def window(self, x: Word, y: Word, twist: TwistSpec) -> int:
        spread = sum(abs(twist.letter_image(letter)[1]) for letter in list(x) + list(y))
        return spread + 1 + self.window_padding

    @staticmethod
    def _chords(lift: _Lift, role: int, shift: int) -> dict[int, list[_Chord]]:
        """Vertex passes of the lift translated by `shift`, grouped by vertex copy."""
        n = len(lift.word)
        by_sheet: dict[int, list[_Chord]] = defaultdict(list)
        for k in range(n):
            previous = lift.word[(k - 1) % n]
            chord = _Chord(
                role,
                lift.signs[k],
                (previous.arrival, lift.lanes[(k - 1) % n]),
                (lift.word[k].departure, lift.lanes[k]),
            )
            by_sheet[shift + lift.sheets[k]].append(chord)
        return by_sheet

    def _slots(self, chords: list[_Chord]) -> dict[tuple[HalfEdge, LaneKey], int]:
        """Counterclockwise slot of every chord end in one vertex copy."""
        ends: dict[HalfEdge, list[LaneKey]] = defaultdict(list)
        for chord in chords:
            for half_edge, lane in (chord.inbound, chord.outbound):
                ends[half_edge].append(lane)
        slots: dict[tuple[HalfEdge, LaneKey], int] = {}
        for half_edge in sorted(ends, key=self._positions.__getitem__):
            # lanes stack outward at the + end and mirror at the - end
            for lane in sorted(ends[half_edge], reverse=half_edge[1] < 0):
                slots[(half_edge, lane)] = len(slots)
        return slots

    @staticmethod
    def _crossing(x: _Chord, y: _Chord, slots: dict, size: int) -> int:
        start = slots[x.inbound]
        width = (slots[x.outbound] - start) % size

        def left(end: tuple[HalfEdge, LaneKey]) -> int:
            return 1 if 0 < (slots[end] - start) % size < width else 0

        return left(y.outbound) - left(y.inbound)

    def equivariant_intersection(self, x: Word, y: Word, twist: TwistSpec) -> LaurentPoly:
        ux, cx = x.cyclic_reduction()
        uy, cy = y.cyclic_reduction()
        if not len(cx) or not len(cy):
            return LaurentPoly.zero()

        horizon = len(cx) + len(cy)
        x_lift = self._lift(cx, 0, twist, horizon)
        y_lift = self._lift(cy, 1, twist, horizon)
        x_chords = self._chords(x_lift, 0, 0)
        bound = self.window(cx, cy, twist)

        terms: dict[int, int] = {}
        for h in range(-bound, bound + 1):
            count = 0
            for sheet, y_chords in self._chords(y_lift, 1, h).items():
                if sheet not in x_chords:
                    continue
                present = x_chords[sheet] + y_chords
                slots = self._slots(present)
                for p in x_chords[sheet]:
                    for q in y_chords:
                        count += self._crossing(p, q, slots, len(slots)) * p.sign * q.sign
            if count:
                terms[-h] = terms.get(-h, 0) + count

        total = LaurentPoly.from_terms(terms)
        logger.debug("oracle window +-%s for %s / %s: %s", bound, x, y, total)
        return twist.word_monomial(ux).inverse() * twist.word_monomial(uy) * total
