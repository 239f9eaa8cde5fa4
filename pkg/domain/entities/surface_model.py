from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Iterator, Mapping, Sequence

from core.algebra.laurent import LaurentPoly
from core.algebra.rings import RingTag
from domain.exceptions.parse_errors import TwistSyntaxError, UnknownGeneratorError, WordSyntaxError

_TOKEN = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)(\^-1)?$")
_MONOMIAL = re.compile(r"^\s*([+-]?)\s*(?:(1)|t(?:\^\(?(-?\d+)\)?)?)\s*$")

# A half-edge of the rose: (generator, +1) is where the loop leaves the vertex,
# (generator, -1) where it comes back.
HalfEdge = tuple[str, int]


@dataclass(frozen=True)
class Letter:
    generator: str
    exponent: int = 1

    def inverse(self) -> "Letter":
        return Letter(self.generator, -self.exponent)

    @property
    def departure(self) -> HalfEdge:
        return (self.generator, self.exponent)

    @property
    def arrival(self) -> HalfEdge:
        return (self.generator, -self.exponent)

    def __str__(self) -> str:
        return self.generator if self.exponent == 1 else f"{self.generator}^-1"


def _free_reduce(letters: Sequence[Letter]) -> tuple[Letter, ...]:
    stack: list[Letter] = []
    for letter in letters:
        if stack and stack[-1] == letter.inverse():
            stack.pop()
        else:
            stack.append(letter)
    return tuple(stack)


@dataclass(frozen=True)
class Word:
    """Freely reduced word in the free group on the rose generators."""

    letters: tuple[Letter, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "letters", _free_reduce(tuple(self.letters)))

    @classmethod
    def parse(cls, text: str, generators: Sequence[str] | None = None, location: str = "") -> "Word":
        letters = []
        for token in text.split():
            match = _TOKEN.match(token)
            if match is None:
                raise WordSyntaxError(token, location)
            name = match.group(1)
            if generators is not None and name not in generators:
                raise UnknownGeneratorError(name, location)
            letters.append(Letter(name, -1 if match.group(2) else 1))
        return cls(tuple(letters))

    @classmethod
    def of(cls, *tokens: str) -> "Word":
        return cls.parse(" ".join(tokens))

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[Letter]:
        return iter(self.letters)

    def __getitem__(self, index: int) -> Letter:
        return self.letters[index]

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def inverse(self) -> "Word":
        return Word(tuple(letter.inverse() for letter in reversed(self.letters)))

    def power(self, exponent: int) -> "Word":
        base = self if exponent >= 0 else self.inverse()
        return Word(base.letters * abs(exponent))

    def rotate(self, k: int) -> "Word":
        if not self.letters:
            return self
        k %= len(self.letters)
        return Word(self.letters[k:] + self.letters[:k])

    def prefix(self, k: int) -> "Word":
        return Word(self.letters[:k])

    def generators(self) -> set[str]:
        return {letter.generator for letter in self.letters}

    def is_cyclically_reduced(self) -> bool:
        return len(self.letters) < 2 or self.letters[0] != self.letters[-1].inverse()

    def cyclic_reduction(self) -> tuple["Word", "Word"]:
        """Return (u, core) with self = u * core * u^-1 and core cyclically reduced."""
        letters = self.letters
        k = 0
        while len(letters) - 2 * k >= 2 and letters[k] == letters[len(letters) - 1 - k].inverse():
            k += 1
        return Word(letters[:k]), Word(letters[k:len(letters) - k])

    def __str__(self) -> str:
        return " ".join(str(letter) for letter in self.letters) or "1"


@dataclass(frozen=True)
class TwistSpec:
    """
    Monomial twist phi(gen) = sign * t^exponent. Generators missing from
    ``images`` map to 1; an empty mapping is the trivial twist.
    """

    images: Mapping[str, tuple[int, int]] = field(default_factory=dict)

    @classmethod
    def trivial(cls) -> "TwistSpec":
        return cls({})

    @classmethod
    def parse(cls, mapping: Mapping[str, str], generators: Sequence[str] | None = None) -> "TwistSpec":
        images: dict[str, tuple[int, int]] = {}
        for name, text in mapping.items():
            if generators is not None and name not in generators:
                raise UnknownGeneratorError(name, "twist")
            images[name] = parse_monomial(name, str(text))
        return cls(images)

    def image(self, generator: str) -> tuple[int, int]:
        return self.images.get(generator, (1, 0))

    def is_trivial(self) -> bool:
        return all(value == (1, 0) for value in self.images.values())

    @property
    def ring(self) -> RingTag:
        return RingTag.Z if self.is_trivial() else RingTag.Z_LAURENT

    def monomial(self, generator: str) -> LaurentPoly:
        sign, exponent = self.image(generator)
        return LaurentPoly.monomial(sign, exponent)

    def letter_image(self, letter: Letter) -> tuple[int, int]:
        sign, exponent = self.image(letter.generator)
        return sign, exponent * letter.exponent

    def word_image(self, word: Word) -> tuple[int, int]:
        sign, exponent = 1, 0
        for letter in word:
            s, e = self.letter_image(letter)
            sign *= s
            exponent += e
        return sign, exponent

    def word_monomial(self, word: Word) -> LaurentPoly:
        sign, exponent = self.word_image(word)
        return LaurentPoly.monomial(sign, exponent)

    def format_image(self, generator: str) -> str:
        return format_monomial(*self.image(generator))

    def as_strings(self) -> dict[str, str]:
        return {name: format_monomial(*value) for name, value in self.images.items()}

    def merged(self, other: "TwistSpec") -> "TwistSpec":
        return TwistSpec({**dict(self.images), **dict(other.images)})


def parse_monomial(generator: str, text: str) -> tuple[int, int]:
    match = _MONOMIAL.match(text)
    if match is None:
        raise TwistSyntaxError(generator, text)
    sign = -1 if match.group(1) == "-" else 1
    if match.group(2):
        return sign, 0
    return sign, int(match.group(3)) if match.group(3) else 1


def format_monomial(sign: int, exponent: int) -> str:
    if exponent == 0:
        body = "1"
    elif exponent == 1:
        body = "t"
    else:
        body = f"t^{exponent}"
    return f"-{body}" if sign < 0 else body


class Frame(str, Enum):
    LOOP = "loop"
    DUAL = "dual"


@dataclass(frozen=True)
class HClass:
    """Coordinates in the generator basis (loop frame) or its dual basis (dual frame)."""

    coordinates: tuple[Any, ...]
    frame: Frame
    ring: RingTag

    def __len__(self) -> int:
        return len(self.coordinates)

    def __getitem__(self, index: int) -> Any:
        return self.coordinates[index]


@dataclass(frozen=True)
class RoseSurface:
    """
    One-vertex ribbon graph modelling a surface with boundary, or the
    punctured model of a closed surface when ``closed`` is set.
    """

    genus: int
    boundary: int
    generators: tuple[str, ...]
    polygon_word: Word
    ribbon: tuple[HalfEdge, ...]
    closed: bool = False

    @property
    def rank(self) -> int:
        return len(self.generators)

    @property
    def euler_characteristic(self) -> int:
        """Euler characteristic of the central surface (closed surfaces included)."""
        if self.closed:
            return 2 - 2 * self.genus
        return 2 - 2 * self.genus - self.boundary

    def index(self, generator: str) -> int:
        return self.generators.index(generator)

    def positions(self) -> dict[HalfEdge, int]:
        return {half_edge: i for i, half_edge in enumerate(self.ribbon)}
