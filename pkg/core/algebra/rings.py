"""Coefficient ring descriptors and Euclidean strategies for the PIDs ZZ and QQ[t, t^-1]."""

from __future__ import annotations

from enum import Enum
from typing import Any

from sympy.polys.domains import QQ

from core.algebra.laurent import LaurentPoly, qq_to_int
from core.algebra.rational_function import RationalFunction


class RingTag(str, Enum):
    Z = "Z"
    Q = "Q"
    Z_LAURENT = "ZLaurent"
    Q_LAURENT = "QLaurent"
    Q_RATFUNC = "QRatFunc"

    @property
    def is_field(self) -> bool:
        return self in (RingTag.Q, RingTag.Q_RATFUNC)

    @property
    def is_laurent(self) -> bool:
        return self in (RingTag.Z_LAURENT, RingTag.Q_LAURENT)

    @property
    def is_univariate(self) -> bool:
        """True for rings involving t."""
        return self in (RingTag.Z_LAURENT, RingTag.Q_LAURENT, RingTag.Q_RATFUNC)

    @property
    def fraction_field(self) -> "RingTag":
        return RingTag.Q_RATFUNC if self.is_univariate else RingTag.Q

    @property
    def pid(self) -> "RingTag":
        """The PID used for Smith normal form computations over this ring."""
        if self in (RingTag.Z, RingTag.Q):
            return RingTag.Z
        return RingTag.Q_LAURENT

    @property
    def display(self) -> str:
        return {
            RingTag.Z: "Z",
            RingTag.Q: "Q",
            RingTag.Z_LAURENT: "Z[t,t^-1]",
            RingTag.Q_LAURENT: "Q[t,t^-1]",
            RingTag.Q_RATFUNC: "Q(t)",
        }[self]


def convert(value: Any, tag: RingTag) -> Any:
    """Coerce a scalar into the canonical element type of the tagged ring."""
    if tag is RingTag.Z:
        if isinstance(value, int):
            return value
        if isinstance(value, (LaurentPoly, RationalFunction)):
            value = LaurentPoly.coerce(value).constant_value()
        return qq_to_int(value)
    if tag is RingTag.Q:
        if isinstance(value, (LaurentPoly, RationalFunction)):
            value = LaurentPoly.coerce(value).constant_value()
        return QQ.convert(value)
    if tag.is_laurent:
        converted = LaurentPoly.coerce(value)
        if tag is RingTag.Z_LAURENT and not converted.is_integral():
            raise ValueError(f"{converted} does not lie in Z[t,t^-1]")
        return converted
    return RationalFunction.coerce(value)


def zero(tag: RingTag) -> Any:
    return convert(0, tag)


def one(tag: RingTag) -> Any:
    return convert(1, tag)


def is_zero(value: Any) -> bool:
    return not value


def conjugate(value: Any) -> Any:
    """The involution t -> t^-1; identity on ZZ and QQ."""
    bar = getattr(value, "bar", None)
    return bar() if bar is not None else value


def augment(value: Any) -> int:
    """t -> 1 for integral values."""
    if isinstance(value, (LaurentPoly, RationalFunction)):
        return qq_to_int(LaurentPoly.coerce(value).augment())
    return qq_to_int(value)


def format_scalar(value: Any) -> str:
    text = str(value)
    if isinstance(value, (LaurentPoly, RationalFunction)) and " " in text:
        return f"({text})"
    return text


class IntegerEuclid:
    """Euclidean structure of ZZ."""

    tag = RingTag.Z

    @staticmethod
    def norm(value: int) -> int:
        return abs(value)

    @staticmethod
    def divmod(a: int, b: int) -> tuple[int, int]:
        return divmod(a, b)

    @staticmethod
    def unit_normal(value: int) -> tuple[int, int]:
        return (-1, -value) if value < 0 else (1, value)

    @staticmethod
    def unit_inverse(unit: int) -> int:
        return unit

    @staticmethod
    def is_unit(value: int) -> bool:
        return value in (1, -1)


class LaurentEuclid:
    """Euclidean structure of QQ[t, t^-1] with the t-span as norm."""

    tag = RingTag.Q_LAURENT

    @staticmethod
    def norm(value: LaurentPoly) -> int:
        return value.span()

    @staticmethod
    def divmod(a: LaurentPoly, b: LaurentPoly) -> tuple[LaurentPoly, LaurentPoly]:
        return a.divmod(b)

    @staticmethod
    def unit_normal(value: LaurentPoly) -> tuple[LaurentPoly, LaurentPoly]:
        return value.unit_normal(integral=False)

    @staticmethod
    def unit_inverse(unit: LaurentPoly) -> LaurentPoly:
        return unit.inverse()

    @staticmethod
    def is_unit(value: LaurentPoly) -> bool:
        return value.is_unit(integral=False)


def euclid_for(tag: RingTag) -> IntegerEuclid | LaurentEuclid:
    return IntegerEuclid() if tag.pid is RingTag.Z else LaurentEuclid()
