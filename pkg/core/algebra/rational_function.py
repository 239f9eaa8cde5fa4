"""Elements of QQ(t) kept in a unique canonical form."""

from __future__ import annotations

from typing import Any

from sympy.polys.domains import QQ

from core.algebra.laurent import FRACTION_FIELD, LaurentPoly


class RationalFunction:
    """
    numerator / denominator with the denominator a monic polynomial in t with
    nonzero constant term and gcd(numerator, denominator) = 1. Any power of t
    lives in the numerator's shift.
    """

    __slots__ = ("numerator", "denominator")

    def __init__(self, numerator: Any, denominator: Any = 1) -> None:
        num = LaurentPoly.coerce(numerator)
        den = LaurentPoly.coerce(denominator)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            self.numerator = LaurentPoly.zero()
            self.denominator = LaurentPoly.one()
            return
        g = num.poly.gcd(den.poly)
        num_poly = num.poly.exquo(g)
        den_poly = den.poly.exquo(g)
        lc = den_poly.LC
        self.numerator = LaurentPoly(num_poly.quo_ground(lc), num.shift - den.shift)
        self.denominator = LaurentPoly(den_poly.monic())

    @classmethod
    def coerce(cls, value: Any) -> "RationalFunction":
        if isinstance(value, RationalFunction):
            return value
        return cls(value)

    @classmethod
    def from_field(cls, element: Any) -> "RationalFunction":
        return cls(LaurentPoly(element.numer), LaurentPoly(element.denom))

    @classmethod
    def zero(cls) -> "RationalFunction":
        return cls(0)

    @classmethod
    def one(cls) -> "RationalFunction":
        return cls(1)

    def is_zero(self) -> bool:
        return self.numerator.is_zero()

    def __bool__(self) -> bool:
        return not self.is_zero()

    def is_laurent(self) -> bool:
        return self.denominator == LaurentPoly.one()

    def as_laurent(self) -> LaurentPoly:
        if not self.is_laurent():
            raise ValueError(f"{self} is not a Laurent polynomial")
        return self.numerator

    def to_field(self) -> Any:
        return self.numerator.to_field() / self.denominator.to_field()

    def __add__(self, other: Any) -> "RationalFunction":
        other = RationalFunction.coerce(other)
        return RationalFunction(
            self.numerator * other.denominator + other.numerator * self.denominator,
            self.denominator * other.denominator,
        )

    __radd__ = __add__

    def __neg__(self) -> "RationalFunction":
        return RationalFunction(-self.numerator, self.denominator)

    def __sub__(self, other: Any) -> "RationalFunction":
        return self + (-RationalFunction.coerce(other))

    def __rsub__(self, other: Any) -> "RationalFunction":
        return RationalFunction.coerce(other) - self

    def __mul__(self, other: Any) -> "RationalFunction":
        other = RationalFunction.coerce(other)
        return RationalFunction(self.numerator * other.numerator, self.denominator * other.denominator)

    __rmul__ = __mul__

    def inverse(self) -> "RationalFunction":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero rational function")
        return RationalFunction(self.denominator, self.numerator)

    def __truediv__(self, other: Any) -> "RationalFunction":
        return self * RationalFunction.coerce(other).inverse()

    def __rtruediv__(self, other: Any) -> "RationalFunction":
        return RationalFunction.coerce(other) * self.inverse()

    def __pow__(self, exponent: int) -> "RationalFunction":
        base = self if exponent >= 0 else self.inverse()
        result = RationalFunction.one()
        for _ in range(abs(exponent)):
            result = result * base
        return result

    def bar(self) -> "RationalFunction":
        return RationalFunction(self.numerator.bar(), self.denominator.bar())

    def normalize_unit(self, rational_scalars: bool = False) -> "RationalFunction":
        """
        Representative modulo units: the t-power is stripped from the
        numerator, then the numerator is made monic (rational_scalars) or
        given a positive leading coefficient.
        """
        if self.is_zero():
            return self
        num = LaurentPoly(self.numerator.poly)
        lc = num.leading_coefficient()
        if rational_scalars:
            num = num.scale(QQ.one / lc)
        elif lc < 0:
            num = -num
        return RationalFunction(num, self.denominator)

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, RationalFunction):
            try:
                other = RationalFunction.coerce(other)
            except Exception:
                return NotImplemented
        return self.numerator == other.numerator and self.denominator == other.denominator

    def __hash__(self) -> int:
        return hash((self.numerator, self.denominator))

    def __repr__(self) -> str:
        return f"RationalFunction({self})"

    def __str__(self) -> str:
        if self.is_laurent():
            return str(self.numerator)
        den = f"({self.denominator})"
        if self.numerator == LaurentPoly.one():
            return f"{den}^-1"
        num = str(self.numerator)
        if len(self.numerator.terms()) > 1:
            num = f"({num})"
        return f"{num} / {den}"


__all__ = ["RationalFunction", "FRACTION_FIELD"]
