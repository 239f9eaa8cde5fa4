"""
Laurent polynomials in one variable t over the rationals.

A LaurentPoly is stored as t^shift * p(t) where p is a sympy PolyElement in
QQ[t] with a nonzero constant term (or p == 0 and shift == 0). Integral
Laurent polynomials (the ring Z[t, t^-1]) are the ones whose coefficients all
have denominator one; the ring tag on matrices decides which interpretation
applies.
"""

from __future__ import annotations

from typing import Any, Mapping

from sympy import Symbol, fraction, sympify, together, Poly
from sympy.polys.domains import QQ, ZZ
from sympy.polys.fields import field
from sympy.polys.rings import ring

POLY_RING, T = ring("t", QQ)
FRACTION_FIELD, FRACTION_T = field("t", QQ)
FRACTION_DOMAIN = FRACTION_FIELD.to_domain()
T_SYMBOL = Symbol("t")


def _to_qq(value: Any) -> Any:
    return QQ.convert(value)


def qq_to_int(value: Any) -> int:
    value = _to_qq(value)
    if QQ.denom(value) != 1:
        raise ValueError(f"{value} is not an integer")
    return int(QQ.numer(value))


def format_rational(value: Any) -> str:
    value = _to_qq(value)
    if QQ.denom(value) == 1:
        return str(int(QQ.numer(value)))
    return f"{int(QQ.numer(value))}/{int(QQ.denom(value))}"


class LaurentPoly:
    """Immutable element of QQ[t, t^-1]."""

    __slots__ = ("_shift", "_poly")

    def __init__(self, poly: Any = None, shift: int = 0) -> None:
        if poly is None:
            poly = POLY_RING.zero
        elif not hasattr(poly, "ring"):
            poly = POLY_RING.ground_new(_to_qq(poly))
        else:
            poly = poly.set_ring(POLY_RING)
        if not poly:
            shift = 0
        else:
            low = poly.tail_degree()
            if low:
                poly = POLY_RING.from_dict({(e - low,): c for (e,), c in poly.items()})
                shift += low
        self._poly = poly
        self._shift = int(shift)

    # construction

    @classmethod
    def zero(cls) -> "LaurentPoly":
        return cls()

    @classmethod
    def one(cls) -> "LaurentPoly":
        return cls(1)

    @classmethod
    def monomial(cls, coefficient: Any = 1, exponent: int = 0) -> "LaurentPoly":
        return cls.from_terms({exponent: coefficient})

    @classmethod
    def from_terms(cls, terms: Mapping[int, Any]) -> "LaurentPoly":
        cleaned = {int(e): _to_qq(c) for e, c in terms.items() if _to_qq(c) != 0}
        if not cleaned:
            return cls()
        low = min(cleaned)
        poly = POLY_RING.from_dict({(e - low,): c for e, c in cleaned.items()})
        return cls(poly, low)

    @classmethod
    def coerce(cls, value: Any) -> "LaurentPoly":
        if isinstance(value, LaurentPoly):
            return value
        as_laurent = getattr(value, "as_laurent", None)
        if as_laurent is not None:
            return as_laurent()
        return cls(value)

    @classmethod
    def parse(cls, text: str) -> "LaurentPoly":
        """Parse expressions such as ``"t - 1"``, ``"-t^2"`` or ``"2*t^-1 + 3"``."""
        expr = sympify(str(text).replace("^", "**"), locals={"t": T_SYMBOL})
        numer, denom = fraction(together(expr))
        num = cls._from_expr(numer)
        den = cls._from_expr(denom)
        if not den.is_monomial():
            raise ValueError(f"'{text}' is not a Laurent polynomial")
        return num * den.inverse()

    @classmethod
    def _from_expr(cls, expr: Any) -> "LaurentPoly":
        poly = Poly(expr, T_SYMBOL, domain=QQ)
        return cls.from_terms({monom[0]: coeff for monom, coeff in poly.terms()})

    # inspection

    @property
    def shift(self) -> int:
        return self._shift

    @property
    def poly(self) -> Any:
        return self._poly

    def terms(self) -> dict[int, Any]:
        return {self._shift + e: c for (e,), c in self._poly.items()}

    def coefficient(self, exponent: int) -> Any:
        return self.terms().get(exponent, QQ.zero)

    def is_zero(self) -> bool:
        return not self._poly

    def __bool__(self) -> bool:
        return bool(self._poly)

    def is_monomial(self) -> bool:
        return len(self._poly) == 1

    def is_integral(self) -> bool:
        return all(QQ.denom(c) == 1 for c in self._poly.values())

    def is_constant(self) -> bool:
        return self.is_zero() or (self.is_monomial() and self._shift == 0)

    def is_unit(self, integral: bool = True) -> bool:
        if not self.is_monomial():
            return False
        if not integral:
            return True
        (coeff,) = self._poly.values()
        return coeff in (QQ.one, -QQ.one)

    def span(self) -> int:
        """Width max_exp - min_exp; the Euclidean norm of QQ[t, t^-1]."""
        if self.is_zero():
            return -1
        return int(self._poly.degree())

    def low_degree(self) -> int:
        return self._shift

    def high_degree(self) -> int:
        return self._shift + self.span()

    def leading_coefficient(self) -> Any:
        return self._poly.LC

    def constant_value(self) -> Any:
        if not self.is_constant():
            raise ValueError(f"{self} is not a constant")
        return self.coefficient(0)

    # arithmetic

    def _aligned(self, other: "LaurentPoly") -> tuple[Any, Any, int]:
        low = min(self._shift, other._shift)
        left = self._poly * T ** (self._shift - low)
        right = other._poly * T ** (other._shift - low)
        return left, right, low

    def __add__(self, other: Any) -> "LaurentPoly":
        try:
            other = LaurentPoly.coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        left, right, low = self._aligned(other)
        return LaurentPoly(left + right, low)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly(-self._poly, self._shift)

    def __sub__(self, other: Any) -> "LaurentPoly":
        try:
            other = LaurentPoly.coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: Any) -> "LaurentPoly":
        return LaurentPoly.coerce(other) - self

    def __mul__(self, other: Any) -> "LaurentPoly":
        if hasattr(other, "as_laurent") and not isinstance(other, LaurentPoly):
            return NotImplemented
        try:
            other = LaurentPoly.coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return LaurentPoly(self._poly * other._poly, self._shift + other._shift)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "LaurentPoly":
        if exponent >= 0:
            return LaurentPoly(self._poly ** exponent, self._shift * exponent)
        return self.inverse() ** (-exponent)

    def inverse(self) -> "LaurentPoly":
        if not self.is_monomial():
            raise ZeroDivisionError(f"{self} is not invertible in QQ[t, t^-1]")
        (coeff,) = self._poly.values()
        return LaurentPoly.monomial(QQ.one / coeff, -self._shift)

    def scale(self, factor: Any) -> "LaurentPoly":
        return LaurentPoly(self._poly * _to_qq(factor), self._shift)

    def bar(self) -> "LaurentPoly":
        """The involution t -> t^-1."""
        return LaurentPoly.from_terms({-e: c for e, c in self.terms().items()})

    def augment(self) -> Any:
        """Evaluation at t = 1."""
        return sum(self._poly.values(), QQ.zero)

    def evaluate(self, value: Any) -> Any:
        value = _to_qq(value)
        return sum((c * value ** e for e, c in self.terms().items()), QQ.zero)

    def divmod(self, other: "LaurentPoly") -> tuple["LaurentPoly", "LaurentPoly"]:
        """Euclidean division: self = q * other + r with span(r) < span(other)."""
        other = LaurentPoly.coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("Laurent polynomial division by zero")
        q, r = self._poly.div(other._poly)
        return LaurentPoly(q, self._shift - other._shift), LaurentPoly(r, self._shift)

    def divides(self, other: "LaurentPoly") -> bool:
        if self.is_zero():
            return LaurentPoly.coerce(other).is_zero()
        return LaurentPoly.coerce(other).divmod(self)[1].is_zero()

    def exact_quotient(self, other: "LaurentPoly") -> "LaurentPoly":
        q, r = self.divmod(other)
        if not r.is_zero():
            raise ValueError(f"{other} does not divide {self}")
        return q

    def gcd(self, other: "LaurentPoly") -> "LaurentPoly":
        """Monic gcd over QQ[t, t^-1] (nonzero constant term, shift 0)."""
        other = LaurentPoly.coerce(other)
        if self.is_zero():
            return other.unit_normal(integral=False)[1]
        if other.is_zero():
            return self.unit_normal(integral=False)[1]
        return LaurentPoly(self._poly.gcd(other._poly))

    def unit_normal(self, integral: bool = True) -> tuple["LaurentPoly", "LaurentPoly"]:
        """
        Split self = unit * normal.

        Over QQ[t, t^-1] the normal form is monic with nonzero constant term;
        over Z[t, t^-1] (integral=True) the unit is +-t^k and the normal form
        has a positive leading coefficient.
        """
        if self.is_zero():
            return LaurentPoly.one(), self
        lc = self._poly.LC
        if integral:
            sign = QQ.one if lc > 0 else -QQ.one
            return LaurentPoly.monomial(sign, self._shift), LaurentPoly(self._poly * sign)
        return LaurentPoly.monomial(lc, self._shift), LaurentPoly(self._poly.monic())

    def clear_denominators(self) -> tuple[int, "LaurentPoly"]:
        common, poly = self._poly.clear_denoms()
        return int(common), LaurentPoly(poly, self._shift)

    def integer_content(self) -> int:
        """gcd of the (integral) coefficients."""
        content = ZZ.zero
        for coeff in self._poly.values():
            content = ZZ.gcd(content, ZZ.convert(qq_to_int(coeff)))
        return int(content)

    def to_field(self) -> Any:
        """Image in the sympy fraction field QQ(t)."""
        value = FRACTION_FIELD.field_new(self._poly.set_ring(FRACTION_FIELD.ring))
        if self._shift:
            value = value * FRACTION_T ** self._shift
        return value

    # comparison and display

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, LaurentPoly):
            if hasattr(other, "as_laurent"):
                return NotImplemented
            try:
                other = LaurentPoly.coerce(other)
            except Exception:
                return NotImplemented
        return self._shift == other._shift and self._poly == other._poly

    def __hash__(self) -> int:
        return hash((self._shift, frozenset(self._poly.items())))

    def __repr__(self) -> str:
        return f"LaurentPoly({self})"

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        pieces: list[str] = []
        for exponent, coeff in sorted(self.terms().items(), reverse=True):
            negative = coeff < 0
            magnitude = -coeff if negative else coeff
            if exponent == 0:
                body = format_rational(magnitude)
            else:
                power = "t" if exponent == 1 else f"t^{exponent}"
                body = power if magnitude == 1 else f"{format_rational(magnitude)}*{power}"
            if not pieces:
                pieces.append(f"-{body}" if negative else body)
            else:
                pieces.append(f"- {body}" if negative else f"+ {body}")
        return " ".join(pieces)
