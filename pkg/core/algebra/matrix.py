"""Immutable dense matrices over a tagged coefficient ring."""

from __future__ import annotations

from typing import Any, Callable, Iterable, Sequence

from sympy.polys.domains import QQ, ZZ
from sympy.polys.matrices import DomainMatrix

from core.algebra.laurent import FRACTION_DOMAIN
from core.algebra.rational_function import RationalFunction
from core.algebra.rings import RingTag, augment, conjugate, convert, format_scalar, one, zero


_WIDENING = [RingTag.Z, RingTag.Q, RingTag.Z_LAURENT, RingTag.Q_LAURENT, RingTag.Q_RATFUNC]


def common_ring(left: RingTag, right: RingTag) -> RingTag:
    if left == right:
        return left
    if {left, right} == {RingTag.Q, RingTag.Z_LAURENT}:
        return RingTag.Q_LAURENT
    return _WIDENING[max(_WIDENING.index(left), _WIDENING.index(right))]


class Matrix:
    """
    Rectangular matrix with entries in the ring named by ``ring``.

    Empty shapes (0 x n, n x 0) are allowed; the shape is always explicit.
    """

    __slots__ = ("_rows", "_shape", "ring")

    def __init__(self, rows: Iterable[Sequence[Any]], ring: RingTag, ncols: int | None = None) -> None:
        converted = tuple(tuple(convert(x, ring) for x in row) for row in rows)
        if ncols is None:
            if not converted:
                raise ValueError("ncols is required for a matrix without rows")
            ncols = len(converted[0])
        if any(len(row) != ncols for row in converted):
            raise ValueError("matrix rows must have equal length")
        self._rows = converted
        self._shape = (len(converted), ncols)
        self.ring = ring

    # construction

    @classmethod
    def zeros(cls, nrows: int, ncols: int, ring: RingTag) -> "Matrix":
        z = zero(ring)
        return cls([[z] * ncols for _ in range(nrows)], ring, ncols)

    @classmethod
    def identity(cls, size: int, ring: RingTag) -> "Matrix":
        z, o = zero(ring), one(ring)
        return cls([[o if i == j else z for j in range(size)] for i in range(size)], ring, size)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[Any]], nrows: int, ring: RingTag) -> "Matrix":
        return cls([[col[i] for col in columns] for i in range(nrows)], ring, len(columns))

    @classmethod
    def block_diagonal(cls, blocks: Sequence["Matrix"], ring: RingTag) -> "Matrix":
        nrows = sum(b.nrows for b in blocks)
        ncols = sum(b.ncols for b in blocks)
        rows = [[zero(ring)] * ncols for _ in range(nrows)]
        r0 = c0 = 0
        for block in blocks:
            for i in range(block.nrows):
                for j in range(block.ncols):
                    rows[r0 + i][c0 + j] = block[i, j]
            r0 += block.nrows
            c0 += block.ncols
        return cls(rows, ring, ncols)

    # inspection

    @property
    def shape(self) -> tuple[int, int]:
        return self._shape

    @property
    def nrows(self) -> int:
        return self._shape[0]

    @property
    def ncols(self) -> int:
        return self._shape[1]

    @property
    def rows(self) -> tuple[tuple[Any, ...], ...]:
        return self._rows

    def __getitem__(self, key: tuple[int, int]) -> Any:
        i, j = key
        return self._rows[i][j]

    def row(self, i: int) -> tuple[Any, ...]:
        return self._rows[i]

    def column(self, j: int) -> tuple[Any, ...]:
        return tuple(row[j] for row in self._rows)

    def columns(self) -> list[tuple[Any, ...]]:
        return [self.column(j) for j in range(self.ncols)]

    def to_lists(self) -> list[list[Any]]:
        return [list(row) for row in self._rows]

    def is_zero(self) -> bool:
        return all(not x for row in self._rows for x in row)

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    # algebra

    def with_ring(self, ring: RingTag) -> "Matrix":
        return Matrix(self._rows, ring, self.ncols)

    def map(self, fn: Callable[[Any], Any], ring: RingTag | None = None) -> "Matrix":
        ring = ring or self.ring
        return Matrix([[fn(x) for x in row] for row in self._rows], ring, self.ncols)

    def transpose(self) -> "Matrix":
        return Matrix([list(col) for col in self.columns()], self.ring, self.nrows)

    @property
    def T(self) -> "Matrix":
        return self.transpose()

    def conjugate(self) -> "Matrix":
        return self.map(conjugate)

    def augment(self) -> "Matrix":
        """Entry-wise t -> 1, landing in ZZ."""
        return self.map(augment, RingTag.Z)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.nrows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        ring = common_ring(self.ring, other.ring)
        z = zero(ring)
        cols = other.columns()
        rows = []
        for row in self._rows:
            out = []
            for col in cols:
                acc = z
                for a, b in zip(row, col):
                    if a and b:
                        acc = acc + a * b
                out.append(acc)
            rows.append(out)
        return Matrix(rows, ring, other.ncols)

    def __add__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise ValueError(f"cannot add {self.shape} and {other.shape}")
        ring = common_ring(self.ring, other.ring)
        return Matrix([[a + b for a, b in zip(r, s)] for r, s in zip(self._rows, other._rows)], ring, self.ncols)

    def __neg__(self) -> "Matrix":
        return self.map(lambda x: -x)

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + (-other)

    def scale(self, factor: Any) -> "Matrix":
        return self.map(lambda x: x * factor)

    def apply(self, vector: Sequence[Any]) -> tuple[Any, ...]:
        """Matrix-vector product."""
        if len(vector) != self.ncols:
            raise ValueError(f"vector of length {len(vector)} for {self.shape} matrix")
        z = zero(self.ring)
        out = []
        for row in self._rows:
            acc = z
            for a, b in zip(row, vector):
                if a and b:
                    acc = acc + a * b
            out.append(acc)
        return tuple(out)

    def hstack(self, *others: "Matrix") -> "Matrix":
        ring = self.ring
        for other in others:
            ring = common_ring(ring, other.ring)
        blocks = (self,) + others
        for block in blocks:
            if block.nrows != self.nrows:
                raise ValueError("hstack requires equal row counts")
        rows = [sum((list(b.row(i)) for b in blocks), []) for i in range(self.nrows)]
        return Matrix(rows, ring, sum(b.ncols for b in blocks))

    def vstack(self, *others: "Matrix") -> "Matrix":
        return self.transpose().hstack(*(o.transpose() for o in others)).transpose()

    def select_columns(self, indices: Sequence[int]) -> "Matrix":
        return Matrix([[row[j] for j in indices] for row in self._rows], self.ring, len(indices))

    def select_rows(self, indices: Sequence[int]) -> "Matrix":
        return Matrix([self._rows[i] for i in indices], self.ring, self.ncols)

    # sympy bridge

    def domain(self) -> Any:
        if self.ring is RingTag.Z:
            return ZZ
        if self.ring is RingTag.Q:
            return QQ
        return FRACTION_DOMAIN

    def to_domain_matrix(self, over_field: bool = False) -> DomainMatrix:
        domain = self.domain()
        if over_field and domain is ZZ:
            domain = QQ
        if domain is ZZ:
            rows = [[ZZ.convert(x) for x in row] for row in self._rows]
        elif domain is QQ:
            rows = [[QQ.convert(x) for x in row] for row in self._rows]
        else:
            rows = [[x.to_field() for x in row] for row in self._rows]
        return DomainMatrix(rows, self.shape, domain)

    @classmethod
    def from_domain_matrix(cls, dm: DomainMatrix, ring: RingTag) -> "Matrix":
        nrows, ncols = dm.shape
        domain = dm.domain
        out = []
        for row in dm.to_list():
            converted = []
            for x in row:
                if domain == ZZ:
                    converted.append(int(x))
                elif domain == QQ:
                    converted.append(QQ.convert(x))
                else:
                    converted.append(RationalFunction.from_field(x))
            out.append(converted)
        return cls(out, ring, ncols)

    def rank(self) -> int:
        if self.nrows == 0 or self.ncols == 0:
            return 0
        return self.to_domain_matrix(over_field=True).rank()

    def determinant(self) -> Any:
        """Exact determinant computed in the fraction field of the ring."""
        if not self.is_square():
            raise ValueError("determinant of a non-square matrix")
        field_tag = self.ring.fraction_field
        if self.nrows == 0:
            return one(field_tag)
        det = self.to_domain_matrix(over_field=True).det()
        if field_tag is RingTag.Q:
            return QQ.convert(det)
        return RationalFunction.from_field(det)

    # comparison and display

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and all(
            a == b for r, s in zip(self._rows, other._rows) for a, b in zip(r, s)
        )

    def __hash__(self) -> int:
        return hash((self.shape, self._rows))

    def __repr__(self) -> str:
        return f"Matrix<{self.ring.value}>{self.shape}{self.to_lists()}"

    def format(self, row_labels: Sequence[str] | None = None, col_labels: Sequence[str] | None = None) -> str:
        """Row-major text rendering with optional labels."""
        cells = [[format_scalar(x) for x in row] for row in self._rows]
        header = list(col_labels) if col_labels else None
        left = list(row_labels) if row_labels else None
        widths = [
            max([len(c[j]) for c in cells] + ([len(header[j])] if header else []) + [1])
            for j in range(self.ncols)
        ]
        pad = max((len(x) for x in left), default=0) if left else 0
        lines = []
        if header:
            lines.append(" " * (pad + 2 if left else 0) + "  ".join(h.rjust(w) for h, w in zip(header, widths)))
        for i, row in enumerate(cells):
            body = "  ".join(c.rjust(w) for c, w in zip(row, widths))
            lines.append((left[i].ljust(pad) + "  " if left else "") + "[ " + body + " ]")
        if not lines:
            lines.append(f"(empty {self.nrows}x{self.ncols})")
        return "\n".join(lines)
