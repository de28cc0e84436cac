"""
Exact linear algebra over the rationals

Thin layer over sympy's DomainMatrix on QQ. Callers work with lists of
Fraction rows; conversion to and from the QQ domain happens here only.
"""

from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.exceptions import DMNonInvertibleMatrixError

from algebra.errors import ConsistencyError, DimensionError

Row = List[Fraction]


def to_qq(value) -> object:
    """Convert an int or Fraction to a QQ domain element"""
    value = Fraction(value)
    return QQ(int(value.numerator), int(value.denominator))


def from_qq(value) -> Fraction:
    """Convert a QQ domain element back to a Fraction"""
    return Fraction(int(QQ.numer(value)), int(QQ.denom(value)))


def _domain_matrix(rows: Sequence[Sequence[Fraction]], ncols: int) -> DomainMatrix:
    for row in rows:
        if len(row) != ncols:
            raise DimensionError(f"ragged matrix: expected {ncols} columns, got {len(row)}")
    data = [[to_qq(x) for x in row] for row in rows]
    return DomainMatrix(data, (len(rows), ncols), QQ)


def _rows(matrix: DomainMatrix) -> List[Row]:
    return [[from_qq(x) for x in row] for row in matrix.to_ddm()]


def rref(rows: Sequence[Sequence[Fraction]], ncols: Optional[int] = None) -> Tuple[List[Row], Tuple[int, ...]]:
    """
    Reduced row echelon form

    Args:
        rows: matrix rows
        ncols: column count, required when rows is empty

    Returns:
        (nonzero rref rows, pivot columns)
    """
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    if not rows or ncols == 0:
        return [], ()
    reduced, pivots = _domain_matrix(rows, ncols).rref()
    out = _rows(reduced)[: len(pivots)]
    return out, tuple(pivots)


def rank(rows: Sequence[Sequence[Fraction]], ncols: Optional[int] = None) -> int:
    return len(rref(rows, ncols)[1])


def nullspace(rows: Sequence[Sequence[Fraction]], ncols: int) -> List[Row]:
    """Basis of {x : A x = 0}, returned in rref so the result is canonical"""
    if ncols == 0:
        return []
    if not rows:
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    kernel = _domain_matrix(rows, ncols).nullspace()
    vectors = _rows(kernel)
    return rref(vectors, ncols)[0]


def inverse(rows: Sequence[Sequence[Fraction]]) -> List[Row]:
    size = len(rows)
    if size == 0:
        return []
    try:
        return _rows(_domain_matrix(rows, size).inv())
    except DMNonInvertibleMatrixError as exc:
        raise ConsistencyError("matrix is singular") from exc


def det(rows: Sequence[Sequence[Fraction]]) -> Fraction:
    size = len(rows)
    if size == 0:
        return Fraction(1)
    return from_qq(_domain_matrix(rows, size).det())


def transpose(rows: Sequence[Sequence[Fraction]]) -> List[Row]:
    return [list(col) for col in zip(*rows)]


def matmul(a: Sequence[Sequence[Fraction]], b: Sequence[Sequence[Fraction]]) -> List[Row]:
    bt = transpose(b)
    return [[sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in bt] for row in a]


def solve_in_span(basis: Sequence[Sequence[Fraction]], target: Sequence[Fraction]) -> Optional[Row]:
    """
    Express target as a combination of the basis rows

    Returns:
        coefficient list, or None when target is outside the span
    """
    if not basis:
        return [] if all(x == 0 for x in target) else None
    # columns are the basis vectors, the last column is the target
    augmented = [list(col) + [t] for col, t in zip(transpose(basis), target)]
    ncols = len(basis) + 1
    reduced, pivots = rref(augmented, ncols)
    if ncols - 1 in pivots:
        return None
    coeffs = [Fraction(0)] * len(basis)
    for row, pivot in zip(reduced, pivots):
        coeffs[pivot] = row[-1]
    return coeffs


def first_dependent(rows: Sequence[Sequence[Fraction]], ncols: int) -> Optional[int]:
    """Index of the first row lying in the span of the rows before it"""
    for index in range(len(rows)):
        if rank(rows[: index + 1], ncols) <= index:
            return index
    return None


class Span:
    """Row space kept in rref for fast membership tests"""

    def __init__(self, rows: Sequence[Sequence[Fraction]], ncols: int):
        self.ncols = ncols
        self.rows, self.pivots = rref(rows, ncols)

    @property
    def dim(self) -> int:
        return len(self.pivots)

    def residual(self, vector: Sequence[Fraction]) -> Row:
        out = list(vector)
        for row, pivot in zip(self.rows, self.pivots):
            factor = out[pivot]
            if factor:
                out = [a - factor * b for a, b in zip(out, row)]
        return out

    def contains(self, vector: Sequence[Fraction]) -> bool:
        return not any(self.residual(vector))
