"""Exact linear algebra over fields of scalars

The routines work on nested lists of any exact field elements that support
``+ - * /`` and truth testing, in practice
:class:`~pycartan.symcore.RationalFunction` and :class:`fractions.Fraction`.
Elimination is the fraction-free scheme of Bareiss; the pivot of each column
is the candidate with the fewest terms, which keeps intermediate expressions
small.
"""
import typing

from .errors import InconsistentSystem, SingularMatrix


Element = typing.Any
Matrix = typing.List[typing.List[Element]]


def _weight(elem: Element) -> int:
    return int(getattr(elem, 'term_count', 1))


class Echelon(typing.NamedTuple):
    """Row echelon form produced by :func:`echelon`"""
    rows: Matrix
    pivots: typing.List[int]
    """Pivot column of each leading row"""
    sign: int
    """Parity of the row swaps performed"""


def echelon(matrix: typing.Sequence[typing.Sequence[Element]],
            pivot_columns: typing.Optional[int] = None) -> Echelon:
    """Fraction-free row echelon form

    :param pivot_columns: only the first ``pivot_columns`` columns may hold
        pivots (the rest is an augmented right-hand side)
    """
    rows = [list(r) for r in matrix]
    if not rows:
        return Echelon(rows, [], 1)
    ncols = len(rows[0])
    if pivot_columns is None:
        pivot_columns = ncols
    pivots: typing.List[int] = []
    sign = 1
    prev: typing.Optional[Element] = None
    top = 0
    for col in range(pivot_columns):
        if top == len(rows):
            break
        candidates = [i for i in range(top, len(rows)) if rows[i][col]]
        if not candidates:
            continue
        best = min(candidates, key=lambda i: _weight(rows[i][col]))
        if best != top:
            rows[top], rows[best] = rows[best], rows[top]
            sign = -sign
        pivot = rows[top][col]
        for i in range(top + 1, len(rows)):
            factor = rows[i][col]
            if not factor:
                if prev is not None:
                    rows[i] = [e if j <= col else e * pivot / prev for j, e in enumerate(rows[i])]
                else:
                    rows[i] = [e if j <= col else e * pivot for j, e in enumerate(rows[i])]
                continue
            new = []
            for j, elem in enumerate(rows[i]):
                if j < col:
                    new.append(elem)
                elif j == col:
                    new.append(elem * 0)
                else:
                    val = pivot * elem - factor * rows[top][j]
                    new.append(val if prev is None else val / prev)
            rows[i] = new
        prev = pivot
        pivots.append(col)
        top += 1
    return Echelon(rows, pivots, sign)


def determinant(matrix: typing.Sequence[typing.Sequence[Element]]) -> Element:
    """Determinant of a square matrix"""
    size = len(matrix)
    if any(len(r) != size for r in matrix):
        raise ValueError("Determinant needs a square matrix")
    ech = echelon(matrix)
    if len(ech.pivots) < size:
        return matrix[0][0] * 0
    last = ech.rows[size - 1][size - 1]
    return last if ech.sign > 0 else -last


class Solution(typing.NamedTuple):
    """Particular solution of a linear system"""
    columns: typing.List[typing.List[Element]]
    """One solution vector per right-hand side; free unknowns set to zero"""
    rank: int
    nullity: int


def solve(matrix: typing.Sequence[typing.Sequence[Element]],
          rhs: typing.Sequence[typing.Sequence[Element]]) -> Solution:
    """Solve ``matrix · X = rhs`` for each column of ``rhs``

    :param rhs: matrix with one row per equation
    :raises InconsistentSystem: if some column has no solution
    """
    if len(matrix) != len(rhs):
        raise ValueError("Row count of matrix and right-hand side differ")
    if not matrix:
        raise ValueError("Empty system")
    nunk = len(matrix[0])
    nrhs = len(rhs[0]) if rhs else 0
    augmented = [list(a) + list(b) for a, b in zip(matrix, rhs)]
    ech = echelon(augmented, pivot_columns=nunk)
    rank = len(ech.pivots)
    for row in ech.rows[rank:]:
        if any(row[nunk:]):
            raise InconsistentSystem("Linear system has no solution")

    zero = matrix[0][0] * 0
    columns = []
    for k in range(nrhs):
        sol = [zero] * nunk
        for r in range(rank - 1, -1, -1):
            col = ech.pivots[r]
            row = ech.rows[r]
            acc = row[nunk + k]
            for j in range(col + 1, nunk):
                if row[j] and sol[j]:
                    acc = acc - row[j] * sol[j]
            sol[col] = acc / row[col]
        columns.append(sol)
    return Solution(columns, rank, nunk - rank)


def identity(size: int, one: Element) -> Matrix:
    """Identity matrix built from the field element ``one``"""
    zero = one * 0
    return [[one if i == j else zero for j in range(size)] for i in range(size)]


def inverse(matrix: typing.Sequence[typing.Sequence[Element]]) -> Matrix:
    """Inverse of a square matrix

    :raises SingularMatrix: if the matrix is singular
    """
    size = len(matrix)
    if any(len(r) != size for r in matrix):
        raise ValueError("Inverse needs a square matrix")
    one = matrix[0][0] * 0 + 1
    try:
        sol = solve(matrix, identity(size, one))
    except InconsistentSystem:
        raise SingularMatrix("Matrix is singular")
    if sol.rank < size:
        raise SingularMatrix("Matrix is singular")
    # columns hold the columns of the inverse
    return [[sol.columns[j][i] for j in range(size)] for i in range(size)]


def multiply(left: typing.Sequence[typing.Sequence[Element]],
             right: typing.Sequence[typing.Sequence[Element]]) -> Matrix:
    """Matrix product

    Nothing in the package needs it; the test suite uses it to check
    :func:`inverse` against :func:`identity`.
    """
    inner = len(right)
    return [[sum((left[i][k] * right[k][j] for k in range(1, inner)), left[i][0] * right[0][j])
             for j in range(len(right[0]))] for i in range(len(left))]
