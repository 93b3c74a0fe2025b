"""Quasideterminants and Gauss decomposition over a noncommutative entry ring.

Entries are either field scalars (RatFunc) or operator blocks (SparseMat
over RatFunc); the formulas only use ring operations plus inverses of
specific submatrices.  A submatrix with block entries is inverted by
flattening to one large scalar matrix, inverting exactly, and re-blocking
(the flattening uses the package-wide row-major pair convention).

The (i,j) quasideterminant of X is x_ij - r (X^ij)^-1 c, with X^ij the
deleted submatrix, r the i-th row of X without column j, and c the j-th
column without row i.  The decomposition L = F H E (unit lower, diagonal,
unit upper) is computed from the bordered quasideterminant formulas and
re-multiplied before being returned; a factorization that fails to
reproduce L exactly raises instead of returning.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from .ratfunc import ONE, RatFunc, ZERO
from .tensor import SparseMat

__all__ = [
    "NCMatrix",
    "GaussFactors",
    "NonInvertibleError",
    "quasidet",
    "bordered_quasidet",
    "gauss_decompose",
    "gauss_decompose_udl",
    "psi_image",
    "invert_ratfunc_mat",
]


class NonInvertibleError(ArithmeticError):
    """A required pivot or submatrix is not invertible; carries the pivot."""

    def __init__(self, message: str, pivot: int | None = None):
        super().__init__(message)
        self.pivot = pivot


def _is_block(x) -> bool:
    return isinstance(x, SparseMat)


def _zero_like(x):
    if _is_block(x):
        return SparseMat(x.nrows, x.ncols)
    return ZERO


def _one_like(x):
    if _is_block(x):
        return SparseMat.identity(x.nrows)
    return ONE


def _mul(a, b):
    return a @ b if _is_block(a) else a * b


class NCMatrix:
    """Dense square matrix over scalars or uniform operator blocks, 1-based."""

    def __init__(self, rows: Sequence[Sequence]):
        self.m = len(rows)
        if any(len(r) != self.m for r in rows):
            raise ValueError("matrix must be square")
        self.rows = [list(r) for r in rows]
        first = self.rows[0][0]
        self.block_dim = first.nrows if _is_block(first) else 0

    def __getitem__(self, key):
        i, j = key
        return self.rows[i - 1][j - 1]

    def submatrix(self, row_idx: Sequence[int], col_idx: Sequence[int]) -> "NCMatrix":
        return NCMatrix([[self[i, j] for j in col_idx] for i in row_idx])

    def __matmul__(self, other: "NCMatrix") -> "NCMatrix":
        if self.m != other.m:
            raise ValueError("size mismatch")
        out = []
        for i in range(1, self.m + 1):
            row = []
            for j in range(1, other.m + 1):
                acc = None
                for k in range(1, self.m + 1):
                    term = _mul(self[i, k], other[k, j])
                    acc = term if acc is None else acc + term
                row.append(acc)
            out.append(row)
        return NCMatrix(out)

    def __eq__(self, other):
        if not isinstance(other, NCMatrix) or self.m != other.m:
            return NotImplemented
        return all(
            self[i, j] == other[i, j]
            for i in range(1, self.m + 1)
            for j in range(1, self.m + 1)
        )

    def __ne__(self, other):
        eq = self.__eq__(other)
        return NotImplemented if eq is NotImplemented else not eq

    def map_entries(self, fn: Callable) -> "NCMatrix":
        return NCMatrix([[fn(x) for x in row] for row in self.rows])

    def flatten(self) -> SparseMat:
        """Scalar form: identity re-indexing for scalar entries, block
        flattening with the row-major pair convention otherwise."""
        if not self.block_dim:
            entries = {}
            for i in range(self.m):
                for j in range(self.m):
                    val = self.rows[i][j]
                    if val:
                        entries[(i + 1, j + 1)] = val
            return SparseMat(self.m, self.m, entries)
        d = self.block_dim
        entries = {}
        for i in range(self.m):
            for j in range(self.m):
                blk = self.rows[i][j]
                for (a, b), val in blk.entries.items():
                    entries[(i * d + a, j * d + b)] = val
        n = self.m * d
        return SparseMat(n, n, entries)

    @staticmethod
    def from_flat(flat: SparseMat, m: int, block_dim: int) -> "NCMatrix":
        if not block_dim:
            rows = [[flat.get(i, j) or ZERO for j in range(1, m + 1)] for i in range(1, m + 1)]
            return NCMatrix(rows)
        blocks = [[dict() for _ in range(m)] for _ in range(m)]
        for (a, b), val in flat.entries.items():
            i, aa = divmod(a - 1, block_dim)
            j, bb = divmod(b - 1, block_dim)
            blocks[i][j][(aa + 1, bb + 1)] = val
        rows = [
            [SparseMat(block_dim, block_dim, blocks[i][j]) for j in range(m)]
            for i in range(m)
        ]
        return NCMatrix(rows)

    def inverse(self) -> "NCMatrix":
        flat_inv = invert_ratfunc_mat(self.flatten())
        return NCMatrix.from_flat(flat_inv, self.m, self.block_dim)

    def __repr__(self):
        kind = f"blocks {self.block_dim}x{self.block_dim}" if self.block_dim else "scalars"
        return f"NCMatrix({self.m}x{self.m}, {kind})"


def invert_ratfunc_mat(mat: SparseMat) -> SparseMat:
    """Exact inverse of a scalar matrix by Gauss-Jordan elimination.

    Pivots prefer entries with the fewest monomials to limit coefficient
    growth; a column without any nonzero pivot raises NonInvertibleError.
    """
    if mat.nrows != mat.ncols:
        raise ValueError("only square matrices invert")
    n = mat.nrows
    a = [[mat.get(i, j) or ZERO for j in range(1, n + 1)] for i in range(1, n + 1)]
    inv = [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]

    def complexity(f: RatFunc) -> int:
        return len(f.fe.numer.terms()) + len(f.fe.denom.terms())

    for col in range(n):
        pivot_row = None
        best = None
        for r in range(col, n):
            if a[r][col]:
                c = complexity(a[r][col])
                if best is None or c < best:
                    best = c
                    pivot_row = r
        if pivot_row is None:
            raise NonInvertibleError(f"no pivot in column {col + 1}", pivot=col + 1)
        if pivot_row != col:
            a[col], a[pivot_row] = a[pivot_row], a[col]
            inv[col], inv[pivot_row] = inv[pivot_row], inv[col]
        piv = a[col][col]
        pinv = ONE / piv
        a[col] = [x * pinv for x in a[col]]
        inv[col] = [x * pinv for x in inv[col]]
        for r in range(n):
            if r == col or not a[r][col]:
                continue
            f = a[r][col]
            a[r] = [x - f * y for x, y in zip(a[r], a[col])]
            inv[r] = [x - f * y for x, y in zip(inv[r], inv[col])]
    entries = {}
    for i in range(n):
        for j in range(n):
            if inv[i][j]:
                entries[(i + 1, j + 1)] = inv[i][j]
    return SparseMat(n, n, entries)


def quasidet(x: NCMatrix, i: int, j: int):
    """The (i, j) quasideterminant of a square NCMatrix."""
    m = x.m
    if m == 1:
        return x[1, 1]
    rows = [r for r in range(1, m + 1) if r != i]
    cols = [c for c in range(1, m + 1) if c != j]
    sub = x.submatrix(rows, cols)
    try:
        sub_inv = sub.inverse()
    except NonInvertibleError as exc:
        raise NonInvertibleError(
            f"deleted submatrix at ({i}, {j}) is not invertible", pivot=exc.pivot
        ) from exc
    row_vec = [x[i, c] for c in cols]
    col_vec = [x[r, j] for r in rows]
    acc = None
    for a in range(len(cols)):
        for b in range(len(rows)):
            term = _mul(_mul(row_vec[a], sub_inv[a + 1, b + 1]), col_vec[b])
            acc = term if acc is None else acc + term
    return x[i, j] - acc


def bordered_quasidet(L: NCMatrix, rows: Sequence[int], cols: Sequence[int]):
    """Quasideterminant of the submatrix L[rows, cols] boxed at its last
    row and column (the shape every factor formula uses)."""
    sub = L.submatrix(rows, cols)
    return quasidet(sub, len(rows), len(cols))


@dataclass
class GaussFactors:
    """L = F H E with F unit lower triangular, H diagonal, E unit upper.

    With udl set, the factorization is taken in the reversed index order
    and the product reads E H F instead.
    """

    F: NCMatrix
    H: NCMatrix
    E: NCMatrix
    udl: bool = False

    def h(self, i: int):
        return self.H[i, i]

    def e(self, i: int, j: int):
        return self.E[i, j]

    def f(self, j: int, i: int):
        return self.F[j, i]

    def product(self) -> NCMatrix:
        if self.udl:
            return (self.E @ self.H) @ self.F
        return (self.F @ self.H) @ self.E


def gauss_decompose(L: NCMatrix) -> GaussFactors:
    """Factors from the quasideterminant formulas, verified by remultiplying.

    h_m is the (m, m) quasideterminant of the leading m x m corner;
    e_ij = h_i^-1 * |rows 1..i, cols 1..i-1,j| and
    f_ji = |rows 1..i-1,j, cols 1..i| * h_i^-1, both boxed at the last
    position.  Inverses of the leading corners are computed once and
    shared by every bordered quasideterminant.
    """
    m = L.m
    one = _one_like(L[1, 1])
    zero = _zero_like(L[1, 1])

    # Leading-corner inverses, shared across all quasideterminant formulas.
    corner_inv: dict[int, NCMatrix] = {}
    for k in range(1, m):
        corner = L.submatrix(range(1, k + 1), range(1, k + 1))
        try:
            corner_inv[k] = corner.inverse()
        except NonInvertibleError as exc:
            raise NonInvertibleError(f"leading {k} x {k} corner is not invertible",
                                     pivot=exc.pivot) from exc

    def boxed(rows: Sequence[int], cols: Sequence[int]):
        # Quasidet of L[rows, cols] boxed at the last position, using the
        # precomputed inverse of the leading corner (rows[:-1] = cols[:-1]
        # = 1..k by construction).
        k = len(rows) - 1
        if k == 0:
            return L[rows[0], cols[0]]
        inv = corner_inv[k]
        acc = None
        for a in range(1, k + 1):
            for b in range(1, k + 1):
                term = _mul(_mul(L[rows[-1], cols[a - 1]], inv[a, b]), L[rows[b - 1], cols[-1]])
                acc = term if acc is None else acc + term
        return L[rows[-1], cols[-1]] - acc

    hs = [boxed(list(range(1, k + 1)), list(range(1, k + 1))) for k in range(1, m + 1)]
    h_inv = []
    for k, h in enumerate(hs, start=1):
        try:
            h_inv.append(invert_ratfunc_mat(h) if _is_block(h) else ONE / h)
        except (NonInvertibleError, ZeroDivisionError) as exc:
            raise NonInvertibleError(f"diagonal factor h_{k} is not invertible") from exc

    F_rows = [[one if i == j else zero for j in range(m)] for i in range(m)]
    E_rows = [[one if i == j else zero for j in range(m)] for i in range(m)]
    H_rows = [[hs[i] if i == j else zero for j in range(m)] for i in range(m)]
    for i in range(1, m + 1):
        for j in range(i + 1, m + 1):
            top = boxed(list(range(1, i + 1)), list(range(1, i)) + [j])
            E_rows[i - 1][j - 1] = _mul(h_inv[i - 1], top)
            bot = boxed(list(range(1, i)) + [j], list(range(1, i + 1)))
            F_rows[j - 1][i - 1] = _mul(bot, h_inv[i - 1])
    factors = GaussFactors(F=NCMatrix(F_rows), H=NCMatrix(H_rows), E=NCMatrix(E_rows))
    if factors.product() != L:
        raise NonInvertibleError("gauss factors fail to reproduce the input")
    return factors


def gauss_decompose_udl(L: NCMatrix) -> GaussFactors:
    """Decomposition with respect to the reversed index order: L = E H F
    with E unit upper, H diagonal, F unit lower (used for the inverse
    L-matrix, whose factors are the inverses of the direct ones)."""
    m = L.m
    flip = list(range(m, 0, -1))
    flipped = L.submatrix(flip, flip)
    g = gauss_decompose(flipped)

    def unflip(x: NCMatrix) -> NCMatrix:
        return x.submatrix(flip, flip)

    return GaussFactors(F=unflip(g.E), H=unflip(g.H), E=unflip(g.F), udl=True)


def psi_image(L: NCMatrix, m: int, i: int, j: int):
    """Bordered quasideterminant embedding the corank-m algebra.

    For m = 0 this is the entry itself; otherwise the quasideterminant of
    rows (1..m, i), columns (1..m, j), boxed at (i, j).
    """
    if m == 0:
        return L[i, j]
    if not (m + 1 <= i and m + 1 <= j):
        raise ValueError("indices must lie beyond the corner")
    return bordered_quasidet(L, list(range(1, m + 1)) + [i], list(range(1, m + 1)) + [j])
