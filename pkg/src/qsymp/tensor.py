"""Sparse matrices over a generic ring, Kronecker products, leg embeddings.

Matrices are stored as dictionaries mapping 1-based ``(row, col)`` pairs to
nonzero ring elements.  Entries only need ``+``, ``*``, unary ``-`` and a
truthiness test (false iff zero), so the same container carries scalar
RatFunc matrices and block matrices whose entries are themselves SparseMat.

The single global tensor-index convention: the pair (i, k) on V (x) W with
dim(W) = d flattens to the 1-based index (i - 1) * d + k.  Every module in
the package shares it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping

from .ratfunc import ONE, P, Q, RatFunc, rat

__all__ = [
    "SparseMat",
    "IndexData",
    "unit_matrix",
    "kron",
    "embed_legs",
    "perm_p",
    "q_op",
    "flatten_pair",
    "split_pair",
]


def flatten_pair(i: int, k: int, dim_second: int) -> int:
    """1-based row-major flattening of the leg pair (i, k)."""
    return (i - 1) * dim_second + k


def split_pair(a: int, dim_second: int) -> tuple[int, int]:
    return (a - 1) // dim_second + 1, (a - 1) % dim_second + 1


class SparseMat:
    """Immutable-by-convention sparse matrix over a generic ring."""

    __slots__ = ("nrows", "ncols", "entries")

    def __init__(self, nrows: int, ncols: int, entries: dict | None = None):
        self.nrows = nrows
        self.ncols = ncols
        self.entries = {} if entries is None else entries

    # -- construction ---------------------------------------------------

    @staticmethod
    def zero(nrows: int, ncols: int) -> "SparseMat":
        return SparseMat(nrows, ncols)

    @staticmethod
    def identity(n: int, one=ONE) -> "SparseMat":
        return SparseMat(n, n, {(i, i): one for i in range(1, n + 1)})

    @staticmethod
    def from_entries(nrows: int, ncols: int, items: Iterable[tuple[int, int, object]]) -> "SparseMat":
        d = {}
        for i, j, val in items:
            if not (1 <= i <= nrows and 1 <= j <= ncols):
                raise IndexError(f"entry ({i}, {j}) outside {nrows} x {ncols}")
            if val:
                cur = d.get((i, j))
                new = val if cur is None else cur + val
                if new:
                    d[(i, j)] = new
                elif (i, j) in d:
                    del d[(i, j)]
        return SparseMat(nrows, ncols, d)

    def copy(self) -> "SparseMat":
        return SparseMat(self.nrows, self.ncols, dict(self.entries))

    # -- basic queries ----------------------------------------------------

    def get(self, i: int, j: int):
        """Entry at (i, j), or None when structurally zero."""
        return self.entries.get((i, j))

    @property
    def is_zero(self) -> bool:
        return not self.entries

    def __bool__(self) -> bool:
        return bool(self.entries)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def __eq__(self, other):
        if not isinstance(other, SparseMat):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    def __ne__(self, other):
        eq = self.__eq__(other)
        return NotImplemented if eq is NotImplemented else not eq

    def __hash__(self):
        return hash((self.shape, tuple(sorted(self.entries.items(), key=lambda kv: kv[0]))))

    # -- arithmetic -------------------------------------------------------

    def _check_same_shape(self, other):
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other: "SparseMat") -> "SparseMat":
        self._check_same_shape(other)
        d = dict(self.entries)
        for key, val in other.entries.items():
            cur = d.get(key)
            new = val if cur is None else cur + val
            if new:
                d[key] = new
            elif key in d:
                del d[key]
        return SparseMat(self.nrows, self.ncols, d)

    def __sub__(self, other: "SparseMat") -> "SparseMat":
        return self + (-other)

    def __neg__(self) -> "SparseMat":
        return SparseMat(self.nrows, self.ncols, {k: -v for k, v in self.entries.items()})

    def scale(self, c) -> "SparseMat":
        """Left-multiply every entry by the scalar c."""
        if not c:
            return SparseMat(self.nrows, self.ncols)
        return SparseMat(self.nrows, self.ncols, {k: c * v for k, v in self.entries.items()})

    def __matmul__(self, other: "SparseMat") -> "SparseMat":
        if self.ncols != other.nrows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        rows_of_b: dict[int, list[tuple[int, object]]] = {}
        for (k, j), val in other.entries.items():
            rows_of_b.setdefault(k, []).append((j, val))
        acc: dict[tuple[int, int], object] = {}
        for (i, k), a in self.entries.items():
            hits = rows_of_b.get(k)
            if not hits:
                continue
            for j, b in hits:
                prod = a * b
                if not prod:
                    continue
                cur = acc.get((i, j))
                new = prod if cur is None else cur + prod
                if new:
                    acc[(i, j)] = new
                elif (i, j) in acc:
                    del acc[(i, j)]
        return SparseMat(self.nrows, other.ncols, acc)

    def transpose(self) -> "SparseMat":
        return SparseMat(self.ncols, self.nrows, {(j, i): v for (i, j), v in self.entries.items()})

    def map_entries(self, fn: Callable) -> "SparseMat":
        d = {}
        for key, val in self.entries.items():
            new = fn(val)
            if new:
                d[key] = new
        return SparseMat(self.nrows, self.ncols, d)

    # -- RatFunc-entry helpers ---------------------------------------------

    def subs(self, mapping: Mapping[str, RatFunc]) -> "SparseMat":
        return self.map_entries(lambda f: f.subs(mapping))

    def eval_point(self, point: Mapping[str, Fraction]) -> dict[tuple[int, int], Fraction]:
        """Evaluate all entries at a rational point; zeros are dropped."""
        out = {}
        for key, val in self.entries.items():
            x = val.eval(point)
            if x:
                out[key] = x
        return out

    def dump_lines(self) -> list[str]:
        """Golden-file form: sorted ``(row, col) = <canonical text>`` lines."""
        return [
            f"({i}, {j}) = {self.entries[(i, j)]}"
            for (i, j) in sorted(self.entries)
        ]

    def __repr__(self):
        return f"SparseMat({self.nrows}x{self.ncols}, {len(self.entries)} entries)"


def unit_matrix(dim: int, k: int, l: int, one=ONE) -> SparseMat:
    """The matrix unit E_kl: 1 in the (k, l) position, 0 elsewhere."""
    if not (1 <= k <= dim and 1 <= l <= dim):
        raise IndexError(f"unit index ({k}, {l}) out of range for dim {dim}")
    return SparseMat(dim, dim, {(k, l): one})


def kron(a: SparseMat, b: SparseMat) -> SparseMat:
    """Kronecker product with the shared row-major pair flattening."""
    d = {}
    for (i, j), x in a.entries.items():
        for (k, l), y in b.entries.items():
            val = x * y
            if val:
                d[(flatten_pair(i, k, b.nrows), flatten_pair(j, l, b.ncols))] = val
    return SparseMat(a.nrows * b.nrows, a.ncols * b.ncols, d)


def embed_legs(op2: SparseMat, legs: tuple[int, int], k: int, dim: int, one=ONE) -> SparseMat:
    """Embed a two-site operator onto legs (a, b) of a k-fold tensor power.

    op2 acts on V (x) V with dim(V) = dim; identity on the other legs.
    """
    a, b = legs
    if not (1 <= a < b <= k):
        raise IndexError(f"legs {legs} invalid for {k} legs")
    if op2.nrows != dim * dim or op2.ncols != dim * dim:
        raise ValueError("two-site operator has wrong dimension")
    other = [t for t in range(k) if t not in (a - 1, b - 1)]
    total = dim ** k

    def flatten(tup):
        idx = 0
        for x in tup:
            idx = idx * dim + (x - 1)
        return idx + 1

    # Enumerate identity-leg assignments by counting in base dim.
    n_other = len(other)
    assignments = []
    count = dim ** n_other
    for c in range(count):
        tup = []
        rem = c
        for _ in range(n_other):
            tup.append(rem % dim + 1)
            rem //= dim
        assignments.append(tuple(tup))

    d = {}
    for (rr, cc), val in op2.entries.items():
        i1, i2 = split_pair(rr, dim)
        j1, j2 = split_pair(cc, dim)
        for asn in assignments:
            row = [0] * k
            col = [0] * k
            row[a - 1], row[b - 1] = i1, i2
            col[a - 1], col[b - 1] = j1, j2
            for pos, x in zip(other, asn):
                row[pos] = x
                col[pos] = x
            d[(flatten(row), flatten(col))] = val
    return SparseMat(total, total, d)


def perm_p(dim: int) -> SparseMat:
    """The permutation operator P = sum_ij E_ij (x) E_ji on V (x) V."""
    d = {}
    for i in range(1, dim + 1):
        for j in range(1, dim + 1):
            d[(flatten_pair(i, j, dim), flatten_pair(j, i, dim))] = ONE
    return SparseMat(dim * dim, dim * dim, d)


@dataclass(frozen=True)
class IndexData:
    """Bar weights, signs, and the index involution for the 2n-dim space.

    (bar 1, ..., bar 2n) = (n, n-1, ..., 1, -1, ..., -n); eps_i = +1 for
    i <= n and -1 above; i' = 2n + 1 - i.
    """

    n: int

    def bar(self, i: int) -> int:
        if 1 <= i <= self.n:
            return self.n - i + 1
        if self.n < i <= 2 * self.n:
            return self.n - i
        raise IndexError(f"index {i} out of range")

    def sign(self, i: int) -> int:
        if 1 <= i <= self.n:
            return 1
        if self.n < i <= 2 * self.n:
            return -1
        raise IndexError(f"index {i} out of range")

    def prime(self, i: int) -> int:
        if not (1 <= i <= 2 * self.n):
            raise IndexError(f"index {i} out of range")
        return 2 * self.n + 1 - i


def q_op(n: int) -> SparseMat:
    """The rank-one-type operator Q = sum_ij t^(bar i - bar j) eps_i eps_j
    E_i'j' (x) E_ij with t = p/q, supported on row pairs (i', i)."""
    ix = IndexData(n)
    dim = 2 * n
    t = P / Q
    d = {}
    for i in range(1, dim + 1):
        for j in range(1, dim + 1):
            coeff = (t ** (ix.bar(i) - ix.bar(j))) * rat(ix.sign(i) * ix.sign(j))
            # E_i'j' (x) E_ij sends v_j' (x) v_j to v_i' (x) v_i.
            d[(flatten_pair(ix.prime(i), i, dim), flatten_pair(ix.prime(j), j, dim))] = coeff
    return SparseMat(dim * dim, dim * dim, d)
