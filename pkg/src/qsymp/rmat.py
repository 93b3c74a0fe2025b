"""Builders for the two-parameter R-matrices.

Four families live here, all exact over Q(p, q, u, v, w):

  * the basic (constant) R-matrix of the 2n-dimensional vector
    representation, as a ten-group sum of matrix-unit tensors;
  * the quantum affine R-matrix in its explicit rational form, with the
    a_ij(u) tail supported on the (i'j', ij) positions;
  * the same matrix produced by Yang-Baxterization, as the rational
    combination of the basic R, the permutation P, and the rank-one-type Q;
  * the type A matrices (plain and primed) and the two-dimensional rank-one
    matrix that the reduction arguments use.

The constant R is semisimple with three eigenvalues; they are not
hard-coded but derived by exact numeric minimal-polynomial computation at
random rational parameters and lifted back to signed monomials in p, q
(see derive_basic_r_eigenvalues, pinned in a golden file by the tests).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from . import ratfunc as rf
from .ratfunc import ONE, RatFunc, rat
from .tensor import IndexData, SparseMat, flatten_pair, perm_p, q_op, unit_matrix

__all__ = [
    "RKind",
    "RMatrix",
    "basic_r",
    "affine_r_explicit",
    "yang_baxterize",
    "type_a_r",
    "rank1_r",
    "diag_family_a",
    "derive_basic_r_eigenvalues",
]

R, S, U = rf.R, rf.S, rf.U
P_HALF, Q_HALF = rf.P, rf.Q


class RKind(Enum):
    BASIC_C = "basic-c"
    AFFINE_C_EXPLICIT = "affine-c-explicit"
    AFFINE_C_BAXTERIZED = "affine-c-baxterized"
    TYPE_A = "type-a"
    TYPE_A_PRIMED = "type-a-primed"
    RANK1 = "rank1"


@dataclass
class RMatrix:
    n: int
    kind: RKind
    dim: int
    mat: SparseMat

    def entry(self, i: int, k: int, j: int, l: int) -> RatFunc | None:
        """Coefficient of E_ij (x) E_kl, i.e. matrix entry ((i,k),(j,l))."""
        return self.mat.get(flatten_pair(i, k, self.dim), flatten_pair(j, l, self.dim))

    def spec_lines(self) -> list[str]:
        head = f"n = {self.n}, dim = {self.dim}, kind = {self.kind.value}"
        return [head] + self.mat.dump_lines()


def diag_family_a(n: int) -> list[tuple[int, int]]:
    """Index pairs (a, b) of the E_aa (x) E_bb family weighted by (rs)^(1/2)
    in the constant R (and by rs(u-1)/(ur-s) in the affine one).

    Together with its transpose this family partitions all pairs with
    a != b and b != a'.
    """
    ix = IndexData(n)
    pairs: list[tuple[int, int]] = []
    for i in range(1, n):
        for j in range(i + 1, n + 1):
            pairs.append((i, j))
    for i in range(1, n):
        for j in range(ix.prime(i) + 1, 2 * n + 1):
            pairs.append((i, j))
    for j in range(n + 2, 2 * n + 1):
        pairs.append((n, j))
    for j in range(n + 1, 2 * n):
        for i in range(j + 1, 2 * n + 1):
            pairs.append((i, j))
    for i in range(1, n):
        for j in range(n + 1, 2 * n - i + 1):
            pairs.append((j, i))
    return pairs


def _diag_unit(dim: int, a: int, b: int) -> tuple[int, int]:
    """Position of E_aa (x) E_bb in the flattened V (x) V indexing."""
    idx = flatten_pair(a, b, dim)
    return (idx, idx)


def basic_r(n: int) -> RMatrix:
    """The constant R-matrix of the vector representation (ten-group sum)."""
    ix = IndexData(n)
    dim = 2 * n
    t = P_HALF / Q_HALF                      # r^(1/2) s^(-1/2)
    lam = t - 1 / t                          # r^(1/2)s^(-1/2) - r^(-1/2)s^(1/2)
    entries: dict[tuple[int, int], RatFunc] = {}

    def put(pos, val):
        if not val:
            entries.pop(pos, None) if pos in entries else None
            return
        cur = entries.get(pos)
        new = val if cur is None else cur + val
        if new:
            entries[pos] = new
        elif pos in entries:
            del entries[pos]

    for i in range(1, dim + 1):
        put(_diag_unit(dim, i, i), t)
        put(_diag_unit(dim, i, ix.prime(i)), 1 / t)
    rooted = P_HALF * Q_HALF                 # (rs)^(1/2)
    for a, b in diag_family_a(n):
        put(_diag_unit(dim, a, b), rooted)
        put(_diag_unit(dim, b, a), 1 / rooted)
    for i in range(1, dim + 1):
        for j in range(i + 1, dim + 1):
            # E_ij (x) E_ji sends v_j (x) v_i to v_i (x) v_j.
            put((flatten_pair(i, j, dim), flatten_pair(j, i, dim)), lam)
    for i in range(1, dim + 1):
        for j in range(1, i):
            coeff = -lam * (t ** (ix.bar(i) - ix.bar(j))) * rat(ix.sign(i) * ix.sign(j))
            put((flatten_pair(ix.prime(i), i, dim), flatten_pair(ix.prime(j), j, dim)), coeff)
    return RMatrix(n=n, kind=RKind.BASIC_C, dim=dim, mat=SparseMat(dim * dim, dim * dim, entries))


def _a_tail_coeff(n: int, ix: IndexData, i: int, j: int) -> RatFunc:
    """a_ij(u) divided by the (u - r^(-1)s)(u - r^(-n-1)s^(n+1)) prefactor."""
    t = P_HALF / Q_HALF
    kappa = (ONE / t ** 2) ** (n + 1)          # r^(-n-1) s^(n+1)
    pref = (U - S / R) * (U - kappa)
    if i == j:
        a = (U - 1) * ((S / R) * U - kappa)
    else:
        tpow = (t ** (ix.bar(i) - ix.bar(j))) * rat(ix.sign(i) * ix.sign(j))
        delta = ONE if j == ix.prime(i) else rf.ZERO
        if i > j:
            a = (S / R - 1) * U * (tpow * (U - 1) - delta * (U - kappa))
        else:
            a = (S / R - 1) * (tpow * kappa * (U - 1) - delta * (U - kappa))
    return a / pref


def affine_r_explicit(n: int) -> RMatrix:
    """The quantum affine R-matrix in its explicit rational form."""
    ix = IndexData(n)
    dim = 2 * n
    entries: dict[tuple[int, int], RatFunc] = {}

    def put(pos, val):
        if not val:
            return
        cur = entries.get(pos)
        new = val if cur is None else cur + val
        if new:
            entries[pos] = new
        elif pos in entries:
            del entries[pos]

    for i in range(1, dim + 1):
        put(_diag_unit(dim, i, i), ONE)
    c_a = R * S * (U - 1) / (U * R - S)
    c_b = (U - 1) / (U * R - S)
    for a, b in diag_family_a(n):
        put(_diag_unit(dim, a, b), c_a)
        put(_diag_unit(dim, b, a), c_b)
    c_lo = (R - S) / (U * R - S)
    c_hi = (R - S) * U / (U * R - S)
    for i in range(1, dim + 1):
        for j in range(1, dim + 1):
            if i == j or j == ix.prime(i):
                continue
            coeff = c_lo if i > j else c_hi
            put((flatten_pair(i, j, dim), flatten_pair(j, i, dim)), coeff)
    for i in range(1, dim + 1):
        for j in range(1, dim + 1):
            coeff = _a_tail_coeff(n, ix, i, j)
            if coeff:
                put((flatten_pair(ix.prime(i), i, dim), flatten_pair(ix.prime(j), j, dim)), coeff)
    return RMatrix(n=n, kind=RKind.AFFINE_C_EXPLICIT, dim=dim,
                   mat=SparseMat(dim * dim, dim * dim, entries))


def yang_baxterize(n: int) -> RMatrix:
    """Spectral R-matrix as the rational combination of R, P, and Q."""
    dim = 2 * n
    rbase = basic_r(n).mat
    pmat = perm_p(dim)
    qmat = q_op(n)
    kappa = (S / R) ** (n + 1)               # r^(-n-1) s^(n+1)
    c_r = P_HALF * Q_HALF * (U - 1) / (U * R - S)
    c_p = (R - S) / (U * R - S)
    c_q = -(R - S) * (U - 1) * kappa / ((U * R - S) * (U - kappa))
    mat = rbase.scale(c_r) + pmat.scale(c_p) + qmat.scale(c_q)
    return RMatrix(n=n, kind=RKind.AFFINE_C_BAXTERIZED, dim=dim, mat=mat)


def type_a_r(n: int, primed: bool = False) -> RMatrix:
    """Type A spectral R-matrix on an n-dimensional space (five-group sum).

    The primed variant swaps the two diagonal coefficient families; it is
    the image of the plain one under r -> s^(-1), s^(-1) -> r.
    """
    entries: dict[tuple[int, int], RatFunc] = {}
    c_swap_lo = (1 - R / S) / (1 - U * R / S)
    c_swap_hi = (1 - R / S) * U / (1 - R / S * U)
    c_gt = (1 - U) * R / (1 - U * R / S)
    c_lt = (1 - U) / S / (1 - U * R / S)
    if primed:
        c_gt, c_lt = (1 - U) / S / (1 - U * R / S), (1 - U) * R / (1 - U * R / S)
    for i in range(1, n + 1):
        entries[_diag_unit(n, i, i)] = ONE
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i == j:
                continue
            entries[_diag_unit(n, i, j)] = c_gt if i > j else c_lt
            entries[(flatten_pair(i, j, n), flatten_pair(j, i, n))] = c_swap_lo if i > j else c_swap_hi
    kind = RKind.TYPE_A_PRIMED if primed else RKind.TYPE_A
    return RMatrix(n=n, kind=kind, dim=n, mat=SparseMat(n * n, n * n, entries))


def rank1_r() -> RMatrix:
    """The two-dimensional rank-one R-matrix (indices n, n+1 mapped to 1, 2).

    Coincides with affine_r_explicit(1); the tests pin that identification.
    """
    x = R / S                                 # r s^(-1)
    entries: dict[tuple[int, int], RatFunc] = {}
    for i in (1, 2):
        entries[_diag_unit(2, i, i)] = ONE
    off = (U - 1) / (x * U - 1 / x)
    entries[_diag_unit(2, 1, 2)] = off
    entries[_diag_unit(2, 2, 1)] = off
    entries[(flatten_pair(1, 2, 2), flatten_pair(2, 1, 2))] = (x - 1 / x) * U / (x * U - 1 / x)
    entries[(flatten_pair(2, 1, 2), flatten_pair(1, 2, 2))] = (x - 1 / x) / (x * U - 1 / x)
    return RMatrix(n=1, kind=RKind.RANK1, dim=2, mat=SparseMat(4, 4, entries))


# -- eigenvalue derivation ---------------------------------------------------


def _numeric_matrix(mat: SparseMat, point: dict[str, Fraction], dim: int) -> list[list[Fraction]]:
    dense = [[Fraction(0)] * dim for _ in range(dim)]
    for (i, j), val in mat.eval_point(point).items():
        dense[i - 1][j - 1] = val
    return dense


def _mat_mul_dense(a, b):
    nn = len(a)
    out = [[Fraction(0)] * nn for _ in range(nn)]
    for i in range(nn):
        ai = a[i]
        for k in range(nn):
            x = ai[k]
            if not x:
                continue
            bk = b[k]
            row = out[i]
            for j in range(nn):
                if bk[j]:
                    row[j] += x * bk[j]
    return out


def _nullspace_coeffs(vectors: list[list[Fraction]]) -> list[Fraction] | None:
    """Coefficients c with sum c_k vectors[k] = 0 and c_last = 1, if any."""
    k = len(vectors)
    m = len(vectors[0])
    rows = [[vectors[j][i] for j in range(k)] for i in range(m)]
    # Solve rows . c = 0 with c_(k-1) = 1  ->  A c' = -last column.
    aug = [[row[j] for j in range(k - 1)] + [-row[k - 1]] for row in rows]
    ncols = k - 1
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(aug)) if aug[i][c]), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        pr = aug[r]
        inv = 1 / pr[c]
        aug[r] = [x * inv for x in pr]
        for i in range(len(aug)):
            if i != r and aug[i][c]:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
    sol = [Fraction(0)] * ncols
    for rr, c in enumerate(pivots):
        sol[c] = aug[rr][ncols]
    # Verify consistency (rows below pivots must be zero in the RHS).
    for i in range(len(aug)):
        lhs = sum(aug[i][j] * sol[j] for j in range(ncols)) if i >= len(pivots) else None
        if i >= len(pivots) and aug[i][ncols] != (lhs or Fraction(0)):
            return None
    return sol + [Fraction(1)]


def _minimal_polynomial(dense: list[list[Fraction]]) -> list[Fraction]:
    """Monic minimal polynomial coefficients [c_0, ..., c_(d-1), 1]."""
    nn = len(dense)
    ident = [[Fraction(int(i == j)) for j in range(nn)] for i in range(nn)]
    powers = [ident]
    flat = [sum(ident, [])]
    cur = ident
    for _ in range(nn):
        cur = _mat_mul_dense(cur, dense)
        powers.append(cur)
        flat.append(sum(cur, []))
        coeffs = _nullspace_coeffs(flat)
        if coeffs is not None:
            check = [Fraction(0)] * (nn * nn)
            for c, vec in zip(coeffs, flat):
                if c:
                    check = [x + c * y for x, y in zip(check, vec)]
            if all(x == 0 for x in check):
                return coeffs
    raise RuntimeError("minimal polynomial not found (should be impossible)")


def _rational_roots(coeffs: list[Fraction]) -> list[Fraction]:
    """All rational roots with multiplicity of a monic rational polynomial."""
    from sympy import Poly, Rational, symbols

    x = symbols("x")
    poly = Poly(sum(Rational(c.numerator, c.denominator) * x ** k for k, c in enumerate(coeffs)), x)
    roots = []
    for root, mult in poly.ground_roots().items():
        if not root.is_Rational:
            raise ValueError(f"non-rational eigenvalue {root}")
        roots.extend([Fraction(int(root.p), int(root.q))] * mult)
    if len(roots) != len(coeffs) - 1:
        raise ValueError("minimal polynomial does not split over Q at this point")
    return roots


def _fit_signed_monomial(value: Fraction, pv: Fraction, qv: Fraction) -> RatFunc:
    """Recognize value as +/- p^a q^b given values of p and q with known
    prime support (p = 2, q = 3 is used by the derivation)."""
    if pv != 2 or qv != 3:
        raise ValueError("fitting expects the base point p=2, q=3")
    sign = 1 if value > 0 else -1
    x = abs(value)
    num, den = x.numerator, x.denominator

    def strip(m: int, prime: int) -> tuple[int, int]:
        e = 0
        while m % prime == 0:
            m //= prime
            e += 1
        return m, e
    num, a_pos = strip(num, 2)
    num, b_pos = strip(num, 3)
    den, a_neg = strip(den, 2)
    den, b_neg = strip(den, 3)
    if num != 1 or den != 1:
        raise ValueError(f"{value} is not a signed monomial in p=2, q=3")
    mono = (rf.P ** (a_pos - a_neg)) * (rf.Q ** (b_pos - b_neg))
    return mono if sign > 0 else -mono


def derive_basic_r_eigenvalues(n: int) -> tuple[list[RatFunc], str]:
    """Eigenvalues of the braid form P R as signed monomials in p, q.

    The constant R itself is not annihilated by any cubic (its minimal
    polynomial has degree 7 already at n = 2); the three-eigenvalue
    spectrum that drives Yang-Baxterization belongs to the braid matrix
    P R.  Derivation: exact numeric minimal polynomial at the probe point
    (p, q) = (2, 3), rational root extraction, monomial fitting, then a
    symbolic check that the product of (P R - lambda_k) vanishes.  Returns
    the root list sorted by canonical text (a pair at n = 1, where two of
    the three eigenvalues coalesce; a triple for n >= 2).
    """
    from .tensor import perm_p

    rm = basic_r(n)
    braid = perm_p(rm.dim) @ rm.mat
    point = {"p": Fraction(2), "q": Fraction(3), "u": Fraction(0), "v": Fraction(0), "w": Fraction(0)}
    dense = _numeric_matrix(braid, point, rm.dim * rm.dim)
    coeffs = _minimal_polynomial(dense)
    roots = _rational_roots(coeffs)
    fitted = sorted(
        (_fit_signed_monomial(x, Fraction(2), Fraction(3)) for x in roots),
        key=lambda f: f.to_text(),
    )
    prod = SparseMat.identity(rm.dim * rm.dim)
    for lam in fitted:
        prod = prod @ (braid - SparseMat.identity(rm.dim * rm.dim).scale(lam))
    if not prod.is_zero:
        raise ValueError("fitted eigenvalues do not annihilate P R symbolically")
    note = ("exact minimal polynomial of the braid form P.R at (p,q)=(2,3); rational "
            "roots fitted as signed monomials in p,q; verified symbolically")
    return fitted, note
