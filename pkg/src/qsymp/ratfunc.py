"""Exact arithmetic in the rational-function field Q(p, q, u, v, w).

Every scalar in this package lives in one fixed field: rational functions
over the integers in five variables

    p, q        deformation parameters (p = r^(1/2), q = s^(1/2), so that
                r = p^2, s = q^2 and (rs)^(1/2) = p*q are all polynomial)
    u, v, w     spectral variables

Working with the square roots keeps every half-integer power of r and s
that appears in the R-matrix coefficients inside the polynomial ring; no
radicals are ever needed.

Values are immutable and kept in canonical form: numerator and denominator
are coprime integer polynomials and the denominator has positive leading
coefficient under graded lexicographic order with p < q < u < v < w
(ties compared from w down).  Two values are equal iff their canonical
forms coincide, so dictionary keys and golden-file text are stable.

The textual form used in golden files prints monomial factors in the
order w, v, u, q, p with ``^`` for powers, e.g. ``(u - 1)/(u*p^2 - q^2)``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from sympy.polys.domains import ZZ
from sympy.polys.fields import field
from sympy.polys.orderings import grlex

__all__ = [
    "RatFunc",
    "Params",
    "DivisionByZeroError",
    "PoleAtPointError",
    "HigherOrderPoleError",
    "rat",
    "rat_fraction",
    "residue_at_diagonal",
    "monomial_sqrt",
    "sample_point",
    "ZERO",
    "ONE",
    "P",
    "Q",
    "U",
    "V",
    "W",
    "R",
    "S",
    "VAR_NAMES",
]

# Generators are declared most-significant first so that sympy's grlex
# tie-break realizes "p < q < u < v < w".
_FIELD, _W, _V, _U, _Q, _P = field("w,v,u,q,p", ZZ, grlex)

# Internal generator order (matches exponent-tuple positions).
_GEN_ORDER = ("w", "v", "u", "q", "p")
_GEN_INDEX = {name: k for k, name in enumerate(_GEN_ORDER)}
_GENS = {"w": _W, "v": _V, "u": _U, "q": _Q, "p": _P}
_RING = _FIELD.ring

# Public variable universe, in the documented (ascending) order.
VAR_NAMES = ("p", "q", "u", "v", "w")


class DivisionByZeroError(ZeroDivisionError):
    """Division of a RatFunc by the zero function."""


class PoleAtPointError(ArithmeticError):
    """Evaluation point hits a zero of the denominator."""


class HigherOrderPoleError(ArithmeticError):
    """Pole order along u = v exceeds one; the residue is undefined here."""


def _term_sort_key(term):
    exps, _ = term
    return (sum(exps), exps)


def _fmt_coeff_monomial(coeff, exps, lead: bool) -> str:
    parts = []
    c = int(coeff)
    neg = c < 0
    c = abs(c)
    factors = []
    for name, e in zip(_GEN_ORDER, exps):
        if e == 0:
            continue
        factors.append(name if e == 1 else f"{name}^{e}")
    if not factors:
        factors.append(str(c))
    elif c != 1:
        factors.insert(0, str(c))
    body = "*".join(factors)
    if lead:
        parts.append("-" + body if neg else body)
    else:
        parts.append((" - " if neg else " + ") + body)
    return "".join(parts)


def _fmt_poly(poly) -> str:
    terms = sorted(poly.terms(), key=_term_sort_key, reverse=True)
    if not terms:
        return "0"
    out = []
    for k, (exps, coeff) in enumerate(terms):
        out.append(_fmt_coeff_monomial(coeff, exps, lead=(k == 0)))
    return "".join(out)


def _eval_poly(poly, values: dict[str, Fraction]) -> Fraction:
    """Evaluate an integer polynomial at rational values, exactly."""
    pow_cache: dict[tuple[int, int], Fraction] = {}
    total = Fraction(0)
    for exps, coeff in poly.terms():
        term = Fraction(int(coeff))
        for k, e in enumerate(exps):
            if e == 0:
                continue
            key = (k, e)
            pw = pow_cache.get(key)
            if pw is None:
                pw = values[_GEN_ORDER[k]] ** e
                pow_cache[key] = pw
            term *= pw
        total += term
    return total


def _compose_poly(poly, values: dict[str, "RatFunc"]):
    """Evaluate an integer polynomial at RatFunc points (field composition)."""
    pow_cache: dict[tuple[int, int], object] = {}
    total = _FIELD.zero
    for exps, coeff in poly.terms():
        term = _FIELD.ground_new(coeff)
        for k, e in enumerate(exps):
            if e == 0:
                continue
            key = (k, e)
            pw = pow_cache.get(key)
            if pw is None:
                pw = values[_GEN_ORDER[k]].fe ** e
                pow_cache[key] = pw
            term = term * pw
        total = total + term
    return total


class RatFunc:
    """Immutable element of Q(p, q, u, v, w) in canonical form."""

    __slots__ = ("fe",)

    def __init__(self, fe):
        object.__setattr__(self, "fe", fe)

    # -- construction -------------------------------------------------

    @staticmethod
    def from_int(n: int) -> "RatFunc":
        return RatFunc(_FIELD.ground_new(ZZ(n)))

    @staticmethod
    def from_fraction(x: Fraction | int) -> "RatFunc":
        x = Fraction(x)
        return RatFunc(_FIELD.ground_new(ZZ(x.numerator)) / _FIELD.ground_new(ZZ(x.denominator)))

    @staticmethod
    def gen(name: str) -> "RatFunc":
        return RatFunc(_GENS[name])

    # -- predicates ---------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.fe

    def __bool__(self) -> bool:
        return bool(self.fe)

    def is_constant(self) -> bool:
        return self.fe.numer.is_ground and self.fe.denom.is_ground

    def to_fraction(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"not a constant: {self}")
        num = self.fe.numer.LC if self.fe.numer else ZZ(0)
        return Fraction(int(num), int(self.fe.denom.LC))

    # -- arithmetic ---------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, int):
            return RatFunc.from_int(other)
        if isinstance(other, Fraction):
            return RatFunc.from_fraction(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return RatFunc(self.fe + other.fe)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return RatFunc(self.fe - other.fe)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return RatFunc(other.fe - self.fe)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return RatFunc(self.fe * other.fe)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not other.fe:
            raise DivisionByZeroError("division by the zero rational function")
        return RatFunc(self.fe / other.fe)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other.__truediv__(self)

    def __neg__(self):
        return RatFunc(-self.fe)

    def __pow__(self, n: int):
        if n == 0:
            return ONE
        if n < 0 and not self.fe:
            raise DivisionByZeroError("negative power of zero")
        return RatFunc(self.fe ** n)

    def inv(self) -> "RatFunc":
        return ONE / self

    # -- equality / hashing --------------------------------------------

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.fe == other.fe

    def __ne__(self, other):
        eq = self.__eq__(other)
        return NotImplemented if eq is NotImplemented else not eq

    def __hash__(self):
        num = tuple(sorted(self.fe.numer.terms(), key=_term_sort_key))
        den = tuple(sorted(self.fe.denom.terms(), key=_term_sort_key))
        return hash((num, den))

    # -- evaluation / substitution --------------------------------------

    def eval(self, point: Mapping[str, Fraction]) -> Fraction:
        """Exact value at a rational point; raises PoleAtPointError on a pole."""
        vals = {k: Fraction(x) for k, x in point.items()}
        for name in _GEN_ORDER:
            vals.setdefault(name, Fraction(0))
        den = _eval_poly(self.fe.denom, vals)
        if den == 0:
            raise PoleAtPointError(f"denominator vanishes at {dict(point)}")
        return _eval_poly(self.fe.numer, vals) / den

    def subs(self, mapping: Mapping[str, "RatFunc"]) -> "RatFunc":
        """Substitute RatFunc values for variables (field homomorphism)."""
        vals = {name: RatFunc.gen(name) for name in _GEN_ORDER}
        for k, x in mapping.items():
            if k not in _GEN_INDEX:
                raise KeyError(f"unknown variable {k!r}")
            vals[k] = rat(x)
        num = _compose_poly(self.fe.numer, vals)
        den = _compose_poly(self.fe.denom, vals)
        if not den:
            raise DivisionByZeroError(f"substitution makes the denominator vanish: {self}")
        return RatFunc(num / den)

    def variables(self) -> set[str]:
        used = set()
        for poly in (self.fe.numer, self.fe.denom):
            for exps, _ in poly.terms():
                for k, e in enumerate(exps):
                    if e:
                        used.add(_GEN_ORDER[k])
        return used

    # -- text ------------------------------------------------------------

    def to_text(self) -> str:
        num = _fmt_poly(self.fe.numer)
        if self.fe.denom == _RING.one:
            return num
        den = _fmt_poly(self.fe.denom)
        num_s = num if ("+" not in num and " - " not in num) else f"({num})"
        den_s = den if ("+" not in den and " - " not in den and "*" not in den) else f"({den})"
        return f"{num_s}/{den_s}"

    __str__ = to_text

    def __repr__(self):
        return f"RatFunc({self.to_text()})"


def rat(x) -> RatFunc:
    """Coerce an int, Fraction, or RatFunc into the field."""
    if isinstance(x, RatFunc):
        return x
    if isinstance(x, int):
        return RatFunc.from_int(x)
    if isinstance(x, Fraction):
        return RatFunc.from_fraction(x)
    raise TypeError(f"cannot coerce {type(x).__name__} to RatFunc")


def rat_fraction(num: int, den: int) -> RatFunc:
    return RatFunc.from_fraction(Fraction(num, den))


ZERO = RatFunc(_FIELD.zero)
ONE = RatFunc(_FIELD.one)
P = RatFunc(_P)
Q = RatFunc(_Q)
U = RatFunc(_U)
V = RatFunc(_V)
W = RatFunc(_W)
R = P * P
S = Q * Q


def _poly_sub_u_to_v(poly):
    """Move every u exponent onto v (the substitution u -> v), exactly."""
    iu, iv = _GEN_INDEX["u"], _GEN_INDEX["v"]
    out = _RING.zero
    for exps, coeff in poly.terms():
        e = list(exps)
        e[iv] += e[iu]
        e[iu] = 0
        out += _RING.term_new(tuple(e), coeff)
    return out


def _poly_divide_by_u_minus_v(poly):
    """Exact quotient poly / (u - v), assuming poly vanishes at u = v.

    Uses (u^k - v^k)/(u - v) = sum_j u^j v^(k-1-j) termwise against the
    reference value poly(u=v), so no polynomial division is needed.
    """
    iu, iv = _GEN_INDEX["u"], _GEN_INDEX["v"]
    out = _RING.zero
    for exps, coeff in poly.terms():
        k = exps[iu]
        for j in range(k):
            e = list(exps)
            e[iu] = j
            e[iv] = exps[iv] + (k - 1 - j)
            out += _RING.term_new(tuple(e), coeff)
    return out


def residue_at_diagonal(f: RatFunc) -> RatFunc:
    """Residue of f at u = v, treating f as a function of u.

    Requires the pole along u = v to be at most simple; regular functions
    give zero.  The result is a rational function of v and the parameters.
    """
    num, den = f.fe.numer, f.fe.denom
    den_at = _poly_sub_u_to_v(den)
    if den_at:
        return ZERO
    den1 = _poly_divide_by_u_minus_v(den)
    den1_at = _poly_sub_u_to_v(den1)
    if not den1_at:
        raise HigherOrderPoleError(f"pole of order >= 2 along u = v in {f}")
    num_at = _poly_sub_u_to_v(num)
    return RatFunc((_FIELD.one * num_at) / (_FIELD.one * den1_at))


def monomial_sqrt(f: RatFunc) -> RatFunc:
    """Square root of a monomial c * p^a * q^b / (p^c * q^d) with even data.

    Used for the entrywise square root of the diagonal Cartan images,
    which in the vector representation always have perfect-square entries.
    The positive branch is returned.
    """

    def half_term(poly):
        terms = poly.terms()
        if len(terms) != 1:
            raise ValueError(f"not a monomial: {f}")
        exps, coeff = terms[0]
        c = int(coeff)
        root = None
        if c >= 0:
            r = int(round(c ** 0.5))
            for cand in (r - 1, r, r + 1):
                if cand >= 0 and cand * cand == c:
                    root = cand
        if root is None:
            raise ValueError(f"coefficient {c} is not a perfect square in {f}")
        if any(e % 2 for e in exps):
            raise ValueError(f"odd exponent in {f}; square root leaves the field")
        half = tuple(e // 2 for e in exps)
        return _RING.term_new(half, ZZ(root))

    return RatFunc((_FIELD.one * half_term(f.fe.numer)) / (_FIELD.one * half_term(f.fe.denom)))


@dataclass(frozen=True)
class Params:
    """Root-length data for the affine symplectic series.

    d = (d_0, ..., d_n) = (2, 1, ..., 1, 2); the index-i deformation
    parameters are r_i = r^(d_i) and s_i = s^(d_i).
    """

    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("rank must be positive")

    @property
    def d(self) -> tuple[int, ...]:
        if self.n == 1:
            return (2, 2)
        return (2,) + (1,) * (self.n - 1) + (2,)

    def r_i(self, i: int) -> RatFunc:
        return R ** self.d[i]

    def s_i(self, i: int) -> RatFunc:
        return S ** self.d[i]


def sample_point(
    rng: random.Random,
    reject: Iterable[RatFunc] = (),
    lo: int = 2,
    hi: int = 97,
    max_tries: int = 200,
) -> dict[str, Fraction]:
    """Sample an admissible rational point for randomized identity testing.

    Each coordinate is a positive rational with numerator and denominator
    in [lo, hi].  Samples with r = s, rs = 1, or a vanishing value of any
    rejection function are discarded and redrawn.  (r = -s cannot occur
    for nonzero rational squares.)
    """
    rejectors = list(reject)
    for _ in range(max_tries):
        point = {
            name: Fraction(rng.randint(lo, hi), rng.randint(lo, hi))
            for name in VAR_NAMES
        }
        pv, qv = point["p"], point["q"]
        if pv == qv:
            continue
        if pv * pv * qv * qv == 1:
            continue
        try:
            if any(g.eval(point) == 0 for g in rejectors):
                continue
        except PoleAtPointError:
            continue
        return point
    raise RuntimeError("could not sample an admissible point")
