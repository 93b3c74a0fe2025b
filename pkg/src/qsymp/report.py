"""Shared identity-checking engine and the report schema.

An Identity is a pair of sides, each a sum of terms  coeff * M_1 * ... * M_k
with RatFunc coefficients and sparse-matrix factors.  The engine compares
the two sides either exactly (canonical-form equality of every entry) or in
randomized mode, where both sides' factors are evaluated at shared random
rational points and combined numerically (Schwartz-Zippel identity testing:
an exact-mode PASS implies a randomized PASS at every admissible point).

Every suite in the package reports through the same record shape:
{suite, relation id, status PASS/FAIL/SKIPPED, witness on failure}.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .ratfunc import PoleAtPointError, RatFunc, sample_point
from .tensor import SparseMat

__all__ = [
    "Mode",
    "Term",
    "Identity",
    "IdentityResult",
    "CheckReport",
    "run_identities",
    "eval_side_exact",
    "eval_side_at_point",
    "first_difference",
]

PASS = "PASS"
FAIL = "FAIL"
SKIPPED = "SKIPPED"


@dataclass(frozen=True)
class Mode:
    """Checking mode: exact symbolic, or randomized with seed and samples."""

    kind: str
    seed: int = 0
    samples: int = 0

    @staticmethod
    def exact() -> "Mode":
        return Mode("exact")

    @staticmethod
    def randomized(seed: int, samples: int) -> "Mode":
        if samples < 1:
            raise ValueError("randomized mode needs samples >= 1")
        return Mode("random", seed=seed, samples=samples)

    def describe(self) -> str:
        if self.kind == "exact":
            return "exact"
        return f"randomized(seed={self.seed}, samples={self.samples})"


@dataclass(frozen=True)
class Term:
    """One summand: coeff * factors[0] * factors[1] * ..."""

    coeff: RatFunc
    factors: tuple[SparseMat, ...]

    def __init__(self, coeff: RatFunc, factors: Sequence[SparseMat]):
        object.__setattr__(self, "coeff", coeff)
        object.__setattr__(self, "factors", tuple(factors))


@dataclass
class Identity:
    id: str
    lhs: list[Term]
    rhs: list[Term]
    skip_reason: str | None = None


@dataclass
class IdentityResult:
    id: str
    status: str
    witness: str | None = None


@dataclass
class CheckReport:
    suite: str
    mode: str
    results: list[IdentityResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.status != FAIL for r in self.results)

    @property
    def counts(self) -> dict[str, int]:
        out = {PASS: 0, FAIL: 0, SKIPPED: 0}
        for r in self.results:
            out[r.status] += 1
        return out

    def failures(self) -> list[IdentityResult]:
        return [r for r in self.results if r.status == FAIL]

    def extend(self, other: "CheckReport") -> None:
        self.results.extend(other.results)

    def to_text(self) -> str:
        lines = [f"suite {self.suite} [{self.mode}]"]
        for r in self.results:
            line = f"  {r.status:7s} {r.id}"
            if r.witness:
                line += f"  -- {r.witness}"
            lines.append(line)
        c = self.counts
        lines.append(f"  total: {c[PASS]} pass, {c[FAIL]} fail, {c[SKIPPED]} skipped")
        return "\n".join(lines)

    def to_json_dict(self) -> dict:
        return {
            "name": self.suite,
            "mode": self.mode,
            "identities": [
                {"id": r.id, "status": r.status}
                | ({"witness": r.witness} if r.witness else {})
                for r in self.results
            ],
        }

    def __str__(self):
        return self.to_text()


def _shape_of(terms: Iterable[Term]) -> tuple[int, int] | None:
    for t in terms:
        if t.factors:
            rows = t.factors[0].nrows
            cols = t.factors[-1].ncols
            return rows, cols
    return None


def eval_side_exact(terms: Sequence[Term]) -> SparseMat:
    shape = _shape_of(terms)
    if shape is None:
        return SparseMat(0, 0)
    acc = SparseMat.zero(*shape)
    for t in terms:
        prod: SparseMat | None = None
        for f in t.factors:
            prod = f if prod is None else prod @ f
        assert prod is not None
        acc = acc + prod.scale(t.coeff)
    return acc


def _numeric_matmul(a: dict, b: dict, zero=Fraction(0)) -> dict:
    rows_of_b: dict[int, list] = {}
    for (k, j), val in b.items():
        rows_of_b.setdefault(k, []).append((j, val))
    acc: dict = {}
    for (i, k), x in a.items():
        for j, y in rows_of_b.get(k, ()):
            key = (i, j)
            cur = acc.get(key, zero) + x * y
            if cur:
                acc[key] = cur
            elif key in acc:
                del acc[key]
    return acc


def eval_side_at_point(terms: Sequence[Term], point: dict[str, Fraction]) -> dict:
    acc: dict = {}
    for t in terms:
        c = t.coeff.eval(point)
        if not c:
            continue
        prod: dict | None = None
        for f in t.factors:
            cur = f.eval_point(point)
            prod = cur if prod is None else _numeric_matmul(prod, cur)
        assert prod is not None
        for key, val in prod.items():
            new = acc.get(key, Fraction(0)) + c * val
            if new:
                acc[key] = new
            elif key in acc:
                del acc[key]
    return acc


def first_difference(a: dict, b: dict) -> tuple[tuple[int, int], object, object] | None:
    """First row-major entry where the two entry maps differ."""
    keys = sorted(set(a) | set(b))
    for key in keys:
        x = a.get(key)
        y = b.get(key)
        if x != y:
            return key, x, y
    return None


def _check_exact(ident: Identity) -> IdentityResult:
    lhs = eval_side_exact(ident.lhs)
    rhs = eval_side_exact(ident.rhs)
    if lhs.shape != rhs.shape and ident.rhs and ident.lhs:
        return IdentityResult(ident.id, FAIL, f"shape mismatch {lhs.shape} vs {rhs.shape}")
    diff = first_difference(lhs.entries, rhs.entries)
    if diff is None:
        return IdentityResult(ident.id, PASS)
    (i, j), x, y = diff
    return IdentityResult(
        ident.id, FAIL,
        f"entry ({i}, {j}): lhs = {x if x is not None else 0}, rhs = {y if y is not None else 0}",
    )


def _check_randomized(ident: Identity, rng: random.Random, samples: int) -> IdentityResult:
    for s in range(samples):
        for _ in range(50):
            point = sample_point(rng)
            try:
                lhs = eval_side_at_point(ident.lhs, point)
                rhs = eval_side_at_point(ident.rhs, point)
            except PoleAtPointError:
                continue
            break
        else:
            return IdentityResult(ident.id, FAIL, "no admissible sample point found")
        diff = first_difference(lhs, rhs)
        if diff is not None:
            (i, j), x, y = diff
            pt = {k: str(v) for k, v in sorted(point.items())}
            return IdentityResult(
                ident.id, FAIL,
                f"sample {s}: entry ({i}, {j}): lhs = {x or 0}, rhs = {y or 0} at {pt}",
            )
    return IdentityResult(ident.id, PASS)


def run_identities(suite: str, identities: Sequence[Identity], mode: Mode) -> CheckReport:
    report = CheckReport(suite=suite, mode=mode.describe())
    rng = random.Random(mode.seed) if mode.kind == "random" else None
    for ident in identities:
        if ident.skip_reason is not None:
            report.results.append(IdentityResult(ident.id, SKIPPED, ident.skip_reason))
            continue
        if mode.kind == "exact":
            report.results.append(_check_exact(ident))
        else:
            report.results.append(_check_randomized(ident, rng, mode.samples))
    return report
