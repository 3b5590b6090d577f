"""Independent exact verification and finite-field brute-force oracles.

Everything here re-derives its verdicts from first principles (rank-1
matricizations, pairings, determinant-free span ranks) so it can stand as
ground truth against the constructive module.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import prod

from .construct import CompletionError, product_basis_codim1
from .linalg import EchelonSpan
from .tensor import (ProductVector, Subspace, TensorShape, TensorVector,
                     iter_projective_vectors, kron, matricize,
                     projective_count)


class BudgetExceededError(RuntimeError):
    def __init__(self, message, required):
        super().__init__(f"{message} (required {required})")
        self.required = required


@dataclass
class VerificationReport:
    ok: bool
    failures: list
    rank_found: int


def factor_product(v: TensorVector):
    """Per-party factors of v, or None if v is not a product vector.

    The zero vector factors as all-zero factors by convention.  Otherwise the
    party-1 matricization must have rank 1; its pivot column is the party-1
    factor and the scaled pivot row carries the remaining parties, recursively.
    """
    f = v.field
    if v.is_zero:
        return [[f.zero] * d for d in v.shape.dims]
    return _factor_nonzero(v)


def _factor_nonzero(v):
    f = v.field
    dims = v.shape.dims
    if len(dims) == 1:
        return [list(v.coords)]
    m = matricize(v, 1)
    if m.rank() != 1:
        return None
    i0, j0 = next((i, j) for i in range(m.rows) for j in range(m.cols) if m.data[i][j])
    head = m.column(j0)
    pivot = m.data[i0][j0]
    tail = [x / pivot for x in m.row(i0)]
    rest = _factor_nonzero(TensorVector(TensorShape(dims[1:]), f, tail))
    return [head] + rest


def _embedded(v):
    return v.embedded if isinstance(v, ProductVector) else v


def verify_product_basis(candidate, L: Subspace) -> VerificationReport:
    """Check every vector factors, lies in L, and the family is a basis of L."""
    vectors = [_embedded(v) for v in candidate]
    span = EchelonSpan(L.field, L.shape.total)
    failures = []
    for idx, v in enumerate(vectors):
        if factor_product(v) is None:
            failures.append((idx, "not_product"))
        if not L.contains(v):
            failures.append((idx, "not_member"))
        if not span.add(v.coords):
            failures.append((idx, "dependent"))
    ok = not failures and span.rank == L.dim
    return VerificationReport(ok, failures, span.rank)


def _require_enumerable(L: Subspace, budget):
    f = L.field
    if not f.is_finite:
        raise ValueError("product-vector enumeration needs a finite field")
    count = prod(projective_count(f.order, d) for d in L.shape.dims)
    if count > budget:
        raise BudgetExceededError("enumeration budget exceeded", count)
    return count


def _iter_product_vectors_in(L: Subspace):
    f = L.field
    cogens = L.cogenerators()
    party_reps = [list(iter_projective_vectors(f, d)) for d in L.shape.dims]
    for combo in itertools.product(*party_reps):
        pv = kron(f, combo, L.shape)
        if all(not w.pair(pv.embedded) for w in cogens):
            yield pv


def enumerate_product_vectors(L: Subspace, budget=10_000_000):
    """One representative per scalar class of nonzero product vectors in L,
    lexicographic over normalized factor tuples."""
    _require_enumerable(L, budget)
    return list(_iter_product_vectors_in(L))


@dataclass
class BruteForceResult:
    has_basis: bool
    basis: list | None
    span_rank: int


def has_product_basis_bruteforce(L: Subspace, budget=10_000_000) -> BruteForceResult:
    """Decide product-basis existence by spanning all product vectors of L."""
    _require_enumerable(L, budget)
    span = EchelonSpan(L.field, L.shape.total)
    basis = []
    want = L.dim
    for pv in _iter_product_vectors_in(L):
        if span.add(pv.embedded.coords):
            basis.append(pv)
            if span.rank == want:
                break
    ok = span.rank == want  # the zero subspace is spanned by the empty basis
    return BruteForceResult(ok, basis if ok else None, span.rank)


@dataclass
class SweepRecord:
    index: int
    covector: TensorVector
    constructed_ok: bool
    oracle_true: bool


@dataclass
class SweepReport:
    shape: TensorShape
    scalar_field: object
    records: list

    @property
    def classes(self):
        return len(self.records)

    @property
    def constructed_ok(self):
        return sum(r.constructed_ok for r in self.records)

    @property
    def oracle_true(self):
        return sum(r.oracle_true for r in self.records)

    @property
    def discrepancies(self):
        return sum(r.constructed_ok != r.oracle_true for r in self.records)


def sweep_codim1(shape: TensorShape, f, budget=10_000_000, seed=0,
                 max_trials=None) -> SweepReport:
    """Run construction + oracle over every covector class of the shape.

    Exploratory by design: outside the guaranteed regime the construction may
    fail where the oracle still finds a basis, and any disagreement is
    surfaced as a discrepancy rather than asserted away.
    """
    if not f.is_finite:
        raise ValueError("sweep needs a finite field")
    count = projective_count(f.order, shape.total)
    if count > budget:
        raise BudgetExceededError("sweep budget exceeded", count)
    records = []
    for idx, coords in enumerate(iter_projective_vectors(f, shape.total)):
        w = TensorVector(shape, f, coords)
        L = Subspace.from_cogenerators(shape, f, [w])
        try:
            basis = product_basis_codim1(L, seed=seed * 1_000_003 + idx,
                                         max_trials=max_trials, force=True)
            constructed_ok = verify_product_basis(basis.vectors, L).ok
        except CompletionError:
            constructed_ok = False
        oracle = has_product_basis_bruteforce(L, budget)
        records.append(SweepRecord(idx, w, constructed_ok, oracle.has_basis))
    return SweepReport(shape, f, records)


def format_sweep_report(report: SweepReport) -> str:
    lines = []
    for r in report.records:
        cov = " ".join(report.scalar_field.format(x) for x in r.covector.coords)
        con = "ok" if r.constructed_ok else "fail"
        orc = "true" if r.oracle_true else "false"
        lines.append(f"{r.index}; {cov}; constructed:{con}; oracle:{orc}")
    lines.append(f"classes={report.classes} constructed_ok={report.constructed_ok} "
                 f"oracle_true={report.oracle_true} discrepancies={report.discrepancies}")
    return "\n".join(lines) + "\n"
