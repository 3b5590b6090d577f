"""Constructors for product vectors spanning prescribed subspaces.

Three levels: completing independent tuples by product vectors (randomized
greedy avoidance of the spanned subspaces, with an exhaustive projective
fallback over finite fields), the recursive codimension-r product tuple, and
the codimension-1 product basis, whose bipartite case is fully deterministic
via the rank normal form and needs no field-size hypothesis.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field as dc_field
from math import prod

from .linalg import EchelonSpan, Matrix
from .tensor import (Subspace, TensorShape, TensorVector, basis_tensor,
                     iter_projective_vectors, kron, matricize,
                     projective_count, standard_basis_vector, tensor_product)


class CompletionError(RuntimeError):
    """No completing product vector found within the trial budget."""

    def __init__(self, message, trials):
        super().__init__(f"{message} (after {trials} trials)")
        self.trials = trials


class FieldTooSmallError(ValueError):
    """Finite field below the guaranteed regime and no override given."""


DEFAULT_FALLBACK_BUDGET = 10_000_000


@dataclass
class CompletionRequest:
    """m independent (d~-r)-tuples to be completed by r shared product vectors."""

    shape: TensorShape
    scalar_field: object
    tuples: list
    r: int
    seed: int = 0
    max_trials: int | None = None

    def __post_init__(self):
        if self.r < 1 or self.r > self.shape.total:
            raise ValueError(f"need 1 <= r <= {self.shape.total}, got {self.r}")
        if not self.tuples:
            raise ValueError("need at least one tuple")
        want = self.shape.total - self.r
        for k, tup in enumerate(self.tuples):
            if len(tup) != want:
                raise ValueError(f"tuple {k} has {len(tup)} vectors, expected {want}")
            for v in tup:
                if v.shape != self.shape or v.field != self.scalar_field:
                    raise ValueError("shape/field mismatch in tuple")
            if tup and Matrix(self.scalar_field, [v.coords for v in tup]).rank() != want:
                raise ValueError(f"tuple {k} is linearly dependent")
        if self.max_trials is None:
            m, n = len(self.tuples), self.shape.parties
            self.max_trials = 64 * m * self.r * n

    @property
    def m(self):
        return len(self.tuples)


@dataclass
class ProductTuple:
    """Linearly independent product vectors; independence checked on creation."""

    vectors: list
    claimed_rank: int = dc_field(init=False)

    def __post_init__(self):
        self.vectors = list(self.vectors)
        self.claimed_rank = len(self.vectors)
        if self.vectors:
            rows = [pv.embedded.coords for pv in self.vectors]
            f = self.vectors[0].embedded.field
            if Matrix(f, rows).rank() != self.claimed_rank:
                raise ValueError("product tuple is linearly dependent")

    def __iter__(self):
        return iter(self.vectors)

    def __len__(self):
        return len(self.vectors)


def _random_product_vector(shape, f, rng, bound):
    factors = [[f.sample(rng, bound) for _ in range(d)] for d in shape.dims]
    return kron(f, factors, shape)


def _iter_product_reps(shape, f):
    party_reps = [list(iter_projective_vectors(f, d)) for d in shape.dims]
    for combo in itertools.product(*party_reps):
        yield kron(f, combo, shape)


def complete_to_bases(req: CompletionRequest, rng=None,
                      fallback_budget=DEFAULT_FALLBACK_BUDGET):
    """Product vectors v_1..v_r extending every tuple to a basis.

    Greedy: v_i must leave every tuple's running span (an exact rank-growth
    test), so each step only ever searches for a single product vector outside
    m proper subspaces.  Over Q a sampled candidate fails with probability
    < 1/(2 d~) by Schwartz-Zippel with the default bound; over a finite field
    the projective fallback makes the per-step answer definitive.
    """
    if rng is None:
        rng = random.Random(req.seed)
    f = req.scalar_field
    shape = req.shape
    bound = 2 * req.m * req.r * shape.parties * shape.total
    spans = []
    for tup in req.tuples:
        span = EchelonSpan(f, shape.total)
        for v in tup:
            span.add(v.coords)
        spans.append(span)
    chosen = []
    trials = 0
    for step in range(req.r):
        found = None
        while trials < req.max_trials:
            trials += 1
            cand = _random_product_vector(shape, f, rng, bound)
            if cand.embedded.is_zero:
                continue
            if all(not s.contains(cand.embedded.coords) for s in spans):
                found = cand
                break
        if found is None and f.is_finite:
            count = prod(projective_count(f.order, d) for d in shape.dims)
            if count <= fallback_budget:
                for cand in _iter_product_reps(shape, f):
                    if all(not s.contains(cand.embedded.coords) for s in spans):
                        found = cand
                        break
        if found is None:
            raise CompletionError(
                f"completion not found at vector {step + 1} of {req.r}", trials)
        for s in spans:
            if not s.add(found.embedded.coords):
                raise AssertionError("accepted candidate did not grow a span")
        chosen.append(found)
    return chosen


def canonical_covector(shape: TensorShape, f, r: int) -> TensorVector:
    """sum_{i<r} e_i x e_i on a bipartite shape; its matricization is B_r."""
    if shape.parties != 2:
        raise ValueError("canonical covector is bipartite")
    if not 1 <= r <= min(shape.dims):
        raise ValueError(f"need 1 <= r <= {min(shape.dims)}, got {r}")
    out = basis_tensor(shape, f, (0, 0))
    for i in range(1, r):
        out = out + basis_tensor(shape, f, (i, i))
    return out


def bipartite_codim1_basis(w: TensorVector) -> ProductTuple:
    """Product basis of the hyperplane orthogonal to w, any field.

    Matricize w, factor A = P^T B_r Q, emit the canonical family orthogonal
    to the canonical covector, then pull each factor pair back through
    (P^-1, Q^-1).
    """
    if w.shape.parties != 2:
        raise ValueError("expected a bipartite vector")
    if w.is_zero:
        raise ValueError("not codimension 1: w = 0")
    f = w.field
    d1, d2 = w.shape.dims
    P, Q, r = matricize(w, 1).rank_normal_form()
    pinv, qinv = P.inverse(), Q.inverse()
    pairs = [(standard_basis_vector(f, d1, i), standard_basis_vector(f, d2, j))
             for i in range(d1) for j in range(d2)
             if not (i == j and i < r)]
    u0 = [f.one if i < r else f.zero for i in range(d2)]
    for k in range(r - 1):
        diff = [f.zero] * d1
        diff[k] = f.one
        diff[k + 1] = -f.one
        pairs.append((diff, u0))
    return ProductTuple([kron(f, (pinv.matvec(a), qinv.matvec(b)), w.shape)
                         for a, b in pairs])


def _kernel_vectors(f, rows, width, count):
    """First `count` kernel basis vectors of the stacked covectors."""
    ker = Matrix(f, rows).kernel()
    return ker[:count]


def _tuple_rec(shape, f, covs, r, rng, max_trials, bipartite_tail,
               fallback_budget):
    """The induction: peel party 1, complete across the d_1 slices, fill in
    the party-1 kernels.  Returns d~ - r^n product vectors orthogonal to all
    covectors (which may be dependent or zero at inner levels)."""
    dims = shape.dims
    n = len(dims)
    if n == 1:
        ker = _kernel_vectors(f, [w.coords for w in covs], dims[0], dims[0] - r)
        return [kron(f, [v], shape) for v in ker]
    if n == 2 and r == 1 and bipartite_tail:
        w = covs[0]
        if w.is_zero:
            # full space: any d1*d2 - 1 standard product tensors do
            multis = [shape.unravel(i) for i in range(shape.total - 1)]
            return [kron(f, [standard_basis_vector(f, dims[0], i),
                             standard_basis_vector(f, dims[1], j)], shape)
                    for i, j in multis]
        return list(bipartite_codim1_basis(w))
    d1 = dims[0]
    rest = TensorShape(dims[1:])
    rc = r ** (n - 1)
    slices = [[w.slice_party(0, k) for k in range(d1)] for w in covs]
    tuples = []
    for k in range(d1):
        covs_k = [slices[i][k] for i in range(len(covs))]
        tuples.append(_tuple_rec(rest, f, covs_k, r, rng, max_trials,
                                 bipartite_tail, fallback_budget))
    out = []
    for k in range(d1):
        ek = standard_basis_vector(f, d1, k)
        out += [kron(f, [ek, *pv.factors], shape) for pv in tuples[k]]
    if d1 > r:
        req = CompletionRequest(rest, f,
                                [[pv.embedded for pv in tuples[k]] for k in range(d1)],
                                rc, max_trials=max_trials)
        shared = complete_to_bases(req, rng=rng, fallback_budget=fallback_budget)
        for v in shared:
            rows = [[slices[i][k].pair(v.embedded) for k in range(d1)]
                    for i in range(len(covs))]
            for t in _kernel_vectors(f, rows, d1, d1 - r):
                out.append(kron(f, [t, *v.factors], shape))
    return out


def _sorted_third_largest(dims):
    return sorted(dims)[-3]


def product_tuple(L: Subspace, seed=0, max_trials=None, force=False,
                  fallback_budget=DEFAULT_FALLBACK_BUDGET) -> ProductTuple:
    """d~ - r^n independent product vectors inside a codimension-r subspace."""
    shape, f = L.shape, L.field
    covs = L.cogenerators()
    r = len(covs)
    if not 1 <= r <= min(shape.dims):
        raise ValueError(f"need 1 <= r <= min(dims) = {min(shape.dims)}, got {r}")
    if f.is_finite and shape.parties >= 3 and not force:
        bound = _sorted_third_largest(shape.dims)
        if f.order <= bound:
            raise FieldTooSmallError(
                f"field too small (no guarantee): need q > {bound}, got q = {f.order}")
    rng = random.Random(seed)
    vectors = _tuple_rec(shape, f, list(covs), r, rng, max_trials,
                         bipartite_tail=False, fallback_budget=fallback_budget)
    return ProductTuple(vectors)


def product_basis_codim1(L: Subspace, seed=0, max_trials=None, force=False,
                         fallback_budget=DEFAULT_FALLBACK_BUDGET) -> ProductTuple:
    """A product basis of a hyperplane.

    Bipartite shapes are handled by the deterministic rank-normal-form
    construction (valid over every field); with three or more parties the
    parties are peeled smallest-first, which keeps every completion step
    inside the guaranteed regime whenever q exceeds the third-largest
    dimension.
    """
    shape, f = L.shape, L.field
    covs = L.cogenerators()
    if len(covs) != 1:
        raise ValueError(f"expected exactly one cogenerator, got {len(covs)}")
    w = covs[0]
    n = shape.parties
    if n == 1:
        ker = _kernel_vectors(f, [w.coords], shape.dims[0], shape.dims[0] - 1)
        return ProductTuple([kron(f, [v], shape) for v in ker])
    if n == 2:
        return bipartite_codim1_basis(w)
    if f.is_finite and not force:
        bound = _sorted_third_largest(shape.dims)
        if f.order <= bound:
            raise FieldTooSmallError(
                f"field too small (no guarantee): need q > {bound}, got q = {f.order}")
    rng = random.Random(seed)
    perm = sorted(range(n), key=lambda j: shape.dims[j])
    sorted_shape = TensorShape(shape.dims[j] for j in perm)
    w_sorted = w.permute_parties(perm)
    vectors = _tuple_rec(sorted_shape, f, [w_sorted], 1, rng, max_trials,
                         bipartite_tail=True, fallback_budget=fallback_budget)
    restored = []
    for pv in vectors:
        factors = [None] * n
        for j, p in enumerate(perm):
            factors[p] = pv.factors[j]
        restored.append(kron(f, factors, shape))
    return ProductTuple(restored)


def witness_no_product_basis(shape: TensorShape, f) -> Subspace:
    """The (d~-2)-dimensional subspace with no product basis, generator form.

    Bipartite: span of e_1 x e_1 + e_2 x e_2 and the standard tensors other
    than (1,1), (2,1), (2,2).  More parties: that bipartite block sits on the
    slice where parties 3..n all read e_1, and the full bipartite space is
    tensored onto every other standard tensor of parties 3..n.
    """
    if shape.parties < 2:
        raise ValueError("witness requires at least two parties")
    d1, d2 = shape.dims[0], shape.dims[1]
    bip = TensorShape((d1, d2))
    bip_gens = [basis_tensor(bip, f, (0, 0)) + basis_tensor(bip, f, (1, 1))]
    bip_gens += [basis_tensor(bip, f, (i, j))
                 for i in range(d1) for j in range(d2)
                 if (i, j) not in ((0, 0), (1, 0), (1, 1))]
    if shape.parties == 2:
        return Subspace.from_generators(shape, f, bip_gens)
    rest = TensorShape(shape.dims[2:])
    u0 = basis_tensor(rest, f, (0,) * rest.parties)
    gens = [tensor_product(g, u0) for g in bip_gens]
    for i in range(d1):
        for j in range(d2):
            eij = basis_tensor(bip, f, (i, j))
            for flat in range(1, rest.total):
                gens.append(tensor_product(eij, basis_tensor(rest, f, rest.unravel(flat))))
    return Subspace.from_generators(shape, f, gens)


def random_codim_subspace(shape: TensorShape, f, r: int, rng) -> Subspace:
    """r random independent cogenerators; rejection-sampled, deterministic in rng."""
    if not 1 <= r <= shape.total:
        raise ValueError(f"need 1 <= r <= {shape.total}, got {r}")
    bound = 2 * max(r, 1) * shape.total
    span = EchelonSpan(f, shape.total)
    covs = []
    attempts = 0
    while len(covs) < r:
        attempts += 1
        if attempts > 256 * r:
            raise RuntimeError("failed to sample independent cogenerators")
        coords = [f.sample(rng, bound) for _ in range(shape.total)]
        if span.add(coords):
            covs.append(TensorVector(shape, f, coords))
    return Subspace.from_cogenerators(shape, f, covs)
