"""Exact certificates for the separability counterexample and the
distinguishability lower bound.

All objects live over the rationals as real symmetric matrices: the only
irrational in the source construction is the 1/sqrt(3) normalization inside a
unit vector, and its rank-one projector has exactly rational entries.
Non-separability is certified through the partial-transpose necessary
condition with an exact inertia computation (Sylvester congruence with
1x1/2x2 pivots).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .fields import QQ, ParseError, parse_field
from .linalg import Matrix
from .tensor import (Subspace, TensorShape, kron, parse_shape,
                     standard_basis_vector)


class SymMatrix:
    """Symmetric rational matrix annotated with the party structure it acts on."""

    __slots__ = ("shape", "mat")

    def __init__(self, shape: TensorShape, rows):
        mat = Matrix(QQ, rows)
        if mat.rows != mat.cols or mat.rows != shape.total:
            raise ValueError(f"expected a {shape.total}x{shape.total} matrix")
        for i in range(mat.rows):
            for j in range(i + 1, mat.cols):
                if mat.data[i][j] != mat.data[j][i]:
                    raise ValueError(f"not symmetric at ({i},{j})")
        self.shape = shape
        self.mat = mat

    @property
    def size(self):
        return self.mat.rows

    def __getitem__(self, key):
        return self.mat[key]

    def __add__(self, other):
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return SymMatrix(self.shape, [[a + b for a, b in zip(r1, r2)]
                                      for r1, r2 in zip(self.mat.data, other.mat.data)])

    def __sub__(self, other):
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return SymMatrix(self.shape, [[a - b for a, b in zip(r1, r2)]
                                      for r1, r2 in zip(self.mat.data, other.mat.data)])

    def __eq__(self, other):
        return (isinstance(other, SymMatrix) and other.shape == self.shape
                and other.mat == self.mat)

    def trace(self):
        return sum((self.mat.data[i][i] for i in range(self.size)), Fraction(0))

    def pair(self, other):
        """Hilbert-Schmidt pairing Tr XY (= entrywise sum for symmetric Y)."""
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return sum((a * b for r1, r2 in zip(self.mat.data, other.mat.data)
                    for a, b in zip(r1, r2)), Fraction(0))

    def __repr__(self):
        return f"SymMatrix({self.shape}, size={self.size})"


def identity_sym(shape: TensorShape) -> SymMatrix:
    n = shape.total
    return SymMatrix(shape, [[Fraction(i == j) for j in range(n)] for i in range(n)])


def projector_onto_vector(shape: TensorShape, coords) -> SymMatrix:
    """|v><v| / <v,v> for a rational vector v with rational self-pairing."""
    coords = [Fraction(x) for x in coords]
    norm = sum(x * x for x in coords)
    if norm == 0:
        raise ValueError("zero vector has no projector")
    return SymMatrix(shape, [[x * y / norm for y in coords] for x in coords])


def partial_transpose(m: SymMatrix, party: int) -> SymMatrix:
    """Swap the given party's index between row and column multi-indices."""
    shape = m.shape
    if not 0 <= party < shape.parties:
        raise ValueError(f"party {party} out of range")
    n = shape.total
    out = [[Fraction(0)] * n for _ in range(n)]
    for row in range(n):
        rm = list(shape.unravel(row))
        for col in range(n):
            cm = list(shape.unravel(col))
            rm2, cm2 = rm[:], cm[:]
            rm2[party], cm2[party] = cm[party], rm[party]
            out[shape.ravel(rm2)][shape.ravel(cm2)] = m.mat.data[row][col]
    return SymMatrix(shape, out)


def inertia(m: SymMatrix):
    """(n+, n-, n0) eigenvalue sign counts by exact symmetric congruence.

    1x1 pivots on nonzero diagonal entries; when the trailing diagonal is all
    zero, a 2x2 block [[0,a],[a,0]] contributes one sign of each.  Sylvester's
    law makes the counts congruence-invariant.
    """
    a = [row[:] for row in m.mat.data]
    n = m.size
    pos = neg = zero = 0
    k = 0
    while k < n:
        piv = next((i for i in range(k, n) if a[i][i]), None)
        if piv is not None:
            if piv != k:
                a[k], a[piv] = a[piv], a[k]
                for row in a:
                    row[k], row[piv] = row[piv], row[k]
            p = a[k][k]
            if p > 0:
                pos += 1
            else:
                neg += 1
            for i in range(k + 1, n):
                if a[i][k]:
                    f = a[i][k] / p
                    for j in range(k, n):
                        a[i][j] -= f * a[k][j]
            k += 1
            continue
        off = next(((i, j) for i in range(k, n) for j in range(i + 1, n) if a[i][j]),
                   None)
        if off is None:
            zero += n - k
            break
        i, j = off
        for target, source in ((k, i), (k + 1, j)):
            if target != source:
                a[target], a[source] = a[source], a[target]
                for row in a:
                    row[target], row[source] = row[source], row[target]
        piv2 = a[k][k + 1]
        pos += 1
        neg += 1
        for i2 in range(k + 2, n):
            ci, cj = a[i2][k], a[i2][k + 1]
            if ci or cj:
                for j2 in range(k, n):
                    a[i2][j2] -= (ci * a[k + 1][j2] + cj * a[k][j2]) / piv2
        k += 2
    return (pos, neg, zero)


@dataclass
class SeparabilityCertificate:
    subspace: Subspace
    basis: list
    block: SymMatrix
    pt_block: SymMatrix
    det: Fraction
    inertia: tuple
    verdict: str


def format_certificate(cert: SeparabilityCertificate) -> str:
    np_, nm, nz = cert.inertia
    return f"det={cert.det}, inertia=({np_},{nm},{nz}), verdict={cert.verdict}"


def build_s1s3_counterexample(shape: TensorShape) -> SeparabilityCertificate:
    """The subspace with a 2-element product basis whose projection is not
    separable.

    The projection factors through a rational 4x4 block on the first two
    levels of parties 1 and 2 (the remaining parties contribute a rank-one
    projector that cannot affect positivity), so the partial-transpose
    inertia of that block is the whole certificate.
    """
    if shape.parties < 2:
        raise ValueError("needs at least two parties")
    f = QQ
    e1 = [standard_basis_vector(f, d, 0) for d in shape.dims]
    plus = [
        [f.one if i < 2 else f.zero for i in range(shape.dims[0])],
        [f.one if i < 2 else f.zero for i in range(shape.dims[1])],
    ]
    x1 = kron(f, [e1[0], e1[1], *e1[2:]], shape)
    x2 = kron(f, [plus[0], plus[1], *e1[2:]], shape)
    L = Subspace.from_generators(shape, f, [x1.embedded, x2.embedded])
    block_shape = TensorShape((2, 2))
    block = [[Fraction(0)] * 4 for _ in range(4)]
    block[0][0] = Fraction(1)
    for i in (1, 2, 3):
        for j in (1, 2, 3):
            block[i][j] = Fraction(1, 3)
    block = SymMatrix(block_shape, block)
    pt = partial_transpose(block, 0)
    det = pt.mat.det()
    inert = inertia(pt)
    verdict = "NOT_SEPARABLE" if inert[1] >= 1 else "INCONCLUSIVE"
    return SeparabilityCertificate(L, [x1, x2], block, pt, det, inert, verdict)


@dataclass
class Ensemble:
    """States and a measurement over the same party structure.

    With validate=True (the default) the defining identities are enforced:
    measurement elements sum to the unit and every state has trace one.
    """

    states: list
    measurement: list
    unit: SymMatrix
    validate: bool = True

    def __post_init__(self):
        if not self.validate:
            return
        total = self.measurement[0]
        for y in self.measurement[1:]:
            total = total + y
        if total != self.unit:
            raise ValueError("measurement does not sum to the unit")
        for x in self.states:
            if x.trace() != 1:
                raise ValueError("state trace is not 1")


def verify_distinguishable(e: Ensemble, check_psd=False) -> bool:
    """Exact simultaneous distinguishability: <x_i, y_j> = delta_ij and the
    measurement sums to the unit; optionally certify each element PSD by
    inertia (no negative eigenvalues).  Never trusts construction-time checks."""
    if len(e.states) != len(e.measurement):
        raise ValueError("states and measurement differ in size")
    total = e.measurement[0]
    for y in e.measurement[1:]:
        total = total + y
    if total != e.unit:
        return False
    for i, x in enumerate(e.states):
        for j, y in enumerate(e.measurement):
            if x.pair(y) != (1 if i == j else 0):
                return False
    if check_psd:
        for y in e.measurement:
            if inertia(y)[1] != 0:
                return False
    return True


def standard_ensemble(d1: int, d2: int) -> Ensemble:
    """The d1*d2 product projectors used both as states and as measurement."""
    if d1 < 2 or d2 < 2:
        raise ValueError("need d1, d2 >= 2")
    shape = TensorShape((d1, d2))
    mats = []
    for i in range(d1):
        for j in range(d2):
            pi = Matrix(QQ, [[Fraction(r == i and c == i) for c in range(d1)]
                             for r in range(d1)])
            pj = Matrix(QQ, [[Fraction(r == j and c == j) for c in range(d2)]
                             for r in range(d2)])
            mats.append(SymMatrix(shape, pi.kron(pj).data))
    return Ensemble(mats, list(mats), identity_sym(shape))


# --- text format ------------------------------------------------------------

def format_sym_matrix(m: SymMatrix) -> str:
    lines = [f"sym {m.size} {m.size} Q {m.shape}"]
    for row in m.mat.data:
        lines.append(" ".join(str(x) for x in row))
    return "\n".join(lines) + "\n"


def parse_sym_matrix(text: str) -> SymMatrix:
    tokens = text.split()
    if len(tokens) < 5 or tokens[0] != "sym":
        raise ParseError("expected 'sym rows cols field shape' header")
    try:
        rows, cols = int(tokens[1]), int(tokens[2])
    except ValueError:
        raise ParseError(f"bad sym matrix header {tokens[1:3]!r}") from None
    if parse_field(tokens[3]) != QQ:
        raise ParseError("sym matrices are rational only")
    shape = parse_shape(tokens[4])
    body = tokens[5:]
    if rows != cols or len(body) != rows * cols:
        raise ParseError("sym matrix body size mismatch")
    it = iter(QQ.parse(t) for t in body)
    return SymMatrix(shape, [[next(it) for _ in range(cols)] for _ in range(rows)])
