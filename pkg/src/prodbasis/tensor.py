"""Tensor-space structure over an exact field.

Coordinates are row-major (lexicographic in the multi-index, party 1 most
significant), so matricizing across a split point is a plain reshape and
vec is a plain flatten.  The pairing is the symmetric bilinear form
sum_i v(i)u(i); over finite fields it may be isotropic, so a subspace can
meet its own complement.
"""

from __future__ import annotations

import itertools
from math import prod

from .fields import ParseError, parse_field
from .linalg import Matrix


class TensorShape:
    """Local dimensions (d_1, ..., d_n), each >= 2, with total = d_1 * ... * d_n."""

    __slots__ = ("dims", "total")

    def __init__(self, dims):
        dims = tuple(int(d) for d in dims)
        if not dims or any(d < 2 for d in dims):
            raise ValueError(f"need n >= 1 local dimensions, all >= 2: {dims}")
        self.dims = dims
        self.total = prod(dims)

    @property
    def parties(self):
        return len(self.dims)

    def ravel(self, multi):
        flat = 0
        for i, d in zip(multi, self.dims):
            if not 0 <= i < d:
                raise IndexError(f"index {multi} out of range for {self.dims}")
            flat = flat * d + i
        return flat

    def unravel(self, flat):
        multi = []
        for d in reversed(self.dims):
            multi.append(flat % d)
            flat //= d
        return tuple(reversed(multi))

    def __eq__(self, other):
        return isinstance(other, TensorShape) and other.dims == self.dims

    def __hash__(self):
        return hash(self.dims)

    def __repr__(self):
        return f"TensorShape({self.dims})"

    def __str__(self):
        return "x".join(str(d) for d in self.dims)


def parse_shape(text: str) -> TensorShape:
    try:
        return TensorShape(int(t) for t in text.strip().split("x"))
    except ValueError:
        raise ParseError(f"bad shape {text!r}") from None


class TensorVector:
    """A vector in the d~-dimensional tensor space, dense row-major coordinates."""

    __slots__ = ("shape", "field", "coords")

    def __init__(self, shape, field, coords):
        coords = [field(x) for x in coords]
        if len(coords) != shape.total:
            raise ValueError(f"expected {shape.total} coordinates, got {len(coords)}")
        self.shape = shape
        self.field = field
        self.coords = coords

    def _check_compatible(self, other):
        if self.shape != other.shape or self.field != other.field:
            raise ValueError("shape/field mismatch")

    def __add__(self, other):
        self._check_compatible(other)
        return TensorVector(self.shape, self.field,
                            [a + b for a, b in zip(self.coords, other.coords)])

    def __sub__(self, other):
        self._check_compatible(other)
        return TensorVector(self.shape, self.field,
                            [a - b for a, b in zip(self.coords, other.coords)])

    def scale(self, c):
        c = self.field(c)
        return TensorVector(self.shape, self.field, [c * x for x in self.coords])

    @property
    def is_zero(self):
        return not any(self.coords)

    def pair(self, other):
        """The bilinear form sum_i v(i)u(i)."""
        self._check_compatible(other)
        return sum((a * b for a, b in zip(self.coords, other.coords)), self.field.zero)

    def slice_party(self, party, index):
        """Fix one party's index; result lives on the remaining parties."""
        dims = self.shape.dims
        if len(dims) < 2:
            raise ValueError("slicing needs at least two parties")
        rest = dims[:party] + dims[party + 1:]
        out = []
        for multi in itertools.product(*(range(d) for d in rest)):
            full = multi[:party] + (index,) + multi[party:]
            out.append(self.coords[self.shape.ravel(full)])
        return TensorVector(TensorShape(rest), self.field, out)

    def permute_parties(self, perm):
        """Reorder parties; new party j is old party perm[j]."""
        dims = self.shape.dims
        new_shape = TensorShape(dims[p] for p in perm)
        out = []
        for multi in itertools.product(*(range(d) for d in new_shape.dims)):
            old = [0] * len(dims)
            for j, p in enumerate(perm):
                old[p] = multi[j]
            out.append(self.coords[self.shape.ravel(old)])
        return TensorVector(new_shape, self.field, out)

    def __eq__(self, other):
        return (isinstance(other, TensorVector) and other.shape == self.shape
                and other.field == self.field and other.coords == self.coords)

    def __repr__(self):
        return f"TensorVector({self.shape}, {self.field}, {[str(x) for x in self.coords]})"


def bilinear_form(v: TensorVector, u: TensorVector):
    return v.pair(u)


def zero_vector(shape, field) -> TensorVector:
    return TensorVector(shape, field, [field.zero] * shape.total)


def standard_basis_vector(field, d, i):
    """The per-party unit vector e_i (0-based) in F^d."""
    if not 0 <= i < d:
        raise IndexError(f"basis index {i} out of range for dimension {d}")
    return [field.one if j == i else field.zero for j in range(d)]


def basis_tensor(shape, field, multi) -> TensorVector:
    """The embedded standard basis tensor e_{i_1} x ... x e_{i_n} (0-based)."""
    flat = shape.ravel(tuple(multi))
    coords = [field.zero] * shape.total
    coords[flat] = field.one
    return TensorVector(shape, field, coords)


class ProductVector:
    """A product vector with its per-party factors and embedded coordinates."""

    __slots__ = ("factors", "embedded")

    def __init__(self, factors, embedded):
        self.factors = tuple(tuple(f) for f in factors)
        self.embedded = embedded

    def __repr__(self):
        facs = " x ".join("(" + " ".join(str(x) for x in f) + ")" for f in self.factors)
        return f"ProductVector({facs})"


def kron(field, factors, shape=None) -> ProductVector:
    """Embed per-party factors as their Kronecker product."""
    factors = [[field(x) for x in f] for f in factors]
    dims = tuple(len(f) for f in factors)
    if shape is None:
        shape = TensorShape(dims)
    elif shape.dims != dims:
        raise ValueError(f"factor lengths {dims} do not match shape {shape.dims}")
    coords = [field.one]
    for f in factors:
        coords = [a * b for a in coords for b in f]
    return ProductVector(factors, TensorVector(shape, field, coords))


def tensor_product(a: TensorVector, b: TensorVector) -> TensorVector:
    """Kronecker product of two tensors on the concatenated party list."""
    if a.field != b.field:
        raise ValueError("field mismatch")
    shape = TensorShape(a.shape.dims + b.shape.dims)
    return TensorVector(shape, a.field, [x * y for x in a.coords for y in b.coords])


def matricize(v: TensorVector, k: int) -> Matrix:
    """Reshape across the split after party k (1 <= k < n)."""
    n = v.shape.parties
    if not 1 <= k < n:
        raise ValueError(f"split point {k} out of range for {n} parties")
    rows = prod(v.shape.dims[:k])
    cols = v.shape.total // rows
    return Matrix(v.field, [v.coords[r * cols:(r + 1) * cols] for r in range(rows)])


def vectorize(m: Matrix, shape: TensorShape) -> TensorVector:
    """Inverse of matricize: row-major flatten."""
    if m.rows * m.cols != shape.total:
        raise ValueError("matrix size does not match shape")
    return TensorVector(shape, m.field, [x for row in m.data for x in row])


def schmidt_rank(v: TensorVector, k: int) -> int:
    """Rank of the k-split matricization; 1 iff nonzero and product across the split."""
    return matricize(v, k).rank()


def iter_projective_vectors(field, length):
    """All nonzero vectors in F^length with leading nonzero entry 1, ascending
    lexicographic in the coordinate tuple.  One representative per scalar class."""
    elems = list(field.elements())
    zero, one = field.zero, field.one
    for lead in range(length - 1, -1, -1):
        for tail in itertools.product(elems, repeat=length - 1 - lead):
            yield [zero] * lead + [one] + list(tail)


def projective_count(q, length):
    return (q ** length - 1) // (q - 1)


class Subspace:
    """A subspace of the tensor space, held as generators and/or cogenerators.

    Cogenerators are the w_i cutting the subspace out as {u : <w_i, u> = 0};
    each representation, when absent, is derived lazily as the kernel of the
    other's pairing matrix.
    """

    __slots__ = ("shape", "field", "_gens", "_cogens")

    def __init__(self, shape, field, generators=None, cogenerators=None):
        if generators is None and cogenerators is None:
            raise ValueError("need generators and/or cogenerators")
        self.shape = shape
        self.field = field
        self._gens = self._adopt(generators)
        self._cogens = self._adopt(cogenerators)
        if self._gens is not None and self._cogens is not None:
            if len(self._gens) + len(self._cogens) != shape.total:
                raise ValueError("inconsistent dual representations: dimensions")
            for g in self._gens:
                for w in self._cogens:
                    if g.pair(w):
                        raise ValueError("inconsistent dual representations: pairing")

    def _adopt(self, vectors):
        if vectors is None:
            return None
        vectors = tuple(vectors)
        for v in vectors:
            if v.shape != self.shape or v.field != self.field:
                raise ValueError("shape/field mismatch")
        if vectors and self._stack(vectors).rank() != len(vectors):
            raise ValueError("vectors are linearly dependent")
        return vectors

    def _stack(self, vectors):
        return Matrix(self.field, [v.coords for v in vectors])

    @classmethod
    def from_generators(cls, shape, field, generators):
        return cls(shape, field, generators=generators)

    @classmethod
    def from_cogenerators(cls, shape, field, cogenerators):
        return cls(shape, field, cogenerators=cogenerators)

    @property
    def dim(self):
        if self._gens is not None:
            return len(self._gens)
        return self.shape.total - len(self._cogens)

    def _full_basis(self):
        return tuple(basis_tensor(self.shape, self.field, self.shape.unravel(i))
                     for i in range(self.shape.total))

    def _kernel_of(self, vectors):
        if not vectors:
            return self._full_basis()
        ker = self._stack(vectors).kernel()
        return tuple(TensorVector(self.shape, self.field, v) for v in ker)

    def generators(self):
        if self._gens is None:
            self._gens = self._kernel_of(self._cogens)
        return self._gens

    def cogenerators(self):
        if self._cogens is None:
            self._cogens = self._kernel_of(self._gens)
        return self._cogens

    def contains(self, v: TensorVector) -> bool:
        if v.shape != self.shape or v.field != self.field:
            raise ValueError("shape/field mismatch")
        if self._cogens is not None:
            return all(not w.pair(v) for w in self._cogens)
        if not self._gens:
            return v.is_zero
        rows = [g.coords for g in self._gens] + [v.coords]
        return Matrix(self.field, rows).rank() == len(self._gens)

    def orthogonal_complement(self) -> "Subspace":
        return Subspace(self.shape, self.field,
                        generators=self._cogens, cogenerators=self._gens)

    def same_subspace(self, other: "Subspace") -> bool:
        if self.shape != other.shape or self.field != other.field:
            return False
        if self.dim != other.dim:
            return False
        if self.dim == 0:
            return True
        a = self._stack(self.generators()).rref()[0]
        b = other._stack(other.generators()).rref()[0]
        return a == b

    def __repr__(self):
        return f"Subspace({self.shape}, {self.field}, dim={self.dim})"


# --- text formats ---------------------------------------------------------

def format_vector(v: TensorVector) -> str:
    dims = " ".join(str(d) for d in v.shape.dims)
    coords = " ".join(v.field.format(x) for x in v.coords)
    return f"shape {dims}; {v.field}; coords {coords}"

def parse_vector(line: str) -> TensorVector:
    parts = [p.strip() for p in line.strip().split(";")]
    if len(parts) != 3 or not parts[0].startswith("shape") or not parts[2].startswith("coords"):
        raise ParseError(f"bad vector line {line!r}")
    try:
        shape = TensorShape(int(t) for t in parts[0].split()[1:])
    except ValueError:
        raise ParseError(f"bad shape in {line!r}") from None
    field = parse_field(parts[1])
    coords = [field.parse(t) for t in parts[2].split()[1:]]
    if len(coords) != shape.total:
        raise ParseError(f"expected {shape.total} coordinates in {line!r}")
    return TensorVector(shape, field, coords)


def parse_vector_file(text: str) -> list[TensorVector]:
    return [parse_vector(line) for line in text.splitlines()
            if line.strip() and not line.lstrip().startswith("#")]


def format_subspace(s: Subspace) -> str:
    lines = []
    if s._gens is not None:
        lines += [f"gen; {format_vector(v)}" for v in s._gens]
    if s._cogens is not None:
        lines += [f"cogen; {format_vector(v)}" for v in s._cogens]
    return "\n".join(lines) + "\n"


def parse_subspace(text: str) -> Subspace:
    gens, cogens = [], []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        role, _, rest = line.partition(";")
        role = role.strip()
        if role == "gen":
            gens.append(parse_vector(rest))
        elif role == "cogen":
            cogens.append(parse_vector(rest))
        else:
            raise ParseError(f"bad role tag {role!r}")
    if not gens and not cogens:
        raise ParseError("empty subspace file")
    head = (gens or cogens)[0]
    return Subspace(head.shape, head.field,
                    generators=gens or None, cogenerators=cogens or None)
