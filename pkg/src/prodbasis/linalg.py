"""Dense exact linear algebra over a prime field or the rationals.

Everything is plain Gauss-Jordan with the deterministic pivot rule "first
nonzero entry in column order"; exact scalars make numerical pivoting
unnecessary and keep outputs reproducible for golden tests.
"""

from __future__ import annotations

from .fields import ParseError, parse_field


class SingularMatrixError(ArithmeticError):
    pass


class Matrix:
    """Immutable dense matrix; entries are canonical field scalars, row-major."""

    __slots__ = ("field", "rows", "cols", "data")

    def __init__(self, field, rows_data):
        data = [[field(x) for x in row] for row in rows_data]
        if not data or not data[0]:
            raise ValueError("matrix must have at least one row and column")
        ncols = len(data[0])
        if any(len(row) != ncols for row in data):
            raise ValueError("ragged rows")
        self.field = field
        self.rows = len(data)
        self.cols = ncols
        self.data = data

    @classmethod
    def identity(cls, field, n):
        one, zero = field.one, field.zero
        return cls(field, [[one if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, field, rows, cols):
        zero = field.zero
        return cls(field, [[zero] * cols for _ in range(rows)])

    def __getitem__(self, key):
        i, j = key
        return self.data[i][j]

    def row(self, i):
        return list(self.data[i])

    def column(self, j):
        return [self.data[i][j] for i in range(self.rows)]

    def transpose(self):
        return Matrix(self.field, [[self.data[i][j] for i in range(self.rows)]
                                   for j in range(self.cols)])

    def __matmul__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.cols != other.rows or self.field != other.field:
            raise ValueError("incompatible matrix product")
        ob = other.data
        out = []
        for arow in self.data:
            out.append([sum((arow[k] * ob[k][j] for k in range(self.cols)),
                            self.field.zero) for j in range(other.cols)])
        return Matrix(self.field, out)

    def matvec(self, vec):
        if len(vec) != self.cols:
            raise ValueError("vector length mismatch")
        v = [self.field(x) for x in vec]
        return [sum((row[k] * v[k] for k in range(self.cols)), self.field.zero)
                for row in self.data]

    def kron(self, other):
        if self.field != other.field:
            raise ValueError("field mismatch")
        out = []
        for arow in self.data:
            for brow in other.data:
                out.append([a * b for a in arow for b in brow])
        return Matrix(self.field, out)

    def __eq__(self, other):
        return (isinstance(other, Matrix) and self.field == other.field
                and self.rows == other.rows and self.cols == other.cols
                and self.data == other.data)

    def __hash__(self):
        return hash((self.field, self.rows, self.cols,
                     tuple(tuple(r) for r in self.data)))

    def __repr__(self):
        body = "; ".join(" ".join(self.field.format(x) for x in row) for row in self.data)
        return f"Matrix({self.field}, {self.rows}x{self.cols}: {body})"

    def rref(self):
        """Reduced row echelon form.

        Returns (R, pivots, T) with R = T @ self, T invertible, pivot columns
        strictly increasing.
        """
        f = self.field
        R = [row[:] for row in self.data]
        T = [[f.one if i == j else f.zero for j in range(self.rows)]
             for i in range(self.rows)]
        pivots = []
        r = 0
        for c in range(self.cols):
            piv = next((i for i in range(r, self.rows) if R[i][c]), None)
            if piv is None:
                continue
            if piv != r:
                R[r], R[piv] = R[piv], R[r]
                T[r], T[piv] = T[piv], T[r]
            p = R[r][c]
            if p != f.one:
                R[r] = [x / p for x in R[r]]
                T[r] = [x / p for x in T[r]]
            for i in range(self.rows):
                if i != r and R[i][c]:
                    m = R[i][c]
                    R[i] = [a - m * b for a, b in zip(R[i], R[r])]
                    T[i] = [a - m * b for a, b in zip(T[i], T[r])]
            pivots.append(c)
            r += 1
            if r == self.rows:
                break
        return Matrix(f, R), tuple(pivots), Matrix(f, T)

    def rank(self):
        return len(self.rref()[1])

    def det(self):
        if self.rows != self.cols:
            raise ValueError("determinant of non-square matrix")
        f = self.field
        m = [row[:] for row in self.data]
        acc = f.one
        negate = False
        for c in range(self.cols):
            piv = next((i for i in range(c, self.rows) if m[i][c]), None)
            if piv is None:
                return f.zero
            if piv != c:
                m[c], m[piv] = m[piv], m[c]
                negate = not negate
            acc = acc * m[c][c]
            for i in range(c + 1, self.rows):
                if m[i][c]:
                    k = m[i][c] / m[c][c]
                    m[i] = [a - k * b for a, b in zip(m[i], m[c])]
        return -acc if negate else acc

    def inverse(self):
        if self.rows != self.cols:
            raise SingularMatrixError("inverse of non-square matrix")
        R, pivots, T = self.rref()
        if len(pivots) != self.cols:
            raise SingularMatrixError("matrix is singular")
        return T

    def kernel(self):
        """Basis of the right null space as a list of column vectors."""
        R, pivots, _ = self.rref()
        f = self.field
        free = [c for c in range(self.cols) if c not in pivots]
        basis = []
        for fc in free:
            v = [f.zero] * self.cols
            v[fc] = f.one
            for i, pc in enumerate(pivots):
                v[pc] = -R.data[i][fc]
            basis.append(v)
        return basis

    def rank_normal_form(self):
        """Factor self = P^T @ B_r @ Q with P, Q invertible.

        B_r is the rows x cols matrix with ones exactly at (0,0)..(r-1,r-1),
        r = rank.  Row-reduce to RREF (transform T), column-reduce the result
        to B_r (transform S, so T @ self @ S = B_r), then P = (T^T)^-1 and
        Q = S^-1.
        """
        f = self.field
        R, pivots, T = self.rref()
        r = len(pivots)
        C = [row[:] for row in R.data]
        S = [[f.one if i == j else f.zero for j in range(self.cols)]
             for i in range(self.cols)]
        for i, pc in enumerate(pivots):
            for c in range(self.cols):
                if c != pc and C[i][c]:
                    k = C[i][c]
                    for row in range(self.rows):
                        C[row][c] = C[row][c] - k * C[row][pc]
                    for row in range(self.cols):
                        S[row][c] = S[row][c] - k * S[row][pc]
        order = list(pivots) + [c for c in range(self.cols) if c not in pivots]
        S = [[row[c] for c in order] for row in S]
        P = T.transpose().inverse()
        Q = Matrix(f, S).inverse()
        return P, Q, r


class EchelonSpan:
    """Incrementally maintained row space for exact rank-growth tests.

    Rows are kept with normalized, strictly ordered pivots, so membership is
    a single forward reduction.
    """

    __slots__ = ("field", "width", "rows", "pivots")

    def __init__(self, field, width):
        self.field = field
        self.width = width
        self.rows = []
        self.pivots = []

    @property
    def rank(self):
        return len(self.rows)

    def _reduce(self, vec):
        v = [self.field(x) for x in vec]
        for row, p in zip(self.rows, self.pivots):
            c = v[p]
            if c:
                v = [a - c * b for a, b in zip(v, row)]
        return v

    def contains(self, vec) -> bool:
        return not any(self._reduce(vec))

    def add(self, vec) -> bool:
        """Insert vec if independent of the current rows; report rank growth."""
        v = self._reduce(vec)
        p = next((i for i, x in enumerate(v) if x), None)
        if p is None:
            return False
        lead = v[p]
        if lead != self.field.one:
            v = [x / lead for x in v]
        pos = next((i for i, q in enumerate(self.pivots) if q > p), len(self.pivots))
        self.rows.insert(pos, v)
        self.pivots.insert(pos, p)
        return True


def rank_normal_profile(field, rows, cols, r):
    """The matrix B_r: ones at (0,0)..(r-1,r-1), zero elsewhere."""
    one, zero = field.one, field.zero
    return Matrix(field, [[one if i == j and i < r else zero for j in range(cols)]
                          for i in range(rows)])


def format_matrix(m: Matrix) -> str:
    lines = [f"{m.rows} {m.cols} {m.field}"]
    for row in m.data:
        lines.append(" ".join(m.field.format(x) for x in row))
    return "\n".join(lines) + "\n"


def parse_matrix(text: str) -> Matrix:
    tokens = text.split()
    if len(tokens) < 3:
        raise ParseError("matrix text too short")
    try:
        rows, cols = int(tokens[0]), int(tokens[1])
    except ValueError:
        raise ParseError(f"bad matrix header {tokens[:2]!r}") from None
    field = parse_field(tokens[2])
    body = tokens[3:]
    if len(body) != rows * cols:
        raise ParseError(f"expected {rows * cols} entries, got {len(body)}")
    it = iter(field.parse(t) for t in body)
    return Matrix(field, [[next(it) for _ in range(cols)] for _ in range(rows)])
