"""Exact scalar arithmetic over prime fields GF(p) and the rationals.

Scalars are plain ``fractions.Fraction`` values over the rationals and
:class:`FpElement` residues over GF(p); both support the usual arithmetic
operators, so downstream linear algebra is written once against either kind.
No floating point appears anywhere.
"""

from __future__ import annotations

import re
from fractions import Fraction


class ParseError(ValueError):
    """Malformed field, scalar, vector or matrix text."""


_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for all n < 3.3e24 (covers 64-bit)."""
    if n < 2:
        return False
    for p in _MR_WITNESSES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class FpElement:
    """A residue in GF(p), stored as the canonical representative in [0, p-1].

    Arithmetic between elements of different primes raises ValueError; plain
    ints coerce into the field of the other operand.
    """

    __slots__ = ("p", "n")

    def __init__(self, p, n):
        self.p = p
        self.n = n % p

    def _coerce(self, other):
        if isinstance(other, FpElement):
            if other.p != self.p:
                raise ValueError(f"field mismatch: GF({self.p}) vs GF({other.p})")
            return other.n
        if isinstance(other, int):
            return other % self.p
        return None

    def __add__(self, other):
        m = self._coerce(other)
        return NotImplemented if m is None else FpElement(self.p, self.n + m)

    __radd__ = __add__

    def __sub__(self, other):
        m = self._coerce(other)
        return NotImplemented if m is None else FpElement(self.p, self.n - m)

    def __rsub__(self, other):
        m = self._coerce(other)
        return NotImplemented if m is None else FpElement(self.p, m - self.n)

    def __mul__(self, other):
        m = self._coerce(other)
        return NotImplemented if m is None else FpElement(self.p, self.n * m)

    __rmul__ = __mul__

    def __truediv__(self, other):
        m = self._coerce(other)
        if m is None:
            return NotImplemented
        if m == 0:
            raise ZeroDivisionError(f"division by zero in GF({self.p})")
        return FpElement(self.p, self.n * pow(m, -1, self.p))

    def __rtruediv__(self, other):
        m = self._coerce(other)
        if m is None:
            return NotImplemented
        if self.n == 0:
            raise ZeroDivisionError(f"division by zero in GF({self.p})")
        return FpElement(self.p, m * pow(self.n, -1, self.p))

    def __neg__(self):
        return FpElement(self.p, -self.n)

    def __pow__(self, k):
        if k < 0 and self.n == 0:
            raise ZeroDivisionError(f"division by zero in GF({self.p})")
        return FpElement(self.p, pow(self.n, k, self.p))

    def inverse(self):
        if self.n == 0:
            raise ZeroDivisionError(f"division by zero in GF({self.p})")
        return FpElement(self.p, pow(self.n, -1, self.p))

    def __eq__(self, other):
        if isinstance(other, FpElement):
            return self.p == other.p and self.n == other.n
        if isinstance(other, int):
            return self.n == other % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.p, self.n))

    def __bool__(self):
        return self.n != 0

    def __repr__(self):
        return f"FpElement({self.p}, {self.n})"

    def __str__(self):
        return str(self.n)


class PrimeField:
    """The prime field GF(p).  Calling the field canonicalizes a value into it."""

    def __init__(self, p: int):
        if not isinstance(p, int) or not is_prime(p):
            raise ValueError(f"field order must be prime, got {p!r}")
        self.p = p
        self.zero = FpElement(p, 0)
        self.one = FpElement(p, 1)

    @property
    def order(self):
        return self.p

    @property
    def is_finite(self):
        return True

    def __call__(self, value) -> FpElement:
        if isinstance(value, FpElement):
            if value.p != self.p:
                raise ValueError(f"field mismatch: GF({self.p}) vs GF({value.p})")
            return value
        if isinstance(value, int):
            return FpElement(self.p, value)
        raise TypeError(f"cannot coerce {value!r} into GF({self.p})")

    def owns(self, value) -> bool:
        return isinstance(value, FpElement) and value.p == self.p

    def inv(self, value) -> FpElement:
        return self(value).inverse()

    def elements(self):
        """Yield exactly 0, 1, ..., p-1 in order."""
        for n in range(self.p):
            yield FpElement(self.p, n)

    def sample(self, rng, bound=None) -> FpElement:
        """Uniform element; `bound` is ignored for finite fields."""
        return FpElement(self.p, rng.randrange(self.p))

    def parse(self, token: str) -> FpElement:
        try:
            return FpElement(self.p, int(token))
        except ValueError:
            raise ParseError(f"bad GF({self.p}) scalar {token!r}") from None

    def format(self, value) -> str:
        return str(self(value).n)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    def __repr__(self):
        return f"PrimeField({self.p})"

    def __str__(self):
        return f"GF({self.p})"


class Rationals:
    """The rational field; the artifact's stand-in for an arbitrary infinite field."""

    zero = Fraction(0)
    one = Fraction(1)

    @property
    def order(self):
        return None

    @property
    def is_finite(self):
        return False

    def __call__(self, value) -> Fraction:
        if isinstance(value, (Fraction, int)):
            return Fraction(value)
        raise TypeError(f"cannot coerce {value!r} into Q")

    def owns(self, value) -> bool:
        return isinstance(value, Fraction)

    def inv(self, value) -> Fraction:
        return Fraction(1) / self(value)

    def elements(self):
        raise ValueError("Q is not enumerable")

    def sample(self, rng, bound=None) -> Fraction:
        """Uniform integer in [0, bound], embedded as a rational."""
        if bound is None or bound < 1:
            raise ValueError("rational sampling needs a bound >= 1")
        return Fraction(rng.randint(0, bound))

    def parse(self, token: str) -> Fraction:
        try:
            return Fraction(token)
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"bad rational scalar {token!r}") from None

    def format(self, value) -> str:
        return str(self(value))

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("Q")

    def __repr__(self):
        return "Rationals()"

    def __str__(self):
        return "Q"


QQ = Rationals()

_FIELD_RE = re.compile(r"^GF\(?(\d+)\)?$", re.IGNORECASE)


def GF(p: int) -> PrimeField:
    return PrimeField(p)


def parse_field(text: str):
    """Parse a field token: "Q", "GF(p)" or "GFp"."""
    text = text.strip()
    if text.upper() == "Q":
        return QQ
    m = _FIELD_RE.match(text)
    if m:
        try:
            return PrimeField(int(m.group(1)))
        except ValueError as e:
            raise ParseError(str(e)) from None
    raise ParseError(f"bad field spec {text!r}")
