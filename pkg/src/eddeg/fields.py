"""Exact coefficient fields: the rationals and prime fields GF(p).

Polynomials store raw coefficients (``Fraction`` over QQ, ``int`` in
``[0, p)`` over GF(p)); the field object knows how to combine them.
:class:`PrimeFieldElement` is the standalone value type for callers who want
scalars that carry their modulus around.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

Rational = Fraction

DEFAULT_PRIME = 2147483629
# second modulus used by the multi-prime agreement protocol
ALT_PRIME = 1073741789

Scalar = Union[int, Fraction]


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid for n < 3.3e24."""
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    for q in small:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class RationalField:
    """The field QQ with ``Fraction`` elements."""

    characteristic = 0
    name = "QQ"

    zero = Fraction(0)
    one = Fraction(1)

    def __call__(self, value) -> Fraction:
        return self.convert(value)

    def convert(self, value) -> Fraction:
        if isinstance(value, PrimeFieldElement):
            raise TypeError("cannot lift a GF(p) element to QQ")
        return Fraction(value)

    def normalize(self, c: Fraction) -> Fraction:
        return c

    def inv(self, c: Fraction) -> Fraction:
        if not c:
            raise ZeroDivisionError("inverse of zero")
        return 1 / c

    def to_str(self, c: Fraction) -> str:
        return str(c)

    def __eq__(self, other) -> bool:
        return isinstance(other, RationalField)

    def __hash__(self) -> int:
        return hash("QQ")

    def __repr__(self) -> str:
        return "QQ"


class PrimeField:
    """GF(p) for an odd prime p; elements are ints in ``[0, p)``."""

    name = "GF"

    def __init__(self, p: int = DEFAULT_PRIME):
        if p == 2 or not is_prime(p):
            raise ValueError(f"modulus must be an odd prime, got {p}")
        self.p = p
        self.characteristic = p
        self.zero = 0
        self.one = 1

    def __call__(self, value) -> "PrimeFieldElement":
        return PrimeFieldElement(self.convert(value), self.p)

    def convert(self, value) -> int:
        p = self.p
        if isinstance(value, PrimeFieldElement):
            if value.modulus != p:
                raise ValueError("modulus mismatch")
            return value.value
        if isinstance(value, Fraction):
            if value.denominator % p == 0:
                raise ZeroDivisionError(f"denominator divisible by {p}")
            return value.numerator * pow(value.denominator, -1, p) % p
        if isinstance(value, int):
            return value % p
        return self.convert(Fraction(value))

    def normalize(self, c: int) -> int:
        return c % self.p

    def inv(self, c: int) -> int:
        if not c % self.p:
            raise ZeroDivisionError("inverse of zero")
        return pow(c, -1, self.p)

    def to_str(self, c: int) -> str:
        # symmetric representative reads better for small negatives
        return str(c - self.p if c > self.p // 2 else c)

    def __eq__(self, other) -> bool:
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self) -> int:
        return hash(("GF", self.p))

    def __repr__(self) -> str:
        return f"GF({self.p})"


QQ = RationalField()


def GF(p: int = DEFAULT_PRIME) -> PrimeField:
    return PrimeField(p)


@dataclass(frozen=True)
class PrimeFieldElement:
    value: int
    modulus: int

    def __post_init__(self):
        if not 0 <= self.value < self.modulus:
            object.__setattr__(self, "value", self.value % self.modulus)

    def _coerce(self, other) -> int:
        if isinstance(other, PrimeFieldElement):
            if other.modulus != self.modulus:
                raise ValueError("modulus mismatch")
            return other.value
        if isinstance(other, Fraction):
            return other.numerator * pow(other.denominator, -1, self.modulus)
        if isinstance(other, int):
            return other
        return NotImplemented

    def _new(self, v: int) -> "PrimeFieldElement":
        return PrimeFieldElement(v % self.modulus, self.modulus)

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._new(self.value + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._new(self.value - o)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._new(o - self.value)

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._new(self.value * o)

    __rmul__ = __mul__

    def __neg__(self):
        return self._new(-self.value)

    def inverse(self) -> "PrimeFieldElement":
        if self.value == 0:
            raise ZeroDivisionError("inverse of zero")
        return self._new(pow(self.value, -1, self.modulus))

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * self._new(o).inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self._new(o) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return self._new(pow(self.value, k, self.modulus))

    def __eq__(self, other) -> bool:
        if isinstance(other, PrimeFieldElement):
            return self.value == other.value and self.modulus == other.modulus
        if isinstance(other, int):
            return (other - self.value) % self.modulus == 0
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.value, self.modulus))

    def __bool__(self) -> bool:
        return self.value != 0

    def __int__(self) -> int:
        return self.value

    def __repr__(self) -> str:
        return f"{self.value} (mod {self.modulus})"


def make_field(modulus: int | None):
    """QQ for ``None`` or 0, GF(modulus) otherwise."""
    return QQ if not modulus else PrimeField(modulus)
