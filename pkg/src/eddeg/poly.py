"""Sparse multivariate polynomials over QQ or GF(p).

A :class:`PolyRing` fixes the variable names and the coefficient field;
a :class:`Polynomial` is an immutable map from exponent tuples to nonzero
coefficients.  Mixing rings raises :class:`RingMismatch`; move a polynomial
between rings explicitly with :meth:`Polynomial.embed` or
:meth:`Polynomial.change_field`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import PolySyntaxError, RingMismatch, UnknownVariable
from .fields import QQ, PrimeField, PrimeFieldElement

Monomial = tuple  # tuple[int, ...], one exponent per ring variable


@dataclass(frozen=True)
class MonomialOrder:
    """``degrevlex``, ``lex`` or ``block`` (eliminates the first ``k`` variables)."""

    kind: str = "degrevlex"
    k: int = 0

    def __post_init__(self):
        if self.kind not in ("degrevlex", "lex", "block"):
            raise ValueError(f"unknown monomial order {self.kind!r}")
        if self.kind == "block" and self.k < 1:
            raise ValueError("block order needs k >= 1")

    @classmethod
    def parse(cls, text: str) -> "MonomialOrder":
        text = text.strip().lower()
        m = re.fullmatch(r"block\s*[(:]?\s*(\d+)\s*\)?", text)
        if m:
            return cls("block", int(m.group(1)))
        return cls(text)

    @property
    def degree_compatible(self) -> bool:
        return self.kind == "degrevlex"

    def sort_key(self, exps: Sequence[int]):
        """Key such that larger key means larger monomial."""
        if self.kind == "lex":
            return tuple(exps)
        if self.kind == "degrevlex":
            return _drl(exps)
        return (_drl(exps[: self.k]), _drl(exps[self.k:]))

    def __str__(self) -> str:
        return f"block({self.k})" if self.kind == "block" else self.kind


def _drl(exps):
    return (sum(exps), tuple(-e for e in reversed(exps)))


DEGREVLEX = MonomialOrder("degrevlex")
LEX = MonomialOrder("lex")


def block(k: int) -> MonomialOrder:
    return MonomialOrder("block", k)


_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class PolyRing:
    """Polynomial ring over ``field`` in the named variables."""

    def __init__(self, names: Iterable[str], field=QQ):
        names = tuple(names)
        for name in names:
            if not _IDENT.match(name):
                raise ValueError(f"invalid variable name {name!r}")
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        self.names = names
        self.field = field
        self.nvars = len(names)
        self._index = {name: i for i, name in enumerate(names)}

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PolyRing)
            and self.names == other.names
            and self.field == other.field
        )

    def __hash__(self) -> int:
        return hash((self.names, self.field))

    def __repr__(self) -> str:
        return f"PolyRing({', '.join(self.names)}; {self.field!r})"

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UnknownVariable(name) from None

    @property
    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    @property
    def one(self) -> "Polynomial":
        return self.constant(1)

    def constant(self, c) -> "Polynomial":
        return Polynomial(self, {(0,) * self.nvars: self.field.convert(c)})

    def monomial(self, exps: Sequence[int], c=1) -> "Polynomial":
        if len(exps) != self.nvars:
            raise ValueError("exponent length does not match ring")
        return Polynomial(self, {tuple(exps): self.field.convert(c)})

    def gen(self, name: str) -> "Polynomial":
        exps = [0] * self.nvars
        exps[self.index(name)] = 1
        return Polynomial(self, {tuple(exps): self.field.one})

    def gens(self) -> tuple["Polynomial", ...]:
        return tuple(self.gen(n) for n in self.names)

    def __call__(self, value) -> "Polynomial":
        if isinstance(value, Polynomial):
            if value.ring != self:
                raise RingMismatch(f"{value.ring!r} is not {self!r}")
            return value
        if isinstance(value, str):
            return parse_poly(value, self.names, self.field)
        return self.constant(value)

    def parse(self, text: str) -> "Polynomial":
        return parse_poly(text, self.names, self.field)

    def extend(self, names: Iterable[str], front: bool = False) -> "PolyRing":
        names = tuple(names)
        return PolyRing(names + self.names if front else self.names + names, self.field)

    def with_field(self, field) -> "PolyRing":
        return PolyRing(self.names, field)


class Polynomial:
    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: PolyRing, terms: Mapping[Monomial, object], _clean: bool = False):
        self.ring = ring
        if _clean:
            self.terms = dict(terms)
        else:
            norm = ring.field.normalize
            self.terms = {m: c for m, c in ((m, norm(c)) for m, c in terms.items()) if c}
        self._hash = None

    # -- coercion -----------------------------------------------------------

    def _lift(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise RingMismatch(f"{other.ring!r} vs {self.ring!r}")
            return other
        if isinstance(other, (int, Fraction, PrimeFieldElement)):
            return self.ring.constant(other)
        raise TypeError(f"cannot combine Polynomial with {type(other).__name__}")

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other) -> "Polynomial":
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        norm = self.ring.field.normalize
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = norm(out.get(m, 0) + c)
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return Polynomial(self.ring, out, _clean=True)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        norm = self.ring.field.normalize
        return Polynomial(self.ring, {m: norm(-c) for m, c in self.terms.items()}, _clean=True)

    def __sub__(self, other) -> "Polynomial":
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "Polynomial":
        return (-self) + other

    def __mul__(self, other) -> "Polynomial":
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        norm = self.ring.field.normalize
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                out[m] = out.get(m, 0) + c1 * c2
        return Polynomial(self.ring, {m: c for m, c in out.items() if norm(c)})

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Polynomial":
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        result, base = self.ring.one, self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def scale(self, c) -> "Polynomial":
        c = self.ring.field.convert(c)
        return self * self.ring.constant(c) if c else self.ring.zero

    # -- comparison ---------------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, Fraction, PrimeFieldElement)):
            return self == self.ring.constant(other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self.terms)

    # -- inspection ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_coefficient(self):
        return self.terms.get((0,) * self.ring.nvars, self.ring.field.zero)

    def coefficient(self, exps: Sequence[int]):
        return self.terms.get(tuple(exps), self.ring.field.zero)

    def total_degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(m) for m in self.terms), default=-1)

    def degree(self, var: str) -> int:
        i = self.ring.index(var)
        return max((m[i] for m in self.terms), default=-1)

    def variables(self) -> tuple[str, ...]:
        used = [False] * self.ring.nvars
        for m in self.terms:
            for i, e in enumerate(m):
                if e:
                    used[i] = True
        return tuple(n for n, u in zip(self.ring.names, used) if u)

    def sorted_terms(self, order: MonomialOrder = DEGREVLEX) -> list[tuple[Monomial, object]]:
        return sorted(self.terms.items(), key=lambda t: order.sort_key(t[0]), reverse=True)

    def leading_monomial(self, order: MonomialOrder = DEGREVLEX) -> Monomial:
        if not self.terms:
            raise ValueError("zero polynomial has no leading monomial")
        return max(self.terms, key=order.sort_key)

    def leading_coefficient(self, order: MonomialOrder = DEGREVLEX):
        return self.terms[self.leading_monomial(order)]

    def monic(self, order: MonomialOrder = DEGREVLEX) -> "Polynomial":
        if not self.terms:
            return self
        inv = self.ring.field.inv(self.leading_coefficient(order))
        norm = self.ring.field.normalize
        return Polynomial(self.ring, {m: norm(c * inv) for m, c in self.terms.items()}, _clean=True)

    # -- calculus and substitution -----------------------------------------

    def diff(self, var: str) -> "Polynomial":
        i = self.ring.index(var)
        norm = self.ring.field.normalize
        out = {}
        for m, c in self.terms.items():
            e = m[i]
            if e:
                v = norm(c * e)
                if v:
                    out[m[:i] + (e - 1,) + m[i + 1:]] = v
        return Polynomial(self.ring, out, _clean=True)

    def substitute(self, assignment: Mapping[str, object], target: PolyRing | None = None) -> "Polynomial":
        """Ring homomorphism sending each named variable to its image.

        Images may be polynomials (all in one target ring) or scalars.
        Variables left out map to the same-named variable of the target ring.
        """
        for name in assignment:
            self.ring.index(name)
        rings = {v.ring for v in assignment.values() if isinstance(v, Polynomial)}
        if target is None:
            if len(rings) > 1:
                raise RingMismatch("substitution images live in different rings")
            target = rings.pop() if rings else self.ring
        elif rings - {target}:
            raise RingMismatch("substitution images are not in the target ring")
        images = []
        for name in self.ring.names:
            if name in assignment:
                v = assignment[name]
                images.append(v if isinstance(v, Polynomial) else target.constant(v))
            elif name in target.names:
                images.append(target.gen(name))
            else:
                images.append(None)
        powers: list[dict[int, Polynomial]] = [{} for _ in images]

        def power(i: int, e: int) -> Polynomial:
            cache = powers[i]
            if e not in cache:
                if images[i] is None:
                    raise RingMismatch(f"no image for variable {self.ring.names[i]!r}")
                cache[e] = images[i] ** e
            return cache[e]

        result = target.zero
        for m, c in self.terms.items():
            term = target.constant(_coerce_coeff(c, self.ring.field, target.field))
            for i, e in enumerate(m):
                if e:
                    term = term * power(i, e)
            result = result + term
        return result

    def evaluate(self, point):
        """Value at ``point`` (a mapping name -> scalar, or a sequence)."""
        field = self.ring.field
        if isinstance(point, Mapping):
            vals = [field.convert(point[n]) if n in point else None for n in self.ring.names]
        else:
            if len(point) != self.ring.nvars:
                raise ValueError("point has wrong number of coordinates")
            vals = [field.convert(v) for v in point]
        total = field.zero
        for m, c in self.terms.items():
            t = c
            for v, e in zip(vals, m):
                if e:
                    if v is None:
                        raise UnknownVariable("<unassigned>")
                    t = t * v ** e
            total = total + t
        return field.normalize(total)

    # -- ring changes ---------------------------------------------------------

    def embed(self, ring: PolyRing) -> "Polynomial":
        """Same polynomial viewed in ``ring`` (matching variables by name)."""
        idx = []
        for i, name in enumerate(self.ring.names):
            if name in ring._index:
                idx.append(ring._index[name])
            else:
                idx.append(None)
        out = {}
        for m, c in self.terms.items():
            new = [0] * ring.nvars
            for i, e in enumerate(m):
                if e:
                    if idx[i] is None:
                        raise RingMismatch(f"variable {self.ring.names[i]!r} missing from {ring!r}")
                    new[idx[i]] = e
            out[tuple(new)] = _coerce_coeff(c, self.ring.field, ring.field)
        return Polynomial(ring, out)

    def change_field(self, field) -> "Polynomial":
        """Reduce QQ coefficients into ``field`` (e.g. QQ -> GF(p))."""
        return self.embed(PolyRing(self.ring.names, field))

    # -- printing -------------------------------------------------------------

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        field = self.ring.field
        parts = []
        for m, c in self.sorted_terms():
            s = field.to_str(c)
            neg = s.startswith("-")
            if neg:
                s = s[1:]
            mono = "*".join(
                (n if e == 1 else f"{n}^{e}") for n, e in zip(self.ring.names, m) if e
            )
            if mono:
                body = mono if s == "1" else f"{s}*{mono}"
            else:
                body = s
            if not parts:
                parts.append(("-" if neg else "") + body)
            else:
                parts.append((" - " if neg else " + ") + body)
        return "".join(parts)

    def __repr__(self) -> str:
        return f"Polynomial({self})"


def _coerce_coeff(c, src, dst):
    if src == dst:
        return c
    if isinstance(dst, PrimeField):
        if isinstance(src, PrimeField):
            raise RingMismatch(f"cannot map {src!r} coefficients into {dst!r}")
        return dst.convert(c)
    raise RingMismatch(f"cannot lift {src!r} coefficients into {dst!r}")


# -- parsing --------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<id>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*^/()]))")


class _Parser:
    def __init__(self, text: str, ring: PolyRing):
        self.text = text
        self.ring = ring
        self.tokens = []
        pos = 0
        stripped = text.rstrip()
        while pos < len(stripped):
            m = _TOKEN.match(stripped, pos)
            if not m:
                raise PolySyntaxError(f"unexpected character {stripped[pos:].lstrip()[:1]!r}",
                                      len(stripped) - len(stripped[pos:].lstrip()), text)
            kind = m.lastgroup
            start = m.start(kind)
            self.tokens.append((kind, m.group(kind), start))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None, len(self.text))

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, value):
        kind, val, pos = self.take()
        if val != value:
            raise PolySyntaxError(f"expected {value!r}", pos, self.text)

    def parse(self) -> Polynomial:
        if not self.tokens:
            raise PolySyntaxError("empty expression", 0, self.text)
        result = self.expr()
        kind, val, pos = self.peek()
        if kind is not None:
            raise PolySyntaxError(f"unexpected {val!r}", pos, self.text)
        return result

    def expr(self) -> Polynomial:
        sign = 1
        kind, val, _ = self.peek()
        if val in ("+", "-"):
            self.take()
            sign = -1 if val == "-" else 1
        result = self.term()
        if sign < 0:
            result = -result
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            rhs = self.term()
            result = result + rhs if op == "+" else result - rhs
        return result

    def term(self) -> Polynomial:
        result = self.factor()
        while self.peek()[1] == "*":
            self.take()
            result = result * self.factor()
        kind, val, pos = self.peek()
        if kind in ("num", "id") or val == "(":
            raise PolySyntaxError("implicit multiplication is not allowed", pos, self.text)
        return result

    def factor(self) -> Polynomial:
        base = self.base()
        if self.peek()[1] == "^":
            self.take()
            kind, val, pos = self.take()
            if kind != "num":
                raise PolySyntaxError("exponent must be a non-negative integer literal", pos, self.text)
            base = base ** int(val)
            if self.peek()[1] == "^":
                raise PolySyntaxError("chained exponents need parentheses", self.peek()[2], self.text)
        return base

    def base(self) -> Polynomial:
        kind, val, pos = self.take()
        if kind == "num":
            value = Fraction(int(val))
            if self.peek()[1] == "/":
                self.take()
                k2, v2, p2 = self.take()
                if k2 != "num":
                    raise PolySyntaxError("denominator must be an integer literal", p2, self.text)
                if int(v2) == 0:
                    raise PolySyntaxError("zero denominator", p2, self.text)
                value = Fraction(int(val), int(v2))
            return self.ring.constant(value)
        if kind == "id":
            if val not in self.ring._index:
                raise UnknownVariable(val)
            return self.ring.gen(val)
        if val == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        if kind is None:
            raise PolySyntaxError("unexpected end of input", pos, self.text)
        raise PolySyntaxError(f"unexpected {val!r}", pos, self.text)


def parse_poly(text: str, vars: Sequence[str] | PolyRing, field=QQ) -> Polynomial:
    """Parse ``text`` in the ring over ``vars``.

    >>> str(parse_poly("x*(x+1)*y - 1", ["x", "y"]))
    'x^2*y + x*y - 1'
    """
    ring = vars if isinstance(vars, PolyRing) else PolyRing(vars, field)
    return _Parser(text, ring).parse()


def diff(f: Polynomial, var: str) -> Polynomial:
    return f.diff(var)


def substitute(f: Polynomial, assignment: Mapping[str, object], target: PolyRing | None = None) -> Polynomial:
    return f.substitute(assignment, target)


def read_poly_lines(text: str):
    """Yield ``(lineno, body)`` for the non-blank, non-comment lines of a polynomial file."""
    for lineno, line in enumerate(text.splitlines(), 1):
        body = line.split("#", 1)[0].strip()
        if body:
            yield lineno, body


def determinant(rows: Sequence[Sequence[Polynomial]], ring: PolyRing) -> Polynomial:
    """Determinant by cofactor expansion; fine for the small minors used here."""
    n = len(rows)
    if n == 0:
        return ring.one
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    total = ring.zero
    for j in range(n):
        if not rows[0][j]:
            continue
        sub = [r[:j] + r[j + 1:] for r in rows[1:]]
        cof = rows[0][j] * determinant(sub, ring)
        total = total + cof if j % 2 == 0 else total - cof
    return total
