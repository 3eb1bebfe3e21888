"""Buchberger's algorithm with solution counting on top.

Internally every monomial is packed into one Python int::

    packed = order_key << EXPBITS | exponents

where ``exponents`` holds one fixed-width field per variable (top bit of each
field kept clear as a guard) and ``order_key`` is a linear form in the
exponents whose integer order is the monomial order.  Both halves are
additive, so monomial multiplication is integer addition, comparison is
integer comparison, and divisibility is one subtraction and a mask test.
"""

from __future__ import annotations

import heapq
import itertools
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import RingMismatch, ResourceLimit, UnitIdeal
from .fields import PrimeField
from .poly import DEGREVLEX, MonomialOrder, Polynomial, PolyRing

log = logging.getLogger(__name__)

INFINITE = math.inf


@dataclass(frozen=True)
class Limits:
    """Caps that turn runaway computations into :class:`ResourceLimit`."""

    max_degree: int = 120
    max_basis: int = 20000
    max_pairs: int | None = None


DEFAULT_LIMITS = Limits()


@dataclass(frozen=True)
class Ideal:
    """Generators of an ideal in a common ring (zero generators dropped)."""

    ring: PolyRing
    generators: tuple

    def __init__(self, ring: PolyRing, generators: Iterable[Polynomial]):
        gens = []
        for g in generators:
            if not isinstance(g, Polynomial):
                g = ring(g)
            if g.ring != ring:
                raise RingMismatch(f"generator {g} is not in {ring!r}")
            if g:
                gens.append(g)
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "generators", tuple(gens))

    @classmethod
    def of(cls, *polys: Polynomial) -> "Ideal":
        if not polys:
            raise ValueError("need at least one generator to infer the ring")
        return cls(polys[0].ring, polys)

    def __add__(self, other) -> "Ideal":
        if isinstance(other, Ideal):
            other = other.generators
        return Ideal(self.ring, self.generators + tuple(other))

    def __iter__(self):
        return iter(self.generators)

    def __len__(self) -> int:
        return len(self.generators)


# -- packed monomials -------------------------------------------------------------


class _Packing:
    def __init__(self, nvars: int, order: MonomialOrder, max_degree: int):
        W = max(8, max_degree.bit_length() + 2)
        self.W = W
        self.nvars = nvars
        self.fieldmask = (1 << W) - 1
        self.expbits = W * nvars
        self.expmask = (1 << self.expbits) - 1
        self.guard = sum(1 << (W * i + W - 1) for i in range(nvars))
        B = 1 << W
        if order.kind == "degrevlex":
            weights = _drl_weights(nvars, B)
        elif order.kind == "lex":
            weights = [B ** (nvars - 1 - i) for i in range(nvars)]
        else:
            k = order.k
            if k > nvars:
                raise ValueError(f"block({k}) needs at least {k} variables")
            s2 = nvars - k
            scale = 1 << (W * (s2 + 1) + max(s2, 1).bit_length())
            weights = [w * scale for w in _drl_weights(k, B)] + _drl_weights(s2, B)
        self.checked = not order.degree_compatible
        self.mults = [(w << self.expbits) | (1 << (W * i)) for i, w in enumerate(weights)]

    def pack(self, exps: Sequence[int]) -> int:
        m = 0
        for e, w in zip(exps, self.mults):
            if e:
                if e >> (self.W - 1):
                    raise ResourceLimit(f"exponent {e} exceeds packing capacity")
                m += e * w
        return m

    def unpack(self, mono: int) -> tuple:
        e = mono & self.expmask
        W, fm = self.W, self.fieldmask
        return tuple((e >> (W * i)) & fm for i in range(self.nvars))


def _drl_weights(n: int, B: int) -> list[int]:
    top = B ** n
    return [top - B ** i for i in range(n)]


class _UnitFound(Exception):
    pass


class _Elem:
    """A monic basis element: leading packed monomial plus its tail."""

    __slots__ = ("lm", "lexp", "exps", "deg", "tail_m", "tail_c")

    def __init__(self, monos, coeffs, packing):
        self.lm = monos[0]
        self.lexp = monos[0] & packing.expmask
        self.exps = packing.unpack(monos[0])
        self.deg = sum(self.exps)
        self.tail_m = monos[1:]
        self.tail_c = coeffs[1:]


class _Engine:
    def __init__(self, ring: PolyRing, order: MonomialOrder, limits: Limits):
        self.ring = ring
        self.order = order
        self.limits = limits
        self.p = ring.field.p if isinstance(ring.field, PrimeField) else None
        self.pk = _Packing(ring.nvars, order, limits.max_degree)

    # conversion -----------------------------------------------------------

    def to_packed(self, f: Polynomial):
        pack = self.pk.pack
        items = sorted(((pack(m), c) for m, c in f.terms.items()), reverse=True)
        return [m for m, _ in items], [c for _, c in items]

    def to_poly(self, monos, coeffs) -> Polynomial:
        unpack = self.pk.unpack
        return Polynomial(self.ring, {unpack(m): c for m, c in zip(monos, coeffs)}, _clean=True)

    def make_monic(self, monos, coeffs):
        lc = coeffs[0]
        if self.p:
            p = self.p
            if lc != 1:
                inv = pow(lc, -1, p)
                coeffs = [c * inv % p for c in coeffs]
        elif lc != 1:
            coeffs = [c / lc for c in coeffs]
        return monos, coeffs

    # reduction ------------------------------------------------------------

    def reduce(self, acc: dict, reducers: Sequence[_Elem]):
        """Fully reduce the polynomial held in ``acc`` (packed mono -> coeff)."""
        heap = [-m for m in acc]
        heapq.heapify(heap)
        out_m, out_c = [], []
        em_mask, guard = self.pk.expmask, self.pk.guard
        checked = self.pk.checked
        p = self.p
        pop, push = heapq.heappop, heapq.heappush
        get = acc.get
        while heap:
            m = -pop(heap)
            c = acc.pop(m, 0)
            if not c:
                continue
            em = m & em_mask
            for g in reducers:
                if not (em - g.lexp) & guard:
                    break
            else:
                out_m.append(m)
                out_c.append(c)
                continue
            shift = m - g.lm
            if p:
                for gm, gc in zip(g.tail_m, g.tail_c):
                    t = gm + shift
                    old = get(t)
                    if old is None:
                        if checked and t & guard:
                            raise ResourceLimit("exponent overflow during reduction")
                        acc[t] = -c * gc % p
                        push(heap, -t)
                    else:
                        acc[t] = (old - c * gc) % p
            else:
                for gm, gc in zip(g.tail_m, g.tail_c):
                    t = gm + shift
                    old = get(t)
                    if old is None:
                        if checked and t & guard:
                            raise ResourceLimit("exponent overflow during reduction")
                        acc[t] = -c * gc
                        push(heap, -t)
                    else:
                        acc[t] = old - c * gc
        return out_m, out_c

    def spoly_acc(self, f: _Elem, g: _Elem, lcm: int) -> dict:
        p = self.p
        sf, sg = lcm - f.lm, lcm - g.lm
        acc = {m + sf: c for m, c in zip(f.tail_m, f.tail_c)}
        get = acc.get
        for m, c in zip(g.tail_m, g.tail_c):
            t = m + sg
            v = get(t, 0) - c
            acc[t] = v % p if p else v
        return acc

    def lcm(self, a: _Elem, b: _Elem) -> tuple[int, tuple, int]:
        ex = tuple(map(max, a.exps, b.exps))
        return self.pk.pack(ex), ex, sum(ex)

    # Buchberger -------------------------------------------------------------

    def basis(self, polys: Sequence[Polynomial], chain: bool = True) -> list[_Elem]:
        limits = self.limits
        elems: list[_Elem] = []
        active: list[int] = []
        pairs: list = []
        counter = itertools.count()
        processed = 0

        def update(h_idx: int):
            nonlocal pairs, active
            h = elems[h_idx]
            cand = []
            for gi in active:
                g = elems[gi]
                L, ex, deg = self.lcm(h, g)
                coprime = all(not (a and b) for a, b in zip(h.exps, g.exps))
                cand.append((gi, L, ex, deg, coprime))
            if not chain:
                for gi, L, ex, deg, coprime in cand:
                    if not coprime:
                        heapq.heappush(pairs, (L, next(counter), gi, h_idx, deg))
                active.append(h_idx)
                return
            kept = []
            rest = list(cand)
            while rest:
                item = rest.pop(0)
                gi, L, ex, deg, coprime = item
                if coprime or not any(
                    _divides(o[2], ex) for o in itertools.chain(rest, kept)
                ):
                    kept.append(item)
            new_pairs = [
                (L, next(counter), gi, h_idx, deg)
                for gi, L, ex, deg, coprime in kept
                if not coprime
            ]
            hexps = h.exps
            survivors = []
            for pr in pairs:
                L, _, i, j, _ = pr
                lex_ = self.pk.unpack(L)
                if _divides(hexps, lex_):
                    li = tuple(map(max, elems[i].exps, hexps))
                    lj = tuple(map(max, elems[j].exps, hexps))
                    if li != lex_ and lj != lex_:
                        continue
                survivors.append(pr)
            pairs = survivors + new_pairs
            heapq.heapify(pairs)
            active = [gi for gi in active if not _divides(hexps, elems[gi].exps)]
            active.append(h_idx)

        def add(monos, coeffs):
            monos, coeffs = self.make_monic(monos, coeffs)
            elems.append(_Elem(monos, coeffs, self.pk))
            if elems[-1].deg == 0:
                raise _UnitFound
            update(len(elems) - 1)
            if len(active) > limits.max_basis:
                raise ResourceLimit(f"basis size exceeded {limits.max_basis}")

        def reducers():
            return [elems[i] for i in active]

        inputs = [self.to_packed(f) for f in polys if f]
        inputs.sort(key=lambda mc: mc[0][0])
        try:
            for monos, coeffs in inputs:
                rm, rc = self.reduce(dict(zip(monos, coeffs)), reducers())
                if rm:
                    add(rm, rc)
            while pairs:
                L, _, i, j, deg = heapq.heappop(pairs)
                if deg > limits.max_degree:
                    raise ResourceLimit(
                        f"S-pair degree {deg} exceeds max_degree {limits.max_degree}"
                    )
                processed += 1
                if limits.max_pairs is not None and processed > limits.max_pairs:
                    raise ResourceLimit(f"more than {limits.max_pairs} S-pairs")
                acc = self.spoly_acc(elems[i], elems[j], L)
                rm, rc = self.reduce(acc, reducers())
                if rm:
                    add(rm, rc)
        except _UnitFound:
            return [elems[-1]]
        log.debug("buchberger: %d pairs processed, %d elements", processed, len(active))
        return self.interreduce([elems[i] for i in active])

    def interreduce(self, basis: list[_Elem]) -> list[_Elem]:
        basis = sorted(basis, key=lambda e: e.lm)
        # drop elements whose leading monomial is divisible by another's
        minimal = []
        for e in basis:
            if not any(_divides(o.exps, e.exps) for o in minimal):
                minimal.append(e)
        out = []
        for idx, e in enumerate(minimal):
            others = minimal[:idx] + minimal[idx + 1:]
            acc = dict(zip(e.tail_m, e.tail_c))
            rm, rc = self.reduce(acc, others)
            out.append(_Elem([e.lm] + rm, [1] + rc, self.pk))
        out.sort(key=lambda e: e.lm, reverse=True)
        return out


def _divides(a: Sequence[int], b: Sequence[int]) -> bool:
    return all(x <= y for x, y in zip(a, b))


# -- public API -----------------------------------------------------------------


class GroebnerBasis:
    """Reduced, monic Groebner basis of an ideal for a fixed monomial order."""

    def __init__(self, ring: PolyRing, order: MonomialOrder, elements, _engine: _Engine | None = None):
        self.ring = ring
        self.order = order
        self.elements = tuple(elements)
        self._engine = _engine or _Engine(ring, order, DEFAULT_LIMITS)
        self._packed = None

    def __iter__(self):
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __repr__(self) -> str:
        return f"GroebnerBasis([{', '.join(map(str, self.elements))}], order={self.order})"

    @property
    def leading_monomials(self) -> list[tuple]:
        return [g.leading_monomial(self.order) for g in self.elements]

    def is_unit(self) -> bool:
        return any(g.is_constant() for g in self.elements)

    def _reducers(self) -> list[_Elem]:
        if self._packed is None:
            eng = self._engine
            self._packed = [_Elem(*eng.to_packed(g), eng.pk) for g in self.elements]
        return self._packed

    def normal_form(self, f: Polynomial) -> Polynomial:
        return normal_form(f, self)

    def contains(self, f: Polynomial) -> bool:
        return normal_form(f, self).is_zero()


def groebner_basis(
    ideal: Ideal | Sequence[Polynomial],
    order: MonomialOrder = DEGREVLEX,
    *,
    chain: bool = True,
    limits: Limits = DEFAULT_LIMITS,
) -> GroebnerBasis:
    """Reduced Groebner basis of ``ideal`` under ``order``.

    Pairs are taken in normal-strategy order (smallest lcm first) and
    skipped by Buchberger's coprime criterion; ``chain=True`` additionally
    applies the Gebauer-Moeller chain criterion.
    """
    if not isinstance(ideal, Ideal):
        ideal = Ideal.of(*ideal)
    engine = _Engine(ideal.ring, order, limits)
    elems = engine.basis(ideal.generators, chain=chain)
    polys = [engine.to_poly([e.lm] + list(e.tail_m), [1] + list(e.tail_c)) for e in elems]
    return GroebnerBasis(ideal.ring, order, polys, engine)


def normal_form(f: Polynomial, G: GroebnerBasis) -> Polynomial:
    if f.ring != G.ring:
        raise RingMismatch(f"{f.ring!r} vs basis ring {G.ring!r}")
    eng = G._engine
    monos, coeffs = eng.to_packed(f)
    rm, rc = eng.reduce(dict(zip(monos, coeffs)), G._reducers())
    return eng.to_poly(rm, rc)


def s_polynomial(f: Polynomial, g: Polynomial, order: MonomialOrder = DEGREVLEX) -> Polynomial:
    lf, lg = f.leading_monomial(order), g.leading_monomial(order)
    lcm = tuple(map(max, lf, lg))
    ring = f.ring
    a = ring.monomial(tuple(x - y for x, y in zip(lcm, lf)), ring.field.inv(f.leading_coefficient(order)))
    b = ring.monomial(tuple(x - y for x, y in zip(lcm, lg)), ring.field.inv(g.leading_coefficient(order)))
    return a * f - b * g


def standard_monomials(G: GroebnerBasis, limit: int | None = None) -> list[tuple] | None:
    """Monomials outside the leading-term ideal, or ``None`` if infinitely many."""
    lms = G.leading_monomials
    nv = G.ring.nvars
    if not _zero_dimensional(lms, nv):
        return None
    out: list[tuple] = []

    def standard(m):
        return not any(_divides(l, m) for l in lms)

    def walk(prefix: list[int], i: int):
        if i == nv:
            out.append(tuple(prefix))
            if limit is not None and len(out) > limit:
                raise ResourceLimit(f"more than {limit} standard monomials")
            return
        e = 0
        while True:
            cand = prefix + [e] + [0] * (nv - i - 1)
            if not standard(cand):
                break
            walk(prefix + [e], i + 1)
            e += 1

    walk([], 0)
    return out


def _zero_dimensional(lms, nv) -> bool:
    for i in range(nv):
        if not any(l[i] and sum(l) == l[i] for l in lms):
            return False
    return True


def quotient_dimension(G: GroebnerBasis):
    """Vector-space dimension of the quotient ring, or ``INFINITE``."""
    if G.is_unit():
        return 0
    mons = standard_monomials(G)
    return INFINITE if mons is None else len(mons)


def ideal_dimension(G: GroebnerBasis) -> int:
    """Krull dimension: the largest variable set containing no leading monomial."""
    if G.is_unit():
        raise UnitIdeal("the unit ideal has no dimension")
    nv = G.ring.nvars
    supports = [frozenset(i for i, e in enumerate(l) if e) for l in G.leading_monomials]
    for size in range(nv, -1, -1):
        for S in itertools.combinations(range(nv), size):
            s = frozenset(S)
            if not any(sup <= s for sup in supports):
                return size
    return 0


def fresh_name(ring: PolyRing, stem: str = "_t") -> str:
    k = 0
    while f"{stem}{k}" in ring.names:
        k += 1
    return f"{stem}{k}"


def saturation_ideal(ideal: Ideal, g: Polynomial) -> Ideal:
    """``ideal + <t*g - 1>`` in the ring with a fresh leading variable ``t``."""
    if g.ring != ideal.ring:
        raise RingMismatch("inequation lives in a different ring")
    name = fresh_name(ideal.ring)
    ring = ideal.ring.extend([name], front=True)
    t = ring.gen(name)
    gens = [f.embed(ring) for f in ideal.generators]
    gens.append(t * g.embed(ring) - 1)
    return Ideal(ring, gens)


def count_with_inequation(
    ideal: Ideal,
    g: Polynomial | None = None,
    order: MonomialOrder = DEGREVLEX,
    *,
    chain: bool = True,
    limits: Limits = DEFAULT_LIMITS,
):
    """Number of solutions of ``ideal`` off ``{g = 0}`` (with multiplicity).

    Uses the Rabinowitsch trick; a constant nonzero ``g`` counts everything.
    """
    if g is None or (g.is_constant() and g):
        G = groebner_basis(ideal, order, chain=chain, limits=limits)
    else:
        G = groebner_basis(saturation_ideal(ideal, g), order, chain=chain, limits=limits)
    return quotient_dimension(G)
