"""Critical-point ideals and the multi-trial ED degree count.

The ED degree of X is the number of critical points of the squared distance
to a generic data point on the smooth part of X.  For an implicit X of
codimension c this is the zero set of I(X) plus the (c+1)-minors of the
Jacobian bordered by the row ``z - alpha``, with the singular locus removed by
a Rabinowitsch inequation.  For a parametrized X it is the vanishing of the
gradient of ``sum (phi_i(t) - alpha_i)^2`` with denominators cleared.

Counts are taken over GF(p) at random data; a certificate is issued only when
every trial returns the same number.
"""

from __future__ import annotations

import itertools
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, Iterable, Sequence

from .errors import (
    CodimensionOutOfRange,
    NonGeneric,
    PolySyntaxError,
    ZeroDenominator,
)
from .fields import ALT_PRIME, DEFAULT_PRIME, QQ, PrimeField, make_field
from .groebner import (
    DEFAULT_LIMITS,
    Ideal,
    Limits,
    count_with_inequation,
    groebner_basis,
    ideal_dimension,
)
from .poly import DEGREVLEX, MonomialOrder, Polynomial, PolyRing, determinant, parse_poly, read_poly_lines

QQ_SAMPLE_RANGE = 10 ** 4


@dataclass(frozen=True)
class VarietyPresentation:
    """An affine variety given by equations or by a rational parametrization.

    Implicit: ``generators`` in ``ring`` (the ambient coordinates) and the
    codimension ``codim``.  Parametric: ``components`` is a tuple of
    ``(numerator, denominator)`` pairs over ``ring`` (the parameters).
    """

    mode: str
    ring: PolyRing
    generators: tuple = ()
    codim: int = 0
    components: tuple = ()

    @classmethod
    def implicit(cls, generators: Sequence[Polynomial], codim: int) -> "VarietyPresentation":
        gens = tuple(g for g in generators if g)
        if not gens:
            raise ValueError("implicit presentation needs a nonzero generator")
        ring = gens[0].ring
        n = ring.nvars
        if not 1 <= codim <= n:
            raise CodimensionOutOfRange(f"codimension {codim} not in [1, {n}]")
        return cls("implicit", ring, gens, codim)

    @classmethod
    def parametric(cls, components: Sequence) -> "VarietyPresentation":
        comps = []
        for comp in components:
            num, den = comp if isinstance(comp, tuple) else (comp, comp.ring.one)
            if den.is_zero():
                raise ZeroDenominator(f"component {num} has a zero denominator")
            comps.append((num, den))
        if not comps:
            raise ValueError("parametric presentation needs components")
        ring = comps[0][0].ring
        for num, den in comps:
            if num.ring != ring or den.ring != ring:
                raise ValueError("components must share the parameter ring")
        return cls("parametric", ring, components=tuple(comps))

    @property
    def ambient_dim(self) -> int:
        return self.ring.nvars if self.mode == "implicit" else len(self.components)

    def change_field(self, field) -> "VarietyPresentation":
        if self.mode == "implicit":
            return VarietyPresentation(
                "implicit", self.ring.with_field(field),
                tuple(g.change_field(field) for g in self.generators), self.codim,
            )
        return VarietyPresentation(
            "parametric", self.ring.with_field(field),
            components=tuple((a.change_field(field), b.change_field(field)) for a, b in self.components),
        )

    def transformed(self, Q: Sequence[Sequence[Fraction]], v: Sequence[Fraction]) -> "VarietyPresentation":
        """Image under ``z -> Q z + v`` for an orthogonal ``Q`` (implicit mode).

        The new generators are the old ones composed with ``z -> Q^T (z - v)``.
        """
        if self.mode != "implicit":
            raise ValueError("isometries are applied to implicit presentations")
        ring = self.ring
        z = ring.gens()
        n = ring.nvars
        images = {}
        for i, name in enumerate(ring.names):
            images[name] = sum((Q[j][i] * (z[j] - v[j]) for j in range(n)), ring.zero)
        return VarietyPresentation(
            "implicit", ring, tuple(g.substitute(images) for g in self.generators), self.codim
        )

    def check_codim(self) -> int:
        """Cross-check ``codim`` against the Krull dimension of the ideal."""
        dim = ideal_dimension(groebner_basis(Ideal(self.ring, self.generators)))
        if self.ring.nvars - dim != self.codim:
            raise CodimensionOutOfRange(
                f"declared codimension {self.codim}, ideal has codimension {self.ring.nvars - dim}"
            )
        return dim


@dataclass(frozen=True)
class LinearFunctional:
    coefficients: tuple
    constant: object = 0

    def __post_init__(self):
        if not any(self.coefficients):
            raise ValueError("linear functional must have a nonzero coefficient")


@dataclass(frozen=True)
class Trial:
    prime: int
    seed: int
    count: object

    def as_dict(self) -> dict:
        count = self.count if isinstance(self.count, int) else "INFINITE"
        return {"prime": self.prime, "seed": self.seed, "count": count}


@dataclass(frozen=True)
class EDCertificate:
    """Outcome of a multi-trial count; ``count`` is set only when all trials agree."""

    count: int | None
    trials: tuple
    agreed: bool

    @classmethod
    def from_trials(cls, trials: Iterable[Trial]) -> "EDCertificate":
        trials = tuple(trials)
        values = {t.count for t in trials}
        agreed = len(values) == 1 and bool(trials)
        count = next(iter(values)) if agreed else None
        return cls(count, trials, agreed)

    def as_dict(self) -> dict:
        count = self.count
        if count is not None and not isinstance(count, int):
            count = "INFINITE"
        return {
            "count": count,
            "agreed": self.agreed,
            "trials": [t.as_dict() for t in self.trials],
        }


@dataclass(frozen=True)
class Protocol:
    """How many trials to run, over which primes, from which base seed.

    Trial ``i`` uses ``primes[i % len(primes)]`` and seed ``seed + i``.
    A prime of 0 means exact rational arithmetic for that trial.
    """

    trials: int = 3
    primes: tuple = (DEFAULT_PRIME, ALT_PRIME)
    seed: int = 0
    order: MonomialOrder = DEGREVLEX
    limits: Limits = DEFAULT_LIMITS
    chain: bool = True
    workers: int = 1

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("need at least one trial")
        if not self.primes:
            raise ValueError("need at least one prime")

    def schedule(self) -> list[tuple[int, int]]:
        return [(self.primes[i % len(self.primes)], self.seed + i) for i in range(self.trials)]


def run_protocol(job: Callable[[int, int], object], protocol: Protocol, *, strict: bool = True) -> EDCertificate:
    """Run ``job(prime, seed)`` for every scheduled trial and assemble a certificate.

    With ``strict`` a disagreement raises :class:`NonGeneric` carrying all raw counts.
    """
    schedule = protocol.schedule()
    if protocol.workers > 1 and len(schedule) > 1:
        with ProcessPoolExecutor(max_workers=protocol.workers) as pool:
            counts = list(pool.map(job, *zip(*schedule)))
    else:
        counts = [job(p, s) for p, s in schedule]
    cert = EDCertificate.from_trials(Trial(p, s, c) for (p, s), c in zip(schedule, counts))
    if strict and not cert.agreed:
        raw = ", ".join(f"{t.count} (p={t.prime}, seed={t.seed})" for t in cert.trials)
        raise NonGeneric(f"trials disagree: {raw}", cert.trials)
    return cert


# -- sampling ------------------------------------------------------------------


def random_scalar(field, rng: random.Random):
    if isinstance(field, PrimeField):
        return rng.randrange(field.p)
    return Fraction(rng.randint(-QQ_SAMPLE_RANGE, QQ_SAMPLE_RANGE))


def random_point(field, n: int, rng: random.Random) -> tuple:
    return tuple(random_scalar(field, rng) for _ in range(n))


# -- minors --------------------------------------------------------------------


def jacobian(generators: Sequence[Polynomial], names: Sequence[str]) -> list[list[Polynomial]]:
    return [[g.diff(v) for v in names] for g in generators]


def minors(matrix: Sequence[Sequence[Polynomial]], size: int, ring: PolyRing) -> list[Polynomial]:
    """All ``size x size`` minors (nonzero ones only), in a fixed order."""
    rows, cols = len(matrix), len(matrix[0]) if matrix else 0
    out = []
    for R in itertools.combinations(range(rows), size):
        for C in itertools.combinations(range(cols), size):
            d = determinant([[matrix[r][c] for c in C] for r in R], ring)
            if d:
                out.append(d)
    return out


def smooth_locus_inequation(V: VarietyPresentation, rng: random.Random) -> Polynomial:
    """Random linear combination of the c x c Jacobian minors."""
    ring = V.ring
    jac = jacobian(V.generators, ring.names)
    combo = ring.zero
    for m in minors(jac, V.codim, ring):
        combo = combo + m.scale(random_scalar(ring.field, rng) or 1)
    return combo


def _require_implicit(V: VarietyPresentation):
    if V.mode != "implicit":
        raise ValueError("operation needs an implicit presentation")
    n = V.ring.nvars
    if not 1 <= V.codim <= n:
        raise CodimensionOutOfRange(f"codimension {V.codim} not in [1, {n}]")
    if V.codim > len(V.generators):
        raise CodimensionOutOfRange(f"codimension {V.codim} exceeds generator count {len(V.generators)}")


def _bordered_minors(V: VarietyPresentation, first_row: Sequence[Polynomial], ring: PolyRing) -> list[Polynomial]:
    gens = [g.embed(ring) for g in V.generators]
    matrix = [list(first_row)] + jacobian(gens, V.ring.names)
    return minors(matrix, V.codim + 1, ring)


# -- ideals ------------------------------------------------------------------


def conormal_ideal(V: VarietyPresentation, dual_names: Sequence[str] | None = None) -> Ideal:
    """Ideal of the conormal variety in the 2n variables ``(z, u)``."""
    _require_implicit(V)
    n = V.ring.nvars
    if dual_names is None:
        dual_names = [f"u{i + 1}" for i in range(n)]
    if len(dual_names) != n:
        raise ValueError("need one dual variable per ambient coordinate")
    ring = V.ring.extend(dual_names)
    u = [ring.gen(name) for name in dual_names]
    gens = [g.embed(ring) for g in V.generators]
    return Ideal(ring, gens + _bordered_minors(V, u, ring))


def ed_critical_ideal(V: VarietyPresentation, alpha: Sequence, rng: random.Random | None = None):
    """``(ideal, inequation)`` whose solutions off the inequation are the ED critical points."""
    _require_implicit(V)
    ring = V.ring
    if len(alpha) != ring.nvars:
        raise ValueError("data point has wrong dimension")
    rng = rng or random.Random(0)
    row = [z - a for z, a in zip(ring.gens(), alpha)]
    ideal = Ideal(ring, list(V.generators) + _bordered_minors(V, row, ring))
    return ideal, smooth_locus_inequation(V, rng)


def linear_critical_ideal(V: VarietyPresentation, l: LinearFunctional | Sequence, rng: random.Random | None = None):
    _require_implicit(V)
    ring = V.ring
    coeffs = l.coefficients if isinstance(l, LinearFunctional) else tuple(l)
    if len(coeffs) != ring.nvars:
        raise ValueError("functional has wrong dimension")
    rng = rng or random.Random(0)
    row = [ring.constant(c) for c in coeffs]
    ideal = Ideal(ring, list(V.generators) + _bordered_minors(V, row, ring))
    return ideal, smooth_locus_inequation(V, rng)


def parametric_critical_system(V: VarietyPresentation, alpha: Sequence):
    """Cleared gradient of ``sum (phi_i - alpha_i)^2`` plus the denominator product.

    Each component N/D contributes ``(N - a D)(dN D - N dD) / D^3``; all terms
    are brought over the product of the cubes of the distinct denominators.
    """
    if V.mode != "parametric":
        raise ValueError("operation needs a parametric presentation")
    ring = V.ring
    if len(alpha) != len(V.components):
        raise ValueError("data point has wrong dimension")
    dens: list[Polynomial] = []
    for _, den in V.components:
        if den.is_zero():
            raise ZeroDenominator("zero denominator in parametrization")
        if den not in dens:
            dens.append(den)
    cubes = [d ** 3 for d in dens]
    # product of the other denominators' cubes, one per distinct denominator
    cofactors = []
    for k in range(len(dens)):
        prod = ring.one
        for j, c in enumerate(cubes):
            if j != k:
                prod = prod * c
        cofactors.append(prod)
    equations = []
    for var in ring.names:
        total = ring.zero
        for (num, den), a in zip(V.components, alpha):
            k = dens.index(den)
            resid = num - den * a
            deriv = num.diff(var) * den - num * den.diff(var)
            if deriv:
                total = total + resid * deriv * cofactors[k]
        equations.append(total)
    inequation = ring.one
    for d in dens:
        inequation = inequation * d
    return Ideal(ring, equations), inequation


# -- counting ----------------------------------------------------------------


def _trial_field(V: VarietyPresentation, prime: int):
    field = make_field(prime)
    return field, (V if V.ring.field == field else V.change_field(field))


def ed_count(V: VarietyPresentation, prime: int, seed: int, *, order=DEGREVLEX, limits=DEFAULT_LIMITS, chain=True):
    """One trial: a random data point, its critical system, and the count."""
    rng = random.Random(seed)
    field, W = _trial_field(V, prime)
    alpha = random_point(field, W.ambient_dim, rng)
    if W.mode == "implicit":
        ideal, ineq = ed_critical_ideal(W, alpha, rng)
    else:
        ideal, ineq = parametric_critical_system(W, alpha)
    return count_with_inequation(ideal, ineq, order, chain=chain, limits=limits)


def linear_count(V: VarietyPresentation, prime: int, seed: int, l=None, *, order=DEGREVLEX,
                 limits=DEFAULT_LIMITS, chain=True):
    rng = random.Random(seed)
    field, W = _trial_field(V, prime)
    if l is None:
        coeffs = random_point(field, W.ring.nvars, rng)
    else:
        coeffs = tuple(field.convert(c) for c in (l.coefficients if isinstance(l, LinearFunctional) else l))
    ideal, ineq = linear_critical_ideal(W, coeffs, rng)
    return count_with_inequation(ideal, ineq, order, chain=chain, limits=limits)


class _Job:
    """Picklable ``(prime, seed) -> count`` closure for process pools."""

    def __init__(self, fn, *args, **kwargs):
        self.fn, self.args, self.kwargs = fn, args, kwargs

    def __call__(self, prime, seed):
        return self.fn(*self.args, prime, seed, **self.kwargs)


def ed_degree(V: VarietyPresentation, protocol: Protocol = Protocol(), *, strict: bool = True) -> EDCertificate:
    job = _Job(ed_count, V, order=protocol.order, limits=protocol.limits, chain=protocol.chain)
    return run_protocol(job, protocol, strict=strict)


def linear_critical_count(V: VarietyPresentation, l=None, protocol: Protocol = Protocol(), *,
                          strict: bool = True) -> EDCertificate:
    """Critical points of a linear function on the smooth part of V.

    ``l=None`` draws a fresh generic functional in every trial.
    """
    _require_implicit(V)
    return run_protocol(_LinearJob(V, l, protocol), protocol, strict=strict)


class _LinearJob:
    def __init__(self, V, l, protocol):
        self.V, self.l, self.protocol = V, l, protocol

    def __call__(self, prime, seed):
        p = self.protocol
        return linear_count(self.V, prime, seed, self.l, order=p.order, limits=p.limits, chain=p.chain)


# -- variety files -------------------------------------------------------------


def parse_variety(text: str, field=QQ) -> VarietyPresentation:
    """Read an implicit (``# vars:``/``# codim:``) or parametric (``# params:``) file."""
    headers = {}
    for line in text.splitlines():
        s = line.strip()
        if s.startswith("#") and ":" in s:
            key, _, value = s[1:].partition(":")
            headers[key.strip().lower()] = value.strip()
    body = list(read_poly_lines(text))
    if "params" in headers:
        names = _names(headers["params"])
        ring = PolyRing(names, field)
        comps = []
        for lineno, line in body:
            num_text, sep, den_text = line.partition("|")
            try:
                num = parse_poly(num_text, ring)
                den = parse_poly(den_text, ring) if sep else ring.one
            except PolySyntaxError as exc:
                raise PolySyntaxError(f"line {lineno}: {exc.args[0]}", exc.position, line) from None
            comps.append((num, den))
        return VarietyPresentation.parametric(comps)
    if "vars" not in headers:
        raise ValueError("variety file needs a '# vars:' or '# params:' header")
    ring = PolyRing(_names(headers["vars"]), field)
    codim = int(headers.get("codim", 1))
    gens = []
    for lineno, line in body:
        try:
            gens.append(parse_poly(line, ring))
        except PolySyntaxError as exc:
            raise PolySyntaxError(f"line {lineno}: {exc.args[0]}", exc.position, line) from None
    return VarietyPresentation.implicit(gens, codim)


def load_variety(path: str | Path, field=QQ) -> VarietyPresentation:
    return parse_variety(Path(path).read_text(encoding="utf-8"), field)


def _names(text: str) -> list[str]:
    return [s.strip() for s in text.replace(" ", ",").split(",") if s.strip()]
