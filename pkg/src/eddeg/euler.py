"""Euler-characteristic route to the ED degree of the affine multiview variety.

Y_n is P^3 blown up at the n camera centers, with hyperplane class H and
exceptional classes E_i.  The Chow ring relations used throughout are
H.E_i = 0, E_i.E_j = 0 (i != j), and the degree map is normalized by
int H^3 = int E_i^3 = 1.

Every function accepts a concrete ``n`` (int) or ``SYMBOLIC``; in the latter
case the answers are polynomials in Q[n] and the n exceptional classes,
which only ever enter symmetrically, are carried as one aggregated sum.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .errors import NotIsolated, NotTopDegree
from .fields import QQ
from .groebner import Ideal, groebner_basis, quotient_dimension
from .poly import Polynomial, PolyRing

SYMBOLIC = None
N_RING = PolyRing(["n"], QQ)
N = N_RING.gen("n")

Coeff = Union[Fraction, Polynomial]


def _size(n):
    return N if n is SYMBOLIC else Fraction(n)


def binomial(n, k: int) -> Coeff:
    """n choose k, as a number or as a polynomial in n."""
    x = _size(n)
    out = Fraction(1) if n is not SYMBOLIC else N_RING.one
    for j in range(k):
        out = out * (x - j)
    return out * Fraction(1, _fact(k))


def _fact(k: int) -> int:
    out = 1
    for j in range(2, k + 1):
        out *= j
    return out


def _simplify(c: Coeff):
    """Integers come back as ``int``; other rationals and polynomials as-is."""
    if isinstance(c, Fraction) and c.denominator == 1:
        return int(c)
    return c


# -- Chow ring ---------------------------------------------------------------


class ChowClass:
    """Element of the Chow ring of Y_n (degrees 0..3).

    ``h[k]`` is the coefficient of H^k (``h[0]`` the unit part); ``e`` holds
    the coefficients of (E, E^2, E^3) per blown-up point, or a single triple
    standing for ``sum_i`` in symbolic mode.
    """

    __slots__ = ("n", "h", "e")

    def __init__(self, n, h: Sequence[Coeff], e):
        self.n = n
        self.h = tuple(h) + (0,) * (4 - len(h))
        if n is SYMBOLIC:
            self.e = tuple(e) + (0,) * (3 - len(e))
        else:
            if len(e) != n:
                raise ValueError(f"need exceptional coefficients for {n} points")
            self.e = tuple(tuple(x) + (0,) * (3 - len(x)) for x in e)

    # constructors -----------------------------------------------------------

    @classmethod
    def zero(cls, n) -> "ChowClass":
        return cls(n, (0, 0, 0, 0), _zero_e(n))

    @classmethod
    def unit(cls, n) -> "ChowClass":
        return cls(n, (1, 0, 0, 0), _zero_e(n))

    @classmethod
    def hyperplane(cls, n) -> "ChowClass":
        return cls(n, (0, 1, 0, 0), _zero_e(n))

    @classmethod
    def exceptional_sum(cls, n) -> "ChowClass":
        if n is SYMBOLIC:
            return cls(n, (0,), (1, 0, 0))
        return cls(n, (0,), [(1, 0, 0)] * n)

    @classmethod
    def exceptional(cls, n: int, i: int) -> "ChowClass":
        if n is SYMBOLIC:
            raise ValueError("single exceptional classes need a concrete n")
        e = [(0, 0, 0)] * n
        e[i] = (1, 0, 0)
        return cls(n, (0,), e)

    # ring structure ------------------------------------------------------

    def _check(self, other: "ChowClass"):
        if other.n != self.n:
            raise ValueError("classes on different blowups")

    def _coerce(self, other) -> "ChowClass":
        if isinstance(other, ChowClass):
            self._check(other)
            return other
        return ChowClass.unit(self.n).scale(other)

    def _map_e(self, fn, *others):
        if self.n is SYMBOLIC:
            return fn(self.e, *(o.e for o in others))
        return [fn(a, *(o.e[i] for o in others)) for i, a in enumerate(self.e)]

    def __add__(self, other) -> "ChowClass":
        other = self._coerce(other)
        h = tuple(a + b for a, b in zip(self.h, other.h))
        e = self._map_e(lambda a, b: tuple(x + y for x, y in zip(a, b)), other)
        return ChowClass(self.n, h, e)

    __radd__ = __add__

    def __neg__(self) -> "ChowClass":
        return self.scale(-1)

    def __sub__(self, other) -> "ChowClass":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "ChowClass":
        return (-self) + other

    def scale(self, c) -> "ChowClass":
        h = tuple(c * a for a in self.h)
        e = self._map_e(lambda a: tuple(c * x for x in a))
        return ChowClass(self.n, h, e)

    def __mul__(self, other) -> "ChowClass":
        if not isinstance(other, ChowClass):
            return self.scale(other)
        self._check(other)
        a, b = self.h, other.h
        h = tuple(sum((a[i] * b[k - i] for i in range(k + 1)), 0) for k in range(4))
        a0, b0 = a[0], b[0]

        def mul_e(x, y):
            # unit part of each factor scales the other; E_i^a E_i^b = E_i^(a+b)
            out = []
            for k in range(1, 4):
                v = a0 * y[k - 1] + b0 * x[k - 1]
                for i in range(1, k):
                    v = v + x[i - 1] * y[k - i - 1]
                out.append(v)
            return tuple(out)

        return ChowClass(self.n, h, self._map_e(mul_e, other))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "ChowClass":
        out = ChowClass.unit(self.n)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, ChowClass):
            return NotImplemented
        d = self - other
        return not any(d.h) and not any(any(x) for x in _e_rows(d))

    # grading and degree -----------------------------------------------------

    def graded(self, k: int) -> "ChowClass":
        """Degree-``k`` piece (k = 0..3)."""
        h = [0, 0, 0, 0]
        h[k] = self.h[k]
        if k == 0:
            return ChowClass(self.n, h, _zero_e(self.n))
        e = self._map_e(lambda a: tuple(a[j] if j == k - 1 else 0 for j in range(3)))
        return ChowClass(self.n, h, e)

    def truncate(self, k: int) -> "ChowClass":
        out = ChowClass.zero(self.n)
        for j in range(k + 1):
            out = out + self.graded(j)
        return out

    def h_coefficient(self, k: int):
        return _simplify(self.h[k])

    def e_coefficient(self, k: int, i: int | None = None):
        """Coefficient of E^k (aggregated in symbolic mode, of E_i^k otherwise)."""
        if self.n is SYMBOLIC:
            return _simplify(self.e[k - 1])
        if i is None:
            vals = {self.e[j][k - 1] for j in range(self.n)}
            if len(vals) != 1:
                raise ValueError("class is not symmetric in the exceptional divisors")
            return _simplify(vals.pop())
        return _simplify(self.e[i][k - 1])

    def integrate(self):
        """Degree map; raises :class:`NotTopDegree` on lower-degree parts."""
        low = self.truncate(2)
        if any(low.h) or any(any(x) for x in _e_rows(low)):
            raise NotTopDegree("class has components below degree 3")
        if self.n is SYMBOLIC:
            return _simplify(self.h[3] + N * self.e[2])
        total = self.h[3]
        for row in self.e:
            total = total + row[2]
        return _simplify(total)

    def __repr__(self) -> str:
        def coeff(c):
            s = str(_simplify(c))
            return f"({s})" if " " in s else s

        parts = [f"{coeff(c)}*H^{k}" for k, c in enumerate(self.h) if c]
        if self.n is SYMBOLIC:
            parts += [f"{coeff(c)}*sum(E^{k + 1})" for k, c in enumerate(self.e) if c]
        else:
            for i, row in enumerate(self.e):
                parts += [f"{coeff(c)}*E{i + 1}^{k + 1}" for k, c in enumerate(row) if c]
        return "ChowClass(" + (" + ".join(parts) or "0") + ")"


def _zero_e(n):
    return (0, 0, 0) if n is SYMBOLIC else [(0, 0, 0)] * n


def _e_rows(c: ChowClass):
    return [c.e] if c.n is SYMBOLIC else list(c.e)


def chow_integrate(c: ChowClass, n=None):
    if n is not None and n != c.n:
        raise ValueError("class lives on a different blowup")
    return c.integrate()


# -- Chern classes -----------------------------------------------------------


class ChernSeries:
    """Total Chern class 1 + c1 + c2 + c3, truncated past degree 3."""

    def __init__(self, total: ChowClass):
        if total.h[0] != 1 and total.h[0] != Fraction(1):
            raise ValueError("total Chern class must start with 1")
        self.total = total.truncate(3)

    def __getitem__(self, k: int) -> ChowClass:
        return self.total.graded(k)

    def __mul__(self, other: "ChernSeries") -> "ChernSeries":
        return ChernSeries(self.total * other.total)

    def inverse(self) -> "ChernSeries":
        x = self.total - 1
        acc = ChowClass.unit(self.total.n)
        term = ChowClass.unit(self.total.n)
        for _ in range(3):
            term = term * (-x)
            acc = acc + term
        return ChernSeries(acc)

    def __truediv__(self, other: "ChernSeries") -> "ChernSeries":
        return self * other.inverse()


def chern_total_Yn(n) -> ChernSeries:
    """(1 + H)^4 + sum_i [(1 + E_i)(1 - E_i)^3 - 1]."""
    if n is not SYMBOLIC and n < 1:
        raise ValueError("need at least one blown-up point")
    H = ChowClass.hyperplane(n)
    total = (H + 1) ** 4
    if n is SYMBOLIC:
        E = ChowClass(n, (0,), (1, 0, 0))
        # each point contributes (1+E_i)(1-E_i)^3 - 1, which has no unit part
        local = (E + 1) * (1 - E) ** 3 - 1
        total = total + local
    else:
        for i in range(n):
            E = ChowClass.exceptional(n, i)
            total = total + ((E + 1) * (1 - E) ** 3 - 1)
    return ChernSeries(total)


def chi_Yn(n):
    """Gauss-Bonnet: the degree of c3 of Y_n."""
    return chern_total_Yn(n)[3].integrate()


def class_of_DQ(n, exceptional_sign: int = -1) -> ChowClass:
    """2n H + 2 * sign * sum E_i; the default sign is the pullback-consistent one."""
    H = ChowClass.hyperplane(n)
    return H.scale(2 * _size(n)) + ChowClass.exceptional_sum(n).scale(2 * exceptional_sign)


def smooth_member_c2(n, exceptional_sign: int = -1) -> ChowClass:
    """Degree-2 part of c(T_Y) / (1 + [D'])."""
    D = class_of_DQ(n, exceptional_sign)
    return (chern_total_Yn(n) / ChernSeries(D + 1))[2]


def chi_smooth_member(n, exceptional_sign: int = -1):
    """Euler characteristic of a smooth divisor D' in the class of D_Q."""
    D = class_of_DQ(n, exceptional_sign)
    return (smooth_member_c2(n, exceptional_sign) * D).integrate()


# -- Milnor fibers -------------------------------------------------------------


def milnor_number(f: Polynomial, point: Sequence | None = None, max_N: int = 30) -> int:
    """Local Milnor number of ``f`` at ``point`` (origin by default).

    Computes dim k[x]/(J + m^N) for N = 1, 2, ... where J is the Jacobian
    ideal moved to the origin; two equal consecutive values mean m^N lies in
    J locally, so the value is the local multiplicity.
    """
    ring = f.ring
    if point is None:
        point = [0] * ring.nvars
    if len(point) != ring.nvars:
        raise ValueError("point has wrong dimension")
    shift = {name: ring.gen(name) + ring.field.convert(c) for name, c in zip(ring.names, point)}
    g = f.substitute(shift)
    jac = [g.diff(v) for v in ring.names]
    prev = None
    for deg in range(1, max_N + 1):
        power = _monomials_of_degree(ring, deg)
        dim = quotient_dimension(groebner_basis(Ideal(ring, jac + power)))
        if dim == prev:
            return dim
        prev = dim
    raise NotIsolated(f"Jacobian quotient did not stabilize by N={max_N}")


def _monomials_of_degree(ring: PolyRing, d: int) -> list[Polynomial]:
    out = []

    def rec(prefix, left, i):
        if i == ring.nvars - 1:
            out.append(ring.monomial(prefix + [left]))
            return
        for e in range(left, -1, -1):
            rec(prefix + [e], left - e, i + 1)

    rec([], d, 0)
    return out


class MilnorModel(enum.Enum):
    SMOOTH = "x"
    NODE = "x*y"
    UMBRELLA = "x*y^2 - z^2"
    TRIPLE = "x^2*y^2 + x^2*z^2 + y^2*z^2 - x^2*y^2*z^2"

    @property
    def equation(self) -> Polynomial:
        return MODEL_RING.parse(self.value)


MODEL_RING = PolyRing(["x", "y", "z"], QQ)

# Euler characteristics of the building blocks of the model fibers
CHI_POINT, CHI_LINE, CHI_CSTAR, CHI_PLANE, CHI_P1 = 1, 1, 0, 1, 2
# local equation whose Milnor fiber G'_t the triple-point fiber covers 8:1
TRIPLE_QUOTIENT = "x*y + x*z + y*z - x*y*z"


def model_fiber_chi(model: MilnorModel) -> int:
    """Reduced Euler characteristic of the Milnor fiber of a local model."""
    if model is MilnorModel.SMOOTH:
        fiber = CHI_POINT  # contractible
    elif model is MilnorModel.NODE:
        fiber = CHI_CSTAR * CHI_LINE  # {xy = 1} x C
    elif model is MilnorModel.UMBRELLA:
        # double cover of C^2 branched along {xy = t} ~ C*
        fiber = 2 * CHI_PLANE - CHI_CSTAR
    elif model is MilnorModel.TRIPLE:
        # (x,y,z) -> (x^2,y^2,z^2) is 8:1 onto G'_t away from punctured discs
        mu = milnor_number(MODEL_RING.parse(TRIPLE_QUOTIENT))
        fiber = 8 * (1 + mu)
    else:  # pragma: no cover
        raise ValueError(model)
    return fiber - 1


# -- strata of D_Q ---------------------------------------------------------------


@dataclass(frozen=True)
class Stratum:
    name: str
    count: Coeff  # how many strata of this type
    mu: int
    chi_off_member: Coeff | None  # chi(S \ D'); unused when mu == 0


def line_meets_member(n, exceptional_sign: int = -1):
    """Points where D' meets the preimage of a general line (class H^2)."""
    return (class_of_DQ(n, exceptional_sign) * ChowClass.hyperplane(n) ** 2).integrate()


def stratum_table(n) -> list[Stratum]:
    if n is not SYMBOLIC and n < 2:
        raise ValueError("need at least two cameras")
    x = _size(n)
    # S^0_ij: P^1 minus 4 umbrella points, n-2 triple points and the 2n points on D'
    chi_node = CHI_P1 - 4 - (x - 2) - line_meets_member(n)
    return [
        Stratum("S0", Fraction(1) if n is not SYMBOLIC else N_RING.one,
                model_fiber_chi(MilnorModel.SMOOTH), None),
        Stratum("S0_ij", binomial(n, 2), model_fiber_chi(MilnorModel.NODE), chi_node),
        Stratum("S1_ij", binomial(n, 2), model_fiber_chi(MilnorModel.UMBRELLA), Fraction(4)),
        Stratum("S_ijk", binomial(n, 3), model_fiber_chi(MilnorModel.TRIPLE), Fraction(1)),
    ]


def chi_DQ(n):
    """chi(D') minus sum over strata of mu_S * chi(S \\ D')."""
    total = chi_smooth_member(n)
    for s in stratum_table(n):
        if s.mu:
            total = total - s.count * s.chi_off_member * s.mu
    return _simplify(total)


def chi_Dinfty(n):
    """Inclusion-exclusion over D_inf,i (Bl_pt P^2), pairwise lines, triple points."""
    return _simplify(4 * _size(n) - 2 * binomial(n, 2) + binomial(n, 3))


def chi_DQ_cap_Dinfty(n):
    """Inclusion-exclusion over the lines K_i^+, K_i^-, L_ij and their meeting points."""
    x = _size(n)
    lines = 2 * x + 2 * x + 2 * binomial(n, 2)
    k_meets_l = 2 * x * (x - 1)  # K_i^{+-} meets L_ij in one point
    # L_ij, L_ik, L_jk share one point: 3 pairwise overlaps, 1 triple
    triple = 2 * binomial(n, 3)
    return _simplify(lines - k_meets_l - triple)


def chi_complement(n):
    """chi(Y_n minus (D_Q union D_inf)) by additivity."""
    return _simplify(chi_Yn(n) - chi_DQ(n) - chi_Dinfty(n) + chi_DQ_cap_Dinfty(n))


def ed_degree_via_euler(n):
    """(-1)^dim X chi(X cap U) with dim X = 3."""
    return _simplify(-_as_coeff(chi_complement(n)))


def _as_coeff(v):
    return Fraction(v) if isinstance(v, int) else v


EULER_COLUMNS = ("n", "chi_Yn", "chi_Dprime", "chi_DQ", "chi_Dinf", "chi_DQ_cap_Dinf", "ed_degree")


def euler_row(n) -> dict:
    return {
        "n": "n" if n is SYMBOLIC else n,
        "chi_Yn": chi_Yn(n),
        "chi_Dprime": chi_smooth_member(n),
        "chi_DQ": chi_DQ(n),
        "chi_Dinf": chi_Dinfty(n),
        "chi_DQ_cap_Dinf": chi_DQ_cap_Dinfty(n),
        "ed_degree": ed_degree_via_euler(n),
    }


def format_value(v) -> object:
    """JSON-friendly rendering: ints stay ints, rationals and polynomials become strings."""
    if isinstance(v, int):
        return v
    if isinstance(v, Fraction):
        return int(v) if v.denominator == 1 else str(v)
    if isinstance(v, Polynomial):
        if v.is_constant():
            return format_value(v.constant_coefficient())
        return str(v)
    return v
