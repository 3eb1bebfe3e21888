"""The affine multiview variety of n generic cameras and its ED degree.

Each camera A_i (3x4) is twisted by a random invertible 3x3 matrix T_i, which
amounts to choosing a generic affine chart of its image plane, and then
dehomogenized by the third row.  With y = (y1, y2, y3) an affine chart of
P^3 the variety is parametrized by

    y -> ( row1(T_i A_i)(y,1) / row3(T_i A_i)(y,1),
           row2(T_i A_i)(y,1) / row3(T_i A_i)(y,1) )_{i=1..n}
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import sympy

from .critical import (
    EDCertificate,
    Protocol,
    VarietyPresentation,
    parametric_critical_system,
    random_point,
    run_protocol,
)
from .errors import DegenerateChart, InternalError, NotInteger
from .fields import make_field
from .groebner import count_with_inequation
from .poly import DEGREVLEX, PolyRing

ENTRY_RANGE = 100
MAX_ATTEMPTS = 100
PARAMS = ("y1", "y2", "y3")

Matrix = tuple  # tuple of row tuples of Fraction


def _mat(rows) -> Matrix:
    return tuple(tuple(Fraction(x) for x in row) for row in rows)


def _sym(m: Matrix) -> sympy.Matrix:
    return sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in row] for row in m])


def _matmul(a: Matrix, b: Matrix) -> Matrix:
    return tuple(
        tuple(sum((a[i][k] * b[k][j] for k in range(len(b))), Fraction(0)) for j in range(len(b[0])))
        for i in range(len(a))
    )


def _random_int_matrix(rng: random.Random, rows: int, cols: int) -> Matrix:
    return _mat([[rng.randint(-ENTRY_RANGE, ENTRY_RANGE) for _ in range(cols)] for _ in range(rows)])


def camera_center(A: Matrix) -> tuple:
    """Generator of the kernel of a full-rank 3x4 camera, scaled to integers."""
    ker = _sym(A).nullspace()
    if len(ker) != 1:
        raise ValueError("camera matrix is not of full rank")
    v = ker[0]
    den = sympy.ilcm(*[sympy.fraction(x)[1] for x in v])
    return tuple(Fraction(int(x * den)) for x in v)


def _proportional(u: Sequence, v: Sequence) -> bool:
    return sympy.Matrix([list(u), list(v)]).rank() < 2


@dataclass(frozen=True)
class CameraRig:
    n: int
    cameras: tuple
    chart_twists: tuple
    seed: int | None = None
    space_twist: Matrix | None = None

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("need at least two cameras")
        if len(self.cameras) != self.n or len(self.chart_twists) != self.n:
            raise ValueError("need one camera and one chart twist per view")
        self.validate()

    def validate(self) -> None:
        centers = []
        for A in self.cameras:
            if _sym(A).rank() != 3:
                raise ValueError("camera matrix is not of full rank")
            centers.append(camera_center(A))
        for T in self.chart_twists:
            if _sym(T).det() == 0:
                raise ValueError("chart twist is singular")
        if self.space_twist is not None and _sym(self.space_twist).det() == 0:
            raise ValueError("space twist is singular")
        for i in range(self.n):
            for j in range(i + 1, self.n):
                if _proportional(centers[i], centers[j]):
                    raise ValueError(f"cameras {i} and {j} share a center")

    def effective_cameras(self) -> list[Matrix]:
        """T_i A_i (W), the matrices whose rows give numerators and denominators."""
        out = []
        for A, T in zip(self.cameras, self.chart_twists):
            M = _matmul(T, A)
            if self.space_twist is not None:
                M = _matmul(M, self.space_twist)
            out.append(M)
        return out

    def with_chart_twists(self, twists) -> "CameraRig":
        return CameraRig(self.n, self.cameras, tuple(_mat(t) for t in twists), self.seed, self.space_twist)

    def with_space_twist(self, W) -> "CameraRig":
        return CameraRig(self.n, self.cameras, self.chart_twists, self.seed, _mat(W))

    # -- serialization --------------------------------------------------------

    def to_json(self) -> str:
        def enc(m):
            return [[str(x) for x in row] for row in m]

        payload = {
            "n": self.n,
            "seed": self.seed,
            "cameras": [enc(A) for A in self.cameras],
            "chart_twists": [enc(T) for T in self.chart_twists],
        }
        if self.space_twist is not None:
            payload["space_twist"] = enc(self.space_twist)
        return json.dumps(payload, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "CameraRig":
        data = json.loads(text)

        def dec(m):
            return tuple(tuple(Fraction(x) for x in row) for row in m)

        return cls(
            int(data["n"]),
            tuple(dec(A) for A in data["cameras"]),
            tuple(dec(T) for T in data["chart_twists"]),
            data.get("seed"),
            dec(data["space_twist"]) if data.get("space_twist") else None,
        )


def _random_invertible(rng: random.Random, size: int) -> Matrix:
    for _ in range(MAX_ATTEMPTS):
        T = _random_int_matrix(rng, size, size)
        if _sym(T).det() != 0:
            return T
    raise InternalError("could not draw an invertible matrix")


def random_camera_rig(n: int, seed: int, *, space_twist: bool = False) -> CameraRig:
    """Cameras with integer entries in [-100, 100], resampled until valid."""
    if n < 2:
        raise ValueError("need at least two cameras")
    rng = random.Random(seed)
    for _ in range(MAX_ATTEMPTS):
        cameras = tuple(_random_int_matrix(rng, 3, 4) for _ in range(n))
        twists = tuple(_random_invertible(rng, 3) for _ in range(n))
        W = _random_invertible(rng, 4) if space_twist else None
        try:
            return CameraRig(n, cameras, twists, seed, W)
        except ValueError:
            continue
    raise InternalError(f"no valid rig after {MAX_ATTEMPTS} attempts")


def random_chart_twists(n: int, seed: int) -> tuple:
    rng = random.Random(seed)
    return tuple(_random_invertible(rng, 3) for _ in range(n))


@dataclass(frozen=True)
class MultiviewMap:
    ring: PolyRing
    components: tuple  # 2n (numerator, denominator) pairs

    @property
    def denominators(self) -> list:
        return [self.components[2 * i][1] for i in range(len(self.components) // 2)]

    def presentation(self) -> VarietyPresentation:
        return VarietyPresentation.parametric(self.components)

    def evaluate(self, point: Sequence) -> tuple:
        values = []
        for num, den in self.components:
            d = den.evaluate(point)
            if not d:
                raise ZeroDivisionError("point lies on a denominator")
            values.append(num.evaluate(point) / d if isinstance(d, Fraction) else
                          num.evaluate(point) * self.ring.field.inv(d) % self.ring.field.p)
        return tuple(values)


def multiview_map(rig: CameraRig, field=None) -> MultiviewMap:
    ring = PolyRing(PARAMS, field or make_field(None))
    y = ring.gens()
    hom = list(y) + [ring.one]

    def row_form(row):
        return sum((c * v for c, v in zip(row, hom)), ring.zero)

    comps = []
    dens = []
    for M in rig.effective_cameras():
        den = row_form(M[2])
        if den.is_zero():
            raise DegenerateChart("denominator vanishes identically")
        for other in dens:
            if _proportional([den.coefficient(e) for e in _LINEAR],
                             [other.coefficient(e) for e in _LINEAR]):
                raise DegenerateChart("two views share a line at infinity")
        dens.append(den)
        comps.append((row_form(M[0]), den))
        comps.append((row_form(M[1]), den))
    return MultiviewMap(ring, tuple(comps))


_LINEAR = ((1, 0, 0), (0, 1, 0), (0, 0, 1), (0, 0, 0))


def multiview_count(n: int, prime: int, seed: int, *, second_chart: bool = False,
                    order=DEGREVLEX, limits=None, chain: bool = True):
    """One trial: fresh rig from ``seed``, random data, count off the denominators."""
    from .groebner import DEFAULT_LIMITS

    rig = random_camera_rig(n, seed, space_twist=second_chart)
    field = make_field(prime)
    mv = multiview_map(rig).presentation().change_field(field)
    rng = random.Random(seed ^ 0x5EED)
    alpha = random_point(field, 2 * n, rng)
    ideal, ineq = parametric_critical_system(mv, alpha)
    return count_with_inequation(ideal, ineq, order, chain=chain, limits=limits or DEFAULT_LIMITS)


class _MultiviewJob:
    def __init__(self, n, second_chart, protocol):
        self.n, self.second_chart, self.protocol = n, second_chart, protocol

    def __call__(self, prime, seed):
        p = self.protocol
        return multiview_count(self.n, prime, seed, second_chart=self.second_chart,
                               order=p.order, limits=p.limits, chain=p.chain)


def ed_degree_multiview(n: int, protocol: Protocol = Protocol(), *, second_chart: bool = False,
                        strict: bool = True) -> EDCertificate:
    """ED degree of the affine multiview variety; every trial draws a fresh rig."""
    if n < 2:
        raise ValueError("need at least two cameras")
    return run_protocol(_MultiviewJob(n, second_chart, protocol), protocol, strict=strict)


def conjecture_value(n: int) -> int:
    """9/2 n^3 - 21/2 n^2 + 8 n - 4, evaluated exactly."""
    if n < 2:
        raise ValueError("n must be at least 2")
    v = Fraction(9, 2) * n ** 3 - Fraction(21, 2) * n ** 2 + 8 * n - 4
    if v.denominator != 1:
        raise NotInteger(f"closed form is not integral at n={n}: {v}")
    return int(v)


def hl_bound(n: int) -> int:
    """Upper bound 6n^3 - 15n^2 + 11n - 4."""
    if n < 2:
        raise ValueError("n must be at least 2")
    return 6 * n ** 3 - 15 * n ** 2 + 11 * n - 4
